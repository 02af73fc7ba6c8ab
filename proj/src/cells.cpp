#include "tsf/cells.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace tsf {

Vec rnn_step(const RnnParams& p, const Vec& x, const Vec& h_prev) {
    Vec a = affine(p.wx, x, p.wh, h_prev, p.b);
    for (double& v : a) v = tanh_act(v);
    return a;
}

std::pair<CellState, GateTrace> lstm_step(const LstmParams& p, const Vec& x,
                                          const CellState& s_prev) {
    const std::size_t hidden = p.hidden();
    if (s_prev.h.size() != hidden || s_prev.c.size() != hidden) {
        throw std::invalid_argument("lstm_step: state size " + std::to_string(s_prev.h.size()) +
                                    " does not match hidden size " + std::to_string(hidden));
    }

    GateTrace t;
    t.f = affine(p.wfh, s_prev.h, p.wfx, x, p.bf);
    t.i = affine(p.wih, s_prev.h, p.wix, x, p.bi);
    t.c_cand = affine(p.wch, s_prev.h, p.wcx, x, p.bc);
    t.o = affine(p.woh, s_prev.h, p.wox, x, p.bo);
    for (std::size_t k = 0; k < hidden; ++k) {
        t.f[k] = sigmoid(t.f[k]);
        t.i[k] = sigmoid(t.i[k]);
        t.c_cand[k] = tanh_act(t.c_cand[k]);
        t.o[k] = sigmoid(t.o[k]);
    }

    t.c.resize(hidden);
    t.h.resize(hidden);
    for (std::size_t k = 0; k < hidden; ++k) {
        t.c[k] = t.f[k] * s_prev.c[k] + t.i[k] * t.c_cand[k];
        t.h[k] = t.o[k] * tanh_act(t.c[k]);
    }

    CellState s{t.h, t.c};
    return {std::move(s), std::move(t)};
}

LstmForwardResult lstm_forward(const LstmParams& p, std::span<const Vec> xs,
                               const CellState& s0) {
    LstmForwardResult out;
    out.states.reserve(xs.size());
    out.traces.reserve(xs.size());
    const CellState* prev = &s0;
    for (const Vec& x : xs) {
        auto [s, t] = lstm_step(p, x, *prev);
        out.states.push_back(std::move(s));
        out.traces.push_back(std::move(t));
        prev = &out.states.back();
    }
    return out;
}

std::vector<Vec> bilstm_forward(const LstmParams& pf, const LstmParams& pb,
                                std::span<const Vec> xs) {
    if (pf.hidden() != pb.hidden() || pf.input() != pb.input()) {
        throw std::invalid_argument(
            "bilstm_forward: forward cell is " + std::to_string(pf.hidden()) + "x" +
            std::to_string(pf.input()) + " but backward cell is " + std::to_string(pb.hidden()) +
            "x" + std::to_string(pb.input()));
    }
    const std::size_t n = xs.size();
    const std::size_t hidden = pf.hidden();

    std::vector<Vec> reversed(xs.rbegin(), xs.rend());
    LstmForwardResult fwd = lstm_forward(pf, xs, CellState::zero(hidden));
    LstmForwardResult bwd = lstm_forward(pb, reversed, CellState::zero(hidden));

    std::vector<Vec> out(n);
    for (std::size_t t = 0; t < n; ++t) {
        Vec merged(2 * hidden);
        const Vec& hf = fwd.states[t].h;
        const Vec& hb = bwd.states[n - 1 - t].h;
        std::copy(hf.begin(), hf.end(), merged.begin());
        std::copy(hb.begin(), hb.end(), merged.begin() + static_cast<std::ptrdiff_t>(hidden));
        out[t] = std::move(merged);
    }
    return out;
}

}  // namespace tsf
