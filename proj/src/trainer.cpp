#include "tsf/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace tsf {
namespace {

Mat zeros_like(const Mat& m) { return Mat(m.rows, m.cols); }

LstmParams zeros_like(const LstmParams& p) {
    LstmParams g;
    g.wfh = zeros_like(p.wfh);
    g.wfx = zeros_like(p.wfx);
    g.bf = Vec(p.bf.size(), 0.0);
    g.wih = zeros_like(p.wih);
    g.wix = zeros_like(p.wix);
    g.bi = Vec(p.bi.size(), 0.0);
    g.wch = zeros_like(p.wch);
    g.wcx = zeros_like(p.wcx);
    g.bc = Vec(p.bc.size(), 0.0);
    g.woh = zeros_like(p.woh);
    g.wox = zeros_like(p.wox);
    g.bo = Vec(p.bo.size(), 0.0);
    return g;
}

Network zeros_like(const Network& net) {
    Network g = net;
    if (net.kind == CellKind::Rnn) {
        g.rnn.wx = zeros_like(net.rnn.wx);
        g.rnn.wh = zeros_like(net.rnn.wh);
        g.rnn.b = Vec(net.rnn.b.size(), 0.0);
    } else {
        g.fwd = zeros_like(net.fwd);
        if (net.kind == CellKind::BiLstm) g.bwd = zeros_like(net.bwd);
    }
    std::fill(g.w_out.begin(), g.w_out.end(), 0.0);
    g.b_out = 0.0;
    return g;
}

// g += a (outer) b
void acc_outer(Mat& g, const Vec& a, const Vec& b) {
    for (std::size_t r = 0; r < g.rows; ++r) {
        const double ar = a[r];
        double* row = g.data.data() + r * g.cols;
        for (std::size_t c = 0; c < g.cols; ++c) row[c] += ar * b[c];
    }
}

void acc_vec(Vec& g, const Vec& a) {
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += a[i];
}

// out += W^T a
void acc_matT_vec(Vec& out, const Mat& w, const Vec& a) {
    for (std::size_t r = 0; r < w.rows; ++r) {
        const double ar = a[r];
        const double* row = w.data.data() + r * w.cols;
        for (std::size_t c = 0; c < w.cols; ++c) out[c] += ar * row[c];
    }
}

// Reverse pass over one LSTM sequence. dh_last is the loss gradient at the
// final hidden vector; the incoming state s0 is treated as constant.
void backprop_lstm_sequence(const LstmParams& p, std::span<const Vec> xs, const CellState& s0,
                            const LstmForwardResult& fr, const Vec& dh_last, LstmParams& g) {
    const std::size_t hidden = p.hidden();
    const std::size_t steps = xs.size();
    Vec dh = dh_last;
    Vec dc(hidden, 0.0);
    Vec df(hidden), di(hidden), dcc(hidden), dout(hidden);
    for (std::size_t t = steps; t-- > 0;) {
        const GateTrace& tr = fr.traces[t];
        const Vec& h_prev = t > 0 ? fr.states[t - 1].h : s0.h;
        const Vec& c_prev = t > 0 ? fr.states[t - 1].c : s0.c;

        for (std::size_t k = 0; k < hidden; ++k) {
            const double tanh_c = tanh_act(tr.c[k]);
            dout[k] = dh[k] * tanh_c;
            dc[k] += dh[k] * tr.o[k] * (1.0 - tanh_c * tanh_c);
            df[k] = dc[k] * c_prev[k];
            di[k] = dc[k] * tr.c_cand[k];
            dcc[k] = dc[k] * tr.i[k];
        }
        // to pre-activations
        for (std::size_t k = 0; k < hidden; ++k) {
            df[k] *= tr.f[k] * (1.0 - tr.f[k]);
            di[k] *= tr.i[k] * (1.0 - tr.i[k]);
            dcc[k] *= 1.0 - tr.c_cand[k] * tr.c_cand[k];
            dout[k] *= tr.o[k] * (1.0 - tr.o[k]);
        }

        acc_outer(g.wfh, df, h_prev);
        acc_outer(g.wfx, df, xs[t]);
        acc_vec(g.bf, df);
        acc_outer(g.wih, di, h_prev);
        acc_outer(g.wix, di, xs[t]);
        acc_vec(g.bi, di);
        acc_outer(g.wch, dcc, h_prev);
        acc_outer(g.wcx, dcc, xs[t]);
        acc_vec(g.bc, dcc);
        acc_outer(g.woh, dout, h_prev);
        acc_outer(g.wox, dout, xs[t]);
        acc_vec(g.bo, dout);

        std::fill(dh.begin(), dh.end(), 0.0);
        acc_matT_vec(dh, p.wfh, df);
        acc_matT_vec(dh, p.wih, di);
        acc_matT_vec(dh, p.wch, dcc);
        acc_matT_vec(dh, p.woh, dout);
        for (std::size_t k = 0; k < hidden; ++k) dc[k] *= tr.f[k];
    }
}

std::vector<Vec> rnn_forward(const RnnParams& p, std::span<const Vec> xs, const Vec& h0) {
    std::vector<Vec> hs;
    hs.reserve(xs.size());
    const Vec* prev = &h0;
    for (const Vec& x : xs) {
        hs.push_back(rnn_step(p, x, *prev));
        prev = &hs.back();
    }
    return hs;
}

void backprop_rnn_sequence(const RnnParams& p, std::span<const Vec> xs, const Vec& h0,
                           const std::vector<Vec>& hs, const Vec& dh_last, RnnParams& g) {
    const std::size_t hidden = p.hidden();
    Vec dh = dh_last;
    Vec da(hidden);
    for (std::size_t t = xs.size(); t-- > 0;) {
        const Vec& h = hs[t];
        const Vec& h_prev = t > 0 ? hs[t - 1] : h0;
        for (std::size_t k = 0; k < hidden; ++k) da[k] = dh[k] * (1.0 - h[k] * h[k]);
        acc_outer(g.wx, da, xs[t]);
        acc_outer(g.wh, da, h_prev);
        acc_vec(g.b, da);
        std::fill(dh.begin(), dh.end(), 0.0);
        acc_matT_vec(dh, p.wh, da);
    }
}

// One lookback window of scalars becomes a sequence of input_dim-wide steps.
std::vector<Vec> window_to_steps(std::span<const double> window, std::size_t input_dim) {
    if (input_dim == 0 || window.size() % input_dim != 0) {
        throw std::invalid_argument("window of length " + std::to_string(window.size()) +
                                    " does not divide into steps of width " +
                                    std::to_string(input_dim));
    }
    const std::size_t steps = window.size() / input_dim;
    std::vector<Vec> xs(steps);
    for (std::size_t t = 0; t < steps; ++t) {
        xs[t].assign(window.begin() + static_cast<std::ptrdiff_t>(t * input_dim),
                     window.begin() + static_cast<std::ptrdiff_t>((t + 1) * input_dim));
    }
    return xs;
}

void append_mat(std::vector<double>& out, const Mat& m) {
    out.insert(out.end(), m.data.begin(), m.data.end());
}

void append_vec(std::vector<double>& out, const Vec& v) {
    out.insert(out.end(), v.begin(), v.end());
}

void append_lstm(std::vector<double>& out, const LstmParams& p) {
    append_mat(out, p.wfh);
    append_mat(out, p.wfx);
    append_vec(out, p.bf);
    append_mat(out, p.wih);
    append_mat(out, p.wix);
    append_vec(out, p.bi);
    append_mat(out, p.wch);
    append_mat(out, p.wcx);
    append_vec(out, p.bc);
    append_mat(out, p.woh);
    append_mat(out, p.wox);
    append_vec(out, p.bo);
}

std::size_t take_mat(Mat& m, std::span<const double> flat, std::size_t pos) {
    std::copy(flat.begin() + static_cast<std::ptrdiff_t>(pos),
              flat.begin() + static_cast<std::ptrdiff_t>(pos + m.data.size()), m.data.begin());
    return pos + m.data.size();
}

std::size_t take_vec(Vec& v, std::span<const double> flat, std::size_t pos) {
    std::copy(flat.begin() + static_cast<std::ptrdiff_t>(pos),
              flat.begin() + static_cast<std::ptrdiff_t>(pos + v.size()), v.begin());
    return pos + v.size();
}

std::size_t take_lstm(LstmParams& p, std::span<const double> flat, std::size_t pos) {
    pos = take_mat(p.wfh, flat, pos);
    pos = take_mat(p.wfx, flat, pos);
    pos = take_vec(p.bf, flat, pos);
    pos = take_mat(p.wih, flat, pos);
    pos = take_mat(p.wix, flat, pos);
    pos = take_vec(p.bi, flat, pos);
    pos = take_mat(p.wch, flat, pos);
    pos = take_mat(p.wcx, flat, pos);
    pos = take_vec(p.bc, flat, pos);
    pos = take_mat(p.woh, flat, pos);
    pos = take_mat(p.wox, flat, pos);
    pos = take_vec(p.bo, flat, pos);
    return pos;
}

// Weights uniform in +-1/sqrt(hidden); biases zero, the convention of the
// framework stacks this design mirrors.
LstmParams init_lstm_params(std::size_t hidden, std::size_t input_dim, Rng& rng) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(hidden));
    LstmParams p;
    p.wfh = init_uniform(rng, hidden, hidden, bound);
    p.wfx = init_uniform(rng, hidden, input_dim, bound);
    p.bf = Vec(hidden, 0.0);
    p.wih = init_uniform(rng, hidden, hidden, bound);
    p.wix = init_uniform(rng, hidden, input_dim, bound);
    p.bi = Vec(hidden, 0.0);
    p.wch = init_uniform(rng, hidden, hidden, bound);
    p.wcx = init_uniform(rng, hidden, input_dim, bound);
    p.bc = Vec(hidden, 0.0);
    p.woh = init_uniform(rng, hidden, hidden, bound);
    p.wox = init_uniform(rng, hidden, input_dim, bound);
    p.bo = Vec(hidden, 0.0);
    return p;
}

}  // namespace

Network init_network(CellKind kind, std::size_t hidden, std::size_t input_dim, Rng& rng) {
    if (hidden == 0 || input_dim == 0) {
        throw std::invalid_argument("init_network: hidden and input_dim must be positive");
    }
    Network net;
    net.kind = kind;
    net.input_dim = input_dim;
    net.hidden = hidden;
    const double cell_bound = 1.0 / std::sqrt(static_cast<double>(hidden));
    if (kind == CellKind::Rnn) {
        net.rnn.wx = init_uniform(rng, hidden, input_dim, cell_bound);
        net.rnn.wh = init_uniform(rng, hidden, hidden, cell_bound);
        net.rnn.b = Vec(hidden, 0.0);
    } else {
        net.fwd = init_lstm_params(hidden, input_dim, rng);
        if (kind == CellKind::BiLstm) net.bwd = init_lstm_params(hidden, input_dim, rng);
    }
    const std::size_t width = net.readout_width();
    const double head_bound = 1.0 / std::sqrt(static_cast<double>(width));
    net.w_out = init_uniform_vec(rng, width, head_bound);
    net.b_out = 0.0;
    return net;
}

std::vector<double> params_flat(const Network& net) {
    std::vector<double> flat;
    flat.reserve(param_count(net));
    if (net.kind == CellKind::Rnn) {
        append_mat(flat, net.rnn.wx);
        append_mat(flat, net.rnn.wh);
        append_vec(flat, net.rnn.b);
    } else {
        append_lstm(flat, net.fwd);
        if (net.kind == CellKind::BiLstm) append_lstm(flat, net.bwd);
    }
    append_vec(flat, net.w_out);
    flat.push_back(net.b_out);
    return flat;
}

void set_params_flat(Network& net, std::span<const double> flat) {
    if (flat.size() != param_count(net)) {
        throw std::invalid_argument("set_params_flat: got " + std::to_string(flat.size()) +
                                    " values for a network of " +
                                    std::to_string(param_count(net)) + " parameters");
    }
    std::size_t pos = 0;
    if (net.kind == CellKind::Rnn) {
        pos = take_mat(net.rnn.wx, flat, pos);
        pos = take_mat(net.rnn.wh, flat, pos);
        pos = take_vec(net.rnn.b, flat, pos);
    } else {
        pos = take_lstm(net.fwd, flat, pos);
        if (net.kind == CellKind::BiLstm) pos = take_lstm(net.bwd, flat, pos);
    }
    pos = take_vec(net.w_out, flat, pos);
    net.b_out = flat[pos];
}

std::size_t param_count(const Network& net) {
    const std::size_t h = net.hidden;
    const std::size_t i = net.input_dim;
    const std::size_t cell = 4 * (h * h + h * i + h);
    std::size_t n = 0;
    switch (net.kind) {
        case CellKind::Rnn: n = h * i + h * h + h; break;
        case CellKind::Lstm: n = cell; break;
        case CellKind::BiLstm: n = 2 * cell; break;
    }
    return n + net.readout_width() + 1;
}

double predict_window(const Network& net, std::span<const double> window, CellState* io_state) {
    const std::vector<Vec> steps = window_to_steps(window, net.input_dim);
    switch (net.kind) {
        case CellKind::Rnn: {
            const Vec h0 = io_state ? io_state->h : Vec(net.hidden, 0.0);
            const std::vector<Vec> hs = rnn_forward(net.rnn, steps, h0);
            const Vec& h = hs.empty() ? h0 : hs.back();
            if (io_state) io_state->h = h;
            return dot(net.w_out, h) + net.b_out;
        }
        case CellKind::Lstm: {
            const CellState s0 = io_state ? *io_state : CellState::zero(net.hidden);
            const LstmForwardResult fr = lstm_forward(net.fwd, steps, s0);
            const CellState& s = fr.states.empty() ? s0 : fr.states.back();
            if (io_state) *io_state = s;
            return dot(net.w_out, s.h) + net.b_out;
        }
        case CellKind::BiLstm: {
            const LstmForwardResult f = lstm_forward(net.fwd, steps, CellState::zero(net.hidden));
            std::vector<Vec> reversed(steps.rbegin(), steps.rend());
            const LstmForwardResult b = lstm_forward(net.bwd, reversed, CellState::zero(net.hidden));
            double acc = net.b_out;
            const Vec& hf = f.states.back().h;
            const Vec& hb = b.states.back().h;
            for (std::size_t k = 0; k < net.hidden; ++k) acc += net.w_out[k] * hf[k];
            for (std::size_t k = 0; k < net.hidden; ++k) acc += net.w_out[net.hidden + k] * hb[k];
            return acc;
        }
    }
    return 0.0;  // unreachable
}

BatchGradients bptt_gradients(const Network& net, std::span<const Vec> windows,
                              std::span<const double> targets, const CellState& s0) {
    if (windows.empty()) {
        throw std::invalid_argument("bptt_gradients: empty batch");
    }
    if (windows.size() != targets.size()) {
        throw std::invalid_argument("bptt_gradients: " + std::to_string(windows.size()) +
                                    " windows vs " + std::to_string(targets.size()) + " targets");
    }

    Network g = zeros_like(net);
    const double n = static_cast<double>(windows.size());
    // Every sample in the batch starts from the batch's incoming state; the
    // state hand-off happens between batches, which keeps the per-batch loss
    // an exact function of (params, s0) and the gradients below exact.
    const CellState state_in = s0.h.size() == net.hidden ? s0 : CellState::zero(net.hidden);
    CellState state_out = state_in;

    BatchGradients out;
    out.predictions.resize(windows.size());
    double loss = 0.0;

    for (std::size_t k = 0; k < windows.size(); ++k) {
        const std::vector<Vec> steps = window_to_steps(windows[k], net.input_dim);
        double pred = 0.0;
        switch (net.kind) {
            case CellKind::Lstm: {
                const LstmForwardResult fr = lstm_forward(net.fwd, steps, state_in);
                const Vec& h = fr.states.back().h;
                pred = dot(net.w_out, h) + net.b_out;
                const double dpred = 2.0 * (pred - targets[k]) / n;
                for (std::size_t j = 0; j < net.hidden; ++j) g.w_out[j] += dpred * h[j];
                g.b_out += dpred;
                Vec dh(net.hidden);
                for (std::size_t j = 0; j < net.hidden; ++j) dh[j] = dpred * net.w_out[j];
                backprop_lstm_sequence(net.fwd, steps, state_in, fr, dh, g.fwd);
                if (k + 1 == windows.size()) state_out = fr.states.back();
                break;
            }
            case CellKind::BiLstm: {
                const CellState zero = CellState::zero(net.hidden);
                const LstmForwardResult fr = lstm_forward(net.fwd, steps, zero);
                std::vector<Vec> reversed(steps.rbegin(), steps.rend());
                const LstmForwardResult br = lstm_forward(net.bwd, reversed, zero);
                const Vec& hf = fr.states.back().h;
                const Vec& hb = br.states.back().h;
                pred = net.b_out;
                for (std::size_t j = 0; j < net.hidden; ++j) pred += net.w_out[j] * hf[j];
                for (std::size_t j = 0; j < net.hidden; ++j)
                    pred += net.w_out[net.hidden + j] * hb[j];
                const double dpred = 2.0 * (pred - targets[k]) / n;
                for (std::size_t j = 0; j < net.hidden; ++j) g.w_out[j] += dpred * hf[j];
                for (std::size_t j = 0; j < net.hidden; ++j)
                    g.w_out[net.hidden + j] += dpred * hb[j];
                g.b_out += dpred;
                Vec dhf(net.hidden), dhb(net.hidden);
                for (std::size_t j = 0; j < net.hidden; ++j) {
                    dhf[j] = dpred * net.w_out[j];
                    dhb[j] = dpred * net.w_out[net.hidden + j];
                }
                backprop_lstm_sequence(net.fwd, steps, zero, fr, dhf, g.fwd);
                backprop_lstm_sequence(net.bwd, reversed, zero, br, dhb, g.bwd);
                break;
            }
            case CellKind::Rnn: {
                const std::vector<Vec> hs = rnn_forward(net.rnn, steps, state_in.h);
                const Vec& h = hs.back();
                pred = dot(net.w_out, h) + net.b_out;
                const double dpred = 2.0 * (pred - targets[k]) / n;
                for (std::size_t j = 0; j < net.hidden; ++j) g.w_out[j] += dpred * h[j];
                g.b_out += dpred;
                Vec dh(net.hidden);
                for (std::size_t j = 0; j < net.hidden; ++j) dh[j] = dpred * net.w_out[j];
                backprop_rnn_sequence(net.rnn, steps, state_in.h, hs, dh, g.rnn);
                if (k + 1 == windows.size()) state_out.h = hs.back();
                break;
            }
        }
        out.predictions[k] = pred;
        const double err = pred - targets[k];
        loss += err * err;
    }

    out.loss = loss / n;
    out.grad = params_flat(g);
    out.final_state = state_out;
    return out;
}

double clip_gradients(std::span<double> grads, double max_norm) {
    if (!(max_norm > 0.0)) {
        throw std::invalid_argument("clip_gradients: max_norm must be positive, got " +
                                    std::to_string(max_norm));
    }
    double sq = 0.0;
    for (double v : grads) sq += v * v;
    const double norm = std::sqrt(sq);
    if (norm > max_norm) {
        const double scale = max_norm / norm;
        for (double& v : grads) v *= scale;
    }
    return norm;
}

void adam_step(AdamState& state, std::span<double> params, std::span<const double> grads) {
    if (params.size() != grads.size() || params.size() != state.m.size()) {
        throw std::invalid_argument("adam_step: mismatched sizes (params " +
                                    std::to_string(params.size()) + ", grads " +
                                    std::to_string(grads.size()) + ", state " +
                                    std::to_string(state.m.size()) + ")");
    }
    const AdamConfig& c = state.cfg;
    state.t += 1;
    const double bc1 = 1.0 - std::pow(c.beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(c.beta2, static_cast<double>(state.t));
    for (std::size_t i = 0; i < params.size(); ++i) {
        state.m[i] = c.beta1 * state.m[i] + (1.0 - c.beta1) * grads[i];
        state.v[i] = c.beta2 * state.v[i] + (1.0 - c.beta2) * grads[i] * grads[i];
        const double m_hat = state.m[i] / bc1;
        const double v_hat = state.v[i] / bc2;
        params[i] -= c.alpha * m_hat / (std::sqrt(v_hat) + c.eps);
    }
}

void TrainConfig::validate() const {
    if (epochs < 1) throw std::invalid_argument("TrainConfig: epochs must be >= 1");
    if (neurons < 1) throw std::invalid_argument("TrainConfig: neurons must be >= 1");
    if (batch_size < 1) throw std::invalid_argument("TrainConfig: batch_size must be >= 1");
    if (lookback < 1) throw std::invalid_argument("TrainConfig: lookback must be >= 1");
    if (!(clip_norm > 0.0)) throw std::invalid_argument("TrainConfig: clip_norm must be > 0");
    if (shuffle) throw std::invalid_argument("TrainConfig: shuffle is fixed to false");
}

void LossTrace::to_csv(std::ostream& out) const {
    out << "epoch,batch_step,loss\n";
    for (const LossRecord& r : records) {
        out << r.epoch << ',' << r.batch_step << ',' << double_to_string(r.loss) << '\n';
    }
}

double mse_loss(std::span<const double> pred, std::span<const double> target) {
    if (pred.empty()) {
        throw std::invalid_argument("mse_loss: empty input");
    }
    if (pred.size() != target.size()) {
        throw std::invalid_argument("mse_loss: " + std::to_string(pred.size()) +
                                    " predictions vs " + std::to_string(target.size()) +
                                    " targets");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double d = pred[i] - target[i];
        acc += d * d;
    }
    return acc / static_cast<double>(pred.size());
}

FitResult fit(ModelOption option, const SupervisedSet& train, const TrainConfig& cfg) {
    cfg.validate();
    if (train.size() == 0) {
        throw std::invalid_argument("fit: empty training set");
    }
    if (train.lookback != cfg.lookback) {
        throw std::invalid_argument("fit: supervised set was framed with lookback " +
                                    std::to_string(train.lookback) + " but config says " +
                                    std::to_string(cfg.lookback));
    }

    Rng rng(cfg.seed);
    const CellKind kind = option == ModelOption::Lstm ? CellKind::Lstm : CellKind::BiLstm;
    FitResult result;
    result.net = init_network(kind, cfg.neurons, 1, rng);

    std::vector<double> theta = params_flat(result.net);
    AdamState adam(theta.size(), cfg.adam);

    const std::size_t n = train.size();
    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
        CellState state = CellState::zero(cfg.neurons);  // reset at every epoch start
        std::size_t batch_step = 0;
        for (std::size_t start = 0; start < n; start += cfg.batch_size) {
            const std::size_t end = std::min(start + cfg.batch_size, n);
            BatchGradients bg = bptt_gradients(
                result.net, std::span<const Vec>(train.x).subspan(start, end - start),
                std::span<const double>(train.y).subspan(start, end - start), state);
            ++batch_step;
            result.trace.records.push_back(LossRecord{epoch, batch_step, bg.loss});
            clip_gradients(bg.grad, cfg.clip_norm);
            adam_step(adam, theta, bg.grad);
            set_params_flat(result.net, theta);
            state = bg.final_state;
        }
    }
    return result;
}

}  // namespace tsf
