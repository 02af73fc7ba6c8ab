#include <cmath>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "tsf/cells.hpp"

using namespace tsf;

namespace {

LstmParams zero_lstm(std::size_t hidden, std::size_t input) {
    LstmParams p;
    p.wfh = Mat(hidden, hidden);
    p.wfx = Mat(hidden, input);
    p.bf = Vec(hidden, 0.0);
    p.wih = Mat(hidden, hidden);
    p.wix = Mat(hidden, input);
    p.bi = Vec(hidden, 0.0);
    p.wch = Mat(hidden, hidden);
    p.wcx = Mat(hidden, input);
    p.bc = Vec(hidden, 0.0);
    p.woh = Mat(hidden, hidden);
    p.wox = Mat(hidden, input);
    p.bo = Vec(hidden, 0.0);
    return p;
}

LstmParams random_lstm(std::size_t hidden, std::size_t input, Rng& rng) {
    LstmParams p = zero_lstm(hidden, input);
    const double b = 0.8;
    p.wfh = init_uniform(rng, hidden, hidden, b);
    p.wfx = init_uniform(rng, hidden, input, b);
    p.bf = init_uniform_vec(rng, hidden, b);
    p.wih = init_uniform(rng, hidden, hidden, b);
    p.wix = init_uniform(rng, hidden, input, b);
    p.bi = init_uniform_vec(rng, hidden, b);
    p.wch = init_uniform(rng, hidden, hidden, b);
    p.wcx = init_uniform(rng, hidden, input, b);
    p.bc = init_uniform_vec(rng, hidden, b);
    p.woh = init_uniform(rng, hidden, hidden, b);
    p.wox = init_uniform(rng, hidden, input, b);
    p.bo = init_uniform_vec(rng, hidden, b);
    return p;
}

std::vector<Vec> random_inputs(std::size_t steps, std::size_t input, Rng& rng) {
    std::vector<Vec> xs(steps);
    for (Vec& x : xs) x = init_uniform_vec(rng, input, 1.5);
    return xs;
}

}  // namespace

TEST_CASE("rnn_step zero parameters give a zero state") {
    RnnParams p{Mat(3, 2), Mat(3, 3), Vec(3, 0.0)};
    const Vec h = rnn_step(p, {0.7, -0.3}, {0.1, 0.2, 0.3});
    for (double v : h) CHECK(v == 0.0);
}

TEST_CASE("rnn_step scalar case is tanh of the input") {
    RnnParams p{Mat(1, 1), Mat(1, 1), Vec(1, 0.0)};
    p.wx(0, 0) = 1.0;
    const Vec h = rnn_step(p, {1.0}, {0.0});
    CHECK(h[0] == doctest::Approx(0.7615941560).epsilon(1e-9));
}

TEST_CASE("rnn_step output stays in (-1,1)") {
    // Bounds keep the pre-activation out of the regime where double tanh
    // rounds to exactly 1; the mathematical range is open.
    Rng rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        RnnParams p{init_uniform(rng, 4, 3, 1.2), init_uniform(rng, 4, 4, 1.2),
                    init_uniform_vec(rng, 4, 1.2)};
        const Vec h = rnn_step(p, init_uniform_vec(rng, 3, 1.5), init_uniform_vec(rng, 4, 1.0));
        for (double v : h) {
            CHECK(v > -1.0);
            CHECK(v < 1.0);
        }
    }
}

TEST_CASE("lstm_step zero parameters, zero previous cell") {
    const LstmParams p = zero_lstm(2, 1);
    auto [s, t] = lstm_step(p, {0.9}, CellState::zero(2));
    for (std::size_t k = 0; k < 2; ++k) {
        CHECK(t.f[k] == doctest::Approx(0.5));
        CHECK(t.i[k] == doctest::Approx(0.5));
        CHECK(t.o[k] == doctest::Approx(0.5));
        CHECK(t.c_cand[k] == 0.0);
        CHECK(s.c[k] == 0.0);
        CHECK(s.h[k] == 0.0);
    }
}

TEST_CASE("lstm_step zero parameters carry half the previous cell") {
    const LstmParams p = zero_lstm(1, 1);
    CellState prev{Vec{0.0}, Vec{2.0}};
    auto [s, t] = lstm_step(p, {0.0}, prev);
    CHECK(s.c[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.h[0] == doctest::Approx(0.5 * std::tanh(1.0)).epsilon(1e-12));
    CHECK(s.h[0] == doctest::Approx(0.3807970780).epsilon(1e-9));
    CHECK(t.c[0] == s.c[0]);
}

TEST_CASE("saturated forget gate carries the previous cell exactly") {
    Rng rng(22);
    LstmParams p = random_lstm(3, 2, rng);
    p.bf = Vec(3, 1000.0);  // forces f -> 1
    CellState prev{init_uniform_vec(rng, 3, 0.9), init_uniform_vec(rng, 3, 2.0)};
    const Vec x = init_uniform_vec(rng, 2, 1.0);
    auto [s, t] = lstm_step(p, x, prev);
    for (std::size_t k = 0; k < 3; ++k) {
        const double expected = prev.c[k] + t.i[k] * t.c_cand[k];
        CHECK(s.c[k] == doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("suppressed input gate reduces the cell update to the forget path") {
    Rng rng(23);
    LstmParams p = random_lstm(3, 2, rng);
    p.bi = Vec(3, -1e6);  // forces i -> 0
    CellState prev{init_uniform_vec(rng, 3, 0.9), init_uniform_vec(rng, 3, 2.0)};
    auto [s, t] = lstm_step(p, init_uniform_vec(rng, 2, 1.0), prev);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(s.c[k] == doctest::Approx(t.f[k] * prev.c[k]).epsilon(1e-9));
    }
}

TEST_CASE("gate ranges hold for random parameters") {
    Rng rng(24);
    for (int trial = 0; trial < 25; ++trial) {
        const LstmParams p = random_lstm(4, 2, rng);
        CellState s = CellState::zero(4);
        for (const Vec& x : random_inputs(6, 2, rng)) {
            auto [next, t] = lstm_step(p, x, s);
            for (std::size_t k = 0; k < 4; ++k) {
                CHECK(t.f[k] > 0.0);
                CHECK(t.f[k] < 1.0);
                CHECK(t.i[k] > 0.0);
                CHECK(t.i[k] < 1.0);
                CHECK(t.o[k] > 0.0);
                CHECK(t.o[k] < 1.0);
                CHECK(t.c_cand[k] > -1.0);
                CHECK(t.c_cand[k] < 1.0);
                CHECK(next.h[k] > -1.0);
                CHECK(next.h[k] < 1.0);
            }
            s = next;
        }
    }
}

TEST_CASE("lstm_forward length, base case and statefulness") {
    Rng rng(25);
    const LstmParams p = random_lstm(3, 2, rng);
    const std::vector<Vec> xs = random_inputs(7, 2, rng);
    const CellState s0 = CellState::zero(3);

    SUBCASE("empty sequence gives empty outputs") {
        const LstmForwardResult r = lstm_forward(p, std::span<const Vec>{}, s0);
        CHECK(r.states.empty());
        CHECK(r.traces.empty());
    }
    SUBCASE("length-1 sequence equals a single step") {
        const LstmForwardResult r = lstm_forward(p, std::span<const Vec>(xs.data(), 1), s0);
        auto [s, t] = lstm_step(p, xs[0], s0);
        CHECK(r.states.size() == 1);
        CHECK(r.states[0].h == s.h);
        CHECK(r.states[0].c == s.c);
    }
    SUBCASE("output length equals input length") {
        const LstmForwardResult r = lstm_forward(p, xs, s0);
        CHECK(r.states.size() == xs.size());
        CHECK(r.traces.size() == xs.size());
    }
    SUBCASE("splitting the sequence and carrying state matches one pass") {
        const LstmForwardResult whole = lstm_forward(p, xs, s0);
        const LstmForwardResult first = lstm_forward(p, std::span<const Vec>(xs.data(), 4), s0);
        const LstmForwardResult second =
            lstm_forward(p, std::span<const Vec>(xs.data() + 4, 3), first.final_state());
        for (std::size_t t = 0; t < 4; ++t) {
            CHECK(whole.states[t].h == first.states[t].h);
        }
        for (std::size_t t = 0; t < 3; ++t) {
            for (std::size_t k = 0; k < 3; ++k) {
                CHECK(whole.states[4 + t].h[k] ==
                      doctest::Approx(second.states[t].h[k]).epsilon(1e-15));
                CHECK(whole.states[4 + t].c[k] ==
                      doctest::Approx(second.states[t].c[k]).epsilon(1e-15));
            }
        }
    }
}

TEST_CASE("lstm_forward zero parameters give all-zero hidden outputs") {
    const LstmParams p = zero_lstm(3, 1);
    const std::vector<Vec> xs(5, Vec{0.4});
    const LstmForwardResult r = lstm_forward(p, xs, CellState::zero(3));
    for (const CellState& s : r.states) {
        for (double v : s.h) CHECK(v == 0.0);
    }
}

TEST_CASE("bilstm_forward zero parameters give zero output of width 2H") {
    const LstmParams p = zero_lstm(3, 2);
    const std::vector<Vec> xs(4, Vec{0.5, -0.5});
    const std::vector<Vec> out = bilstm_forward(p, p, xs);
    CHECK(out.size() == 4);
    for (const Vec& v : out) {
        CHECK(v.size() == 6);
        for (double x : v) CHECK(x == 0.0);
    }
}

TEST_CASE("bilstm_forward on a singleton is a pair of single steps") {
    Rng rng(26);
    const LstmParams pf = random_lstm(2, 1, rng);
    const LstmParams pb = random_lstm(2, 1, rng);
    const std::vector<Vec> xs{Vec{0.35}};
    const std::vector<Vec> out = bilstm_forward(pf, pb, xs);
    auto [sf, tf] = lstm_step(pf, xs[0], CellState::zero(2));
    auto [sb, tb] = lstm_step(pb, xs[0], CellState::zero(2));
    CHECK(out.size() == 1);
    for (std::size_t k = 0; k < 2; ++k) {
        CHECK(out[0][k] == sf.h[k]);
        CHECK(out[0][2 + k] == sb.h[k]);
    }
}

TEST_CASE("tied weights mirror across directions") {
    Rng rng(27);
    const LstmParams p = random_lstm(3, 1, rng);
    const std::vector<Vec> xs = random_inputs(6, 1, rng);
    const std::vector<Vec> reversed(xs.rbegin(), xs.rend());

    const std::vector<Vec> out = bilstm_forward(p, p, xs);
    const std::vector<Vec> out_rev = bilstm_forward(p, p, reversed);
    // forward half on xs equals, at mirrored indices, the backward half on
    // reverse(xs)
    const std::size_t n = xs.size();
    for (std::size_t t = 0; t < n; ++t) {
        for (std::size_t k = 0; k < 3; ++k) {
            CHECK(out[t][k] == doctest::Approx(out_rev[n - 1 - t][3 + k]).epsilon(1e-15));
        }
    }
}

TEST_CASE("reversal symmetry: swapped cells on reversed input swap the halves") {
    Rng rng(28);
    for (int trial = 0; trial < 10; ++trial) {
        const LstmParams pf = random_lstm(3, 2, rng);
        const LstmParams pb = random_lstm(3, 2, rng);
        const std::vector<Vec> xs = random_inputs(5, 2, rng);
        const std::vector<Vec> reversed(xs.rbegin(), xs.rend());

        const std::vector<Vec> lhs = bilstm_forward(pf, pb, reversed);
        const std::vector<Vec> rhs = bilstm_forward(pb, pf, xs);
        const std::size_t n = xs.size();
        for (std::size_t t = 0; t < n; ++t) {
            for (std::size_t k = 0; k < 3; ++k) {
                CHECK(lhs[t][k] == doctest::Approx(rhs[n - 1 - t][3 + k]).epsilon(1e-12));
                CHECK(lhs[t][3 + k] == doctest::Approx(rhs[n - 1 - t][k]).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("bilstm_forward rejects mismatched direction shapes") {
    Rng rng(29);
    const LstmParams pf = random_lstm(3, 2, rng);
    const LstmParams pb = random_lstm(4, 2, rng);
    const std::vector<Vec> xs = random_inputs(3, 2, rng);
    CHECK_THROWS_AS((void)bilstm_forward(pf, pb, xs), std::invalid_argument);
}
