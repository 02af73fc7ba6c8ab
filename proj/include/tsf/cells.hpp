#ifndef TSF_CELLS_HPP
#define TSF_CELLS_HPP

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "tsf/numkit.hpp"

namespace tsf {

/// Weights of a vanilla tanh RNN cell: h_t = tanh(Wx*x_t + Wh*h_{t-1} + b).
struct RnnParams {
    Mat wx;  // hidden x input
    Mat wh;  // hidden x hidden
    Vec b;   // hidden

    std::size_t hidden() const { return b.size(); }
    std::size_t input() const { return wx.cols; }
};

/// Weights of one LSTM cell, one (recurrent, input, bias) triple per gate.
/// Gate order throughout this codebase: forget, input, candidate, output.
struct LstmParams {
    Mat wfh, wfx;
    Vec bf;
    Mat wih, wix;
    Vec bi;
    Mat wch, wcx;
    Vec bc;
    Mat woh, wox;
    Vec bo;

    std::size_t hidden() const { return bf.size(); }
    std::size_t input() const { return wfx.cols; }
};

/// Hidden vector h and cell vector c carried across time steps. c is
/// unused by the vanilla RNN.
struct CellState {
    Vec h;
    Vec c;

    static CellState zero(std::size_t hidden) {
        return CellState{Vec(hidden, 0.0), Vec(hidden, 0.0)};
    }
};

/// All gate activations of one LSTM step, kept for backpropagation.
/// f, i, o lie in (0,1); c_cand in (-1,1).
struct GateTrace {
    Vec f;
    Vec i;
    Vec c_cand;
    Vec c;
    Vec o;
    Vec h;
};

/// One vanilla-RNN step: tanh(Wx*x + Wh*h_prev + b).
Vec rnn_step(const RnnParams& p, const Vec& x, const Vec& h_prev);

/// One LSTM step:
///   f = sigmoid(Wfh*h + Wfx*x + bf)
///   i = sigmoid(Wih*h + Wix*x + bi)
///   c_cand = tanh(Wch*h + Wcx*x + bc)
///   c = f.*c_prev + i.*c_cand
///   o = sigmoid(Woh*h + Wox*x + bo)
///   h = o.*tanh(c)
std::pair<CellState, GateTrace> lstm_step(const LstmParams& p, const Vec& x,
                                          const CellState& s_prev);

struct LstmForwardResult {
    std::vector<CellState> states;  // one per input step
    std::vector<GateTrace> traces;  // one per input step

    const CellState& final_state() const { return states.back(); }
};

/// Folds lstm_step over the sequence starting from s0. The caller owns the
/// initial state, so hidden state can be carried across calls (stateful
/// training). An empty sequence yields empty outputs.
LstmForwardResult lstm_forward(const LstmParams& p, std::span<const Vec> xs,
                               const CellState& s0);

/// Bidirectional pass: output t is [h_fwd(xs)[t] ; h_bwd(reverse(xs))[T-1-t]],
/// width 2H. Both directions start from zero state each call; a backward
/// pass has no meaningful state to carry between sequences.
std::vector<Vec> bilstm_forward(const LstmParams& pf, const LstmParams& pb,
                                std::span<const Vec> xs);

}  // namespace tsf

#endif  // TSF_CELLS_HPP
