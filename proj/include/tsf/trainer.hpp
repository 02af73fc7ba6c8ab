#ifndef TSF_TRAINER_HPP
#define TSF_TRAINER_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "tsf/cells.hpp"
#include "tsf/numkit.hpp"
#include "tsf/pipeline.hpp"

namespace tsf {

enum class CellKind { Rnn, Lstm, BiLstm };

/// A single recurrent layer plus an affine scalar readout of the layer's
/// final output. The readout width is `hidden` for Rnn/Lstm and `2*hidden`
/// for BiLstm (concatenated directions).
struct Network {
    CellKind kind = CellKind::Lstm;
    std::size_t input_dim = 1;
    std::size_t hidden = 0;
    RnnParams rnn;        // used when kind == Rnn
    LstmParams fwd;       // used when kind == Lstm or BiLstm
    LstmParams bwd;       // used when kind == BiLstm
    Vec w_out;
    double b_out = 0.0;

    std::size_t readout_width() const {
        return kind == CellKind::BiLstm ? 2 * hidden : hidden;
    }
};

/// Fresh network with weights uniform in [-1/sqrt(n), +1/sqrt(n)], n being
/// the receiving width (hidden for cell weights, readout fan-in for the
/// head), and all biases zero. Consumes the generator in packing order, so
/// a fixed seed pins every weight.
Network init_network(CellKind kind, std::size_t hidden, std::size_t input_dim, Rng& rng);

/// Trainable parameters flattened in a fixed documented order (gates
/// f,i,c,o; recurrent before input weights before bias; forward cell
/// before backward; readout last). The flat layout is what the optimizer,
/// the clipper and the finite-difference checks operate on.
std::vector<double> params_flat(const Network& net);
void set_params_flat(Network& net, std::span<const double> flat);
std::size_t param_count(const Network& net);

/// Prediction for one lookback window of scalars, folding the recurrent
/// layer over the window one value per step.
///
/// For Lstm/Rnn, `io_state` (when non-null) supplies the incoming carried
/// state and receives the final state, which is how stateful training and
/// priming work; null means start from zero. BiLstm always starts both
/// directions from zero and ignores io_state.
double predict_window(const Network& net, std::span<const double> window,
                      CellState* io_state = nullptr);

struct BatchGradients {
    std::vector<double> grad;  // flat, same layout as params_flat
    double loss = 0.0;         // MSE over the batch at the incoming weights
    CellState final_state;     // carried state after the last sample (Lstm path)
    Vec predictions;           // one per sample, in batch order
};

/// Exact reverse-mode gradients of the batch MSE through the full forward
/// pass: the forget/input/output product paths of the cell update and, for
/// BiLstm, both directional passes. Every sample starts from the batch's
/// incoming state s0, which is treated as constant (stateful truncation at
/// the batch boundary); final_state is the last sample's final state, the
/// value a stateful loop hands to the next batch. BiLstm ignores s0.
BatchGradients bptt_gradients(const Network& net, std::span<const Vec> windows,
                              std::span<const double> targets, const CellState& s0);

/// Scales the whole gradient vector to global L2 norm max_norm when it
/// exceeds it; identity otherwise. Returns the pre-clip norm.
double clip_gradients(std::span<double> grads, double max_norm);

struct AdamConfig {
    double alpha = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

struct AdamState {
    AdamConfig cfg;
    std::vector<double> m;
    std::vector<double> v;
    long t = 0;

    explicit AdamState(std::size_t n, AdamConfig c = {}) : cfg(c), m(n, 0.0), v(n, 0.0) {}
};

/// One bias-corrected Adam update, in place.
void adam_step(AdamState& state, std::span<double> params, std::span<const double> grads);

struct TrainConfig {
    std::size_t epochs = 1;
    std::size_t neurons = 4;
    std::size_t batch_size = 32;
    std::size_t lookback = 1;
    double clip_norm = 5.0;
    std::uint64_t seed = 7;
    bool shuffle = false;  // contiguous in-order batches; shuffling is out of contract
    AdamConfig adam{};

    void validate() const;  // throws std::invalid_argument on a bad field
};

struct LossRecord {
    std::size_t epoch;       // 1-based
    std::size_t batch_step;  // 1-based, resets each epoch
    double loss;
};

struct LossTrace {
    std::vector<LossRecord> records;

    /// Delimited text with header epoch,batch_step,loss.
    void to_csv(std::ostream& out) const;
};

double mse_loss(std::span<const double> pred, std::span<const double> target);

enum class ModelOption { Lstm, BiLstm };

struct FitResult {
    Network net;
    LossTrace trace;
};

/// The epoch/batch training loop: in-order contiguous batches, per-batch
/// loss telemetry, gradient clipping, Adam updates. Option Lstm carries
/// hidden state across batches within an epoch and resets it at epoch
/// end; option BiLstm runs every sample from zero state. The tail batch
/// shorter than batch_size is trained as-is.
FitResult fit(ModelOption option, const SupervisedSet& train, const TrainConfig& cfg);

}  // namespace tsf

#endif  // TSF_TRAINER_HPP
