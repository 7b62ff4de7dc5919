#pragma once

#include "pricecast/dataset.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace pricecast::lstm {

/// Gate blocks are stacked in this order inside every layer's weights.
enum class Gate { forget = 0, input = 1, candidate = 2, output = 3 };

enum class Mode { train, infer };

/// One LSTM layer with a forget gate:
///   f = sigmoid(W_fh h + W_fx x + b_f)      i = sigmoid(W_ih h + W_ix x + b_i)
///   g = tanh(W_gh h + W_gx x + b_g)         o = sigmoid(W_oh h + W_ox x + b_o)
///   c' = f*c + i*g                          h' = o*tanh(c')
/// The four gates share stacked matrices of 4*units rows.
struct LayerParams {
    Eigen::MatrixXd w_h;  // 4H x H recurrent weights
    Eigen::MatrixXd w_x;  // 4H x I input weights
    Eigen::VectorXd b;    // 4H biases

    LayerParams() = default;
    LayerParams(int units, int input_size);

    [[nodiscard]] int units() const { return static_cast<int>(w_h.cols()); }
    [[nodiscard]] int input_size() const { return static_cast<int>(w_x.cols()); }

    auto recurrent(Gate g) { return w_h.middleRows(static_cast<int>(g) * units(), units()); }
    auto input(Gate g) { return w_x.middleRows(static_cast<int>(g) * units(), units()); }
    auto bias(Gate g) { return b.segment(static_cast<int>(g) * units(), units()); }
    [[nodiscard]] auto recurrent(Gate g) const { return w_h.middleRows(static_cast<int>(g) * units(), units()); }
    [[nodiscard]] auto input(Gate g) const { return w_x.middleRows(static_cast<int>(g) * units(), units()); }
    [[nodiscard]] auto bias(Gate g) const { return b.segment(static_cast<int>(g) * units(), units()); }
};

/// Scalar regression head on the last hidden state.
struct DenseHead {
    Eigen::VectorXd w;
    double b = 0.0;
};

/// All trainable tensors. Gradients and optimizer moments use the same type.
struct Parameters {
    std::vector<LayerParams> layers;
    DenseHead dense;

    [[nodiscard]] Parameters zeros_like() const;
    [[nodiscard]] std::size_t size() const;
    /// Every tensor as a flat mutable view, in a fixed order.
    [[nodiscard]] std::vector<Eigen::Map<Eigen::VectorXd>> tensors();
    [[nodiscard]] bool congruent(const Parameters& other) const;
};

struct StackConfig {
    int layers = 3;
    int units = 100;
    double dropout = 0.1;
    int window = 60;
    std::uint64_t seed = 0;
};

/// Stacked LSTM regressor: (LSTM -> dropout) x layers -> dense(1).
struct LstmStack {
    Parameters params;
    std::vector<double> dropout_rates;  // one per layer, in [0, 1)
    int window = 60;
    std::uint64_t seed = 0;

    /// Seeded initialization: weights uniform in [-1/sqrt(units), 1/sqrt(units)],
    /// forget-gate bias 1, other biases 0.
    static LstmStack create(const StackConfig& config);
    void validate() const;
};

struct CellState {
    Eigen::MatrixXd h;  // H x B
    Eigen::MatrixXd c;  // H x B
};

/// Output of one cell step, with gate activations kept for backprop.
struct CellStep {
    CellState state;
    Eigen::MatrixXd gates;   // 4H x B post-activation, stacked f, i, g, o
    Eigen::MatrixXd tanh_c;  // H x B
};

/// One timestep for a batch (columns are samples).
CellStep cell_forward(const LayerParams& params, const Eigen::MatrixXd& x, const CellState& prev);

/// Inverted dropout. Identity in infer mode or when rate == 0.
Eigen::MatrixXd dropout(const Eigen::MatrixXd& values, double rate, Mode mode, std::mt19937_64& rng);

struct LayerCache {
    Eigen::MatrixXd inputs;  // I x (T*B), post-dropout output of the layer below
    Eigen::MatrixXd hidden;  // H x ((T+1)*B); first block is h_{-1} = 0
    Eigen::MatrixXd cell;    // H x ((T+1)*B); first block is c_{-1} = 0
    Eigen::MatrixXd gates;   // 4H x (T*B)
    Eigen::MatrixXd tanh_c;  // H x (T*B)
    Eigen::MatrixXd mask;    // dropout multipliers on the layer output, empty if none
};

struct ForwardCache {
    int batch = 0;
    int steps = 0;
    std::vector<LayerCache> layers;
    Eigen::MatrixXd head_input;  // H x B, last hidden state after dropout
};

struct ForwardResult {
    Eigen::VectorXd predictions;  // B
    ForwardCache cache;
};

/// Runs a batch of windows (T x B; column b is one window, oldest first).
ForwardResult stack_forward(const LstmStack& stack, const Eigen::MatrixXd& windows, Mode mode,
                            std::mt19937_64& rng);

/// Single-window convenience wrapper (infer mode).
double predict_one(const LstmStack& stack, std::span<const double> window);

/// Infer-mode predictions for every sample of a dataset.
std::vector<double> predict(const LstmStack& stack, const WindowedDataset& data);

double mse_loss(std::span<const double> predictions, std::span<const double> targets);

/// Backpropagation through time. `loss_grad` holds dLoss/dprediction per sample.
Parameters backward(const LstmStack& stack, const ForwardCache& cache, const Eigen::VectorXd& loss_grad);

struct TrainConfig {
    int epochs = 50;
    int batch_size = 32;
    double learning_rate = 0.001;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_epsilon = 1e-8;
    std::uint64_t seed = 0;
    bool shuffle = true;

    void validate() const;
};

struct AdamState {
    Parameters m;
    Parameters v;
    long step = 0;
};

AdamState adam_init(const Parameters& params);

/// One bias-corrected Adam update; increments state.step first.
void adam_step(Parameters& params, Parameters& grads, AdamState& state, const TrainConfig& config);

struct EpochLoss {
    int epoch = 0;
    double train_mse = 0.0;  // mean mini-batch loss (dropout active)
    double val_mse = 0.0;    // infer mode
};

struct TrainResult {
    LstmStack stack;  // snapshot with the lowest validation loss
    std::vector<EpochLoss> history;
    int best_epoch = 0;
};

/// Mini-batch Adam training on MSE. Throws NumericError on a non-finite loss.
TrainResult train(const LstmStack& stack, const WindowedDataset& train_set, const WindowedDataset& val_set,
                  const TrainConfig& config, const std::function<void(const EpochLoss&)>& on_epoch = {});

/// One-step predictions over `actuals`: each step predicts from the current
/// window, then appends the observed actual (never the prediction).
std::vector<double> multi_sequence_predict(const LstmStack& stack, std::span<const double> seed_window,
                                           std::span<const double> actuals);

/// Keyed text checkpoint carrying dimensions, seed, tensors and training config.
/// The scaler, when given, records the normalization the stack was trained under.
std::string checkpoint_to_text(const LstmStack& stack, const TrainConfig& config,
                               const std::string& fingerprint = {},
                               const std::optional<Scaler>& scaler = std::nullopt);
LstmStack checkpoint_from_text(const std::string& text, TrainConfig* config = nullptr,
                               std::string* fingerprint = nullptr, std::optional<Scaler>* scaler = nullptr);

}  // namespace pricecast::lstm
