#include "pricecast/lstm.hpp"

#include "pricecast/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace pricecast::lstm {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr std::uint64_t kDropoutStream = 0xd1b54a32d192ed03ULL;

MatrixXd sigmoid(const MatrixXd& z) {
    return (1.0 + (-z.array()).exp()).inverse().matrix();
}

// Gate math shared by cell_forward and stack_forward. `pre` already holds
// W_x x + b for this step.
void cell_step(const LayerParams& p, const Eigen::Ref<const MatrixXd>& pre, const Eigen::Ref<const MatrixXd>& h_prev,
               const Eigen::Ref<const MatrixXd>& c_prev,
               Eigen::Ref<MatrixXd> gates, Eigen::Ref<MatrixXd> tanh_c, Eigen::Ref<MatrixXd> h,
               Eigen::Ref<MatrixXd> c) {
    const int units = p.units();
    MatrixXd z = pre;
    z.noalias() += p.w_h * h_prev;
    gates.topRows(2 * units) = sigmoid(z.topRows(2 * units));
    gates.middleRows(2 * units, units) = z.middleRows(2 * units, units).array().tanh().matrix();
    gates.bottomRows(units) = sigmoid(z.bottomRows(units));
    const auto f = gates.topRows(units).array();
    const auto i = gates.middleRows(units, units).array();
    const auto g = gates.middleRows(2 * units, units).array();
    const auto o = gates.bottomRows(units).array();
    c = (f * c_prev.array() + i * g).matrix();
    tanh_c = c.array().tanh().matrix();
    h = (o * tanh_c.array()).matrix();
}

MatrixXd bernoulli_mask(Eigen::Index rows, Eigen::Index cols, double rate, std::mt19937_64& rng) {
    MatrixXd mask(rows, cols);
    const double keep_scale = 1.0 / (1.0 - rate);
    constexpr double kInv53 = 1.0 / 9007199254740992.0;
    double* data = mask.data();
    for (Eigen::Index k = 0; k < mask.size(); ++k) {
        const double u = static_cast<double>(rng() >> 11) * kInv53;
        data[k] = u < rate ? 0.0 : keep_scale;
    }
    return mask;
}

MatrixXd batch_matrix(const WindowedDataset& data, std::span<const std::size_t> rows) {
    MatrixXd x(static_cast<Eigen::Index>(data.window), static_cast<Eigen::Index>(rows.size()));
    for (std::size_t b = 0; b < rows.size(); ++b) {
        const auto& w = data.inputs[rows[b]];
        for (std::size_t t = 0; t < data.window; ++t) {
            x(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(b)) = w[t];
        }
    }
    return x;
}

}  // namespace

LayerParams::LayerParams(int units, int input_size)
    : w_h(MatrixXd::Zero(4 * units, units)), w_x(MatrixXd::Zero(4 * units, input_size)), b(VectorXd::Zero(4 * units)) {}

Parameters Parameters::zeros_like() const {
    Parameters z;
    for (const auto& layer : layers) z.layers.emplace_back(layer.units(), layer.input_size());
    z.dense.w = VectorXd::Zero(dense.w.size());
    z.dense.b = 0.0;
    return z;
}

std::size_t Parameters::size() const {
    std::size_t n = static_cast<std::size_t>(dense.w.size()) + 1;
    for (const auto& l : layers) n += static_cast<std::size_t>(l.w_h.size() + l.w_x.size() + l.b.size());
    return n;
}

std::vector<Eigen::Map<VectorXd>> Parameters::tensors() {
    std::vector<Eigen::Map<VectorXd>> out;
    for (auto& l : layers) {
        out.emplace_back(l.w_h.data(), l.w_h.size());
        out.emplace_back(l.w_x.data(), l.w_x.size());
        out.emplace_back(l.b.data(), l.b.size());
    }
    out.emplace_back(dense.w.data(), dense.w.size());
    out.emplace_back(&dense.b, 1);
    return out;
}

bool Parameters::congruent(const Parameters& other) const {
    if (layers.size() != other.layers.size() || dense.w.size() != other.dense.w.size()) return false;
    for (std::size_t i = 0; i < layers.size(); ++i) {
        if (layers[i].units() != other.layers[i].units() ||
            layers[i].input_size() != other.layers[i].input_size()) {
            return false;
        }
    }
    return true;
}

LstmStack LstmStack::create(const StackConfig& config) {
    if (config.layers < 1 || config.units < 1 || config.window < 1) {
        throw ConfigError("LSTM stack needs at least one layer, one unit and a positive window");
    }
    if (!(config.dropout >= 0.0 && config.dropout < 1.0)) throw ConfigError("dropout rate must lie in [0, 1)");
    LstmStack stack;
    stack.window = config.window;
    stack.seed = config.seed;
    stack.dropout_rates.assign(static_cast<std::size_t>(config.layers), config.dropout);

    std::mt19937_64 rng(config.seed);
    const double bound = 1.0 / std::sqrt(static_cast<double>(config.units));
    std::uniform_real_distribution<double> uniform(-bound, bound);
    const auto fill = [&](auto& m) {
        for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = uniform(rng);
    };
    int input_size = 1;
    for (int l = 0; l < config.layers; ++l) {
        LayerParams layer(config.units, input_size);
        fill(layer.w_h);
        fill(layer.w_x);
        layer.bias(Gate::forget).setConstant(1.0);
        stack.params.layers.push_back(std::move(layer));
        input_size = config.units;
    }
    stack.params.dense.w = VectorXd(config.units);
    fill(stack.params.dense.w);
    stack.params.dense.b = 0.0;
    return stack;
}

void LstmStack::validate() const {
    if (params.layers.empty()) throw ConfigError("LSTM stack has no layers");
    if (dropout_rates.size() != params.layers.size()) throw ConfigError("one dropout rate per layer required");
    for (double r : dropout_rates) {
        if (!(r >= 0.0 && r < 1.0)) throw ConfigError("dropout rate must lie in [0, 1)");
    }
    int input_size = 1;
    for (const auto& l : params.layers) {
        if (l.input_size() != input_size || l.w_h.rows() != 4 * l.units() || l.b.size() != 4 * l.units()) {
            throw ConfigError("inconsistent LSTM layer dimensions");
        }
        input_size = l.units();
    }
    if (params.dense.w.size() != input_size) throw ConfigError("dense head does not match last layer");
}

CellStep cell_forward(const LayerParams& params, const MatrixXd& x, const CellState& prev) {
    const int units = params.units();
    if (x.rows() != params.input_size() || prev.h.rows() != units || prev.c.rows() != units ||
        prev.h.cols() != x.cols() || prev.c.cols() != x.cols()) {
        throw DataError("cell_forward: dimension mismatch");
    }
    if (!x.allFinite() || !prev.h.allFinite() || !prev.c.allFinite()) {
        throw NumericError("cell_forward: non-finite input");
    }
    const auto batch = x.cols();
    MatrixXd pre = params.w_x * x;
    pre.colwise() += params.b;
    CellStep out;
    out.gates.resize(4 * units, batch);
    out.tanh_c.resize(units, batch);
    out.state.h.resize(units, batch);
    out.state.c.resize(units, batch);
    cell_step(params, pre, prev.h, prev.c, out.gates, out.tanh_c, out.state.h, out.state.c);
    return out;
}

MatrixXd dropout(const MatrixXd& values, double rate, Mode mode, std::mt19937_64& rng) {
    if (!(rate >= 0.0 && rate < 1.0)) throw ConfigError("dropout rate must lie in [0, 1)");
    if (mode == Mode::infer || rate == 0.0) return values;
    return values.cwiseProduct(bernoulli_mask(values.rows(), values.cols(), rate, rng));
}

ForwardResult stack_forward(const LstmStack& stack, const MatrixXd& windows, Mode mode, std::mt19937_64& rng) {
    const auto steps = windows.rows();
    const auto batch = windows.cols();
    if (steps != stack.window) {
        throw DataError("window length " + std::to_string(steps) + " does not match the stack's lookback " +
                        std::to_string(stack.window));
    }
    if (batch == 0) throw DataError("empty batch");

    ForwardResult result;
    ForwardCache& cache = result.cache;
    cache.batch = static_cast<int>(batch);
    cache.steps = static_cast<int>(steps);

    MatrixXd layer_in(1, steps * batch);
    for (Eigen::Index t = 0; t < steps; ++t) layer_in.middleCols(t * batch, batch) = windows.row(t);

    const std::size_t n_layers = stack.params.layers.size();
    for (std::size_t l = 0; l < n_layers; ++l) {
        const LayerParams& p = stack.params.layers[l];
        const int units = p.units();
        LayerCache lc;
        lc.inputs = std::move(layer_in);
        lc.hidden = MatrixXd::Zero(units, (steps + 1) * batch);
        lc.cell = MatrixXd::Zero(units, (steps + 1) * batch);
        lc.gates.resize(4 * units, steps * batch);
        lc.tanh_c.resize(units, steps * batch);

        MatrixXd pre = p.w_x * lc.inputs;
        pre.colwise() += p.b;
        for (Eigen::Index t = 0; t < steps; ++t) {
            cell_step(p, pre.middleCols(t * batch, batch), lc.hidden.middleCols(t * batch, batch),
                      lc.cell.middleCols(t * batch, batch), lc.gates.middleCols(t * batch, batch),
                      lc.tanh_c.middleCols(t * batch, batch), lc.hidden.middleCols((t + 1) * batch, batch),
                      lc.cell.middleCols((t + 1) * batch, batch));
        }

        const double rate = stack.dropout_rates[l];
        const bool last = l + 1 == n_layers;
        const bool drop = mode == Mode::train && rate > 0.0;
        if (last) {
            MatrixXd out = lc.hidden.rightCols(batch);
            if (drop) {
                lc.mask = bernoulli_mask(units, batch, rate, rng);
                out = out.cwiseProduct(lc.mask);
            }
            cache.head_input = std::move(out);
        } else {
            layer_in = lc.hidden.rightCols(steps * batch);
            if (drop) {
                lc.mask = bernoulli_mask(units, steps * batch, rate, rng);
                layer_in = layer_in.cwiseProduct(lc.mask);
            }
        }
        cache.layers.push_back(std::move(lc));
    }

    result.predictions = cache.head_input.transpose() * stack.params.dense.w;
    result.predictions.array() += stack.params.dense.b;
    return result;
}

double predict_one(const LstmStack& stack, std::span<const double> window) {
    MatrixXd x(static_cast<Eigen::Index>(window.size()), 1);
    for (std::size_t t = 0; t < window.size(); ++t) x(static_cast<Eigen::Index>(t), 0) = window[t];
    std::mt19937_64 unused(0);
    return stack_forward(stack, x, Mode::infer, unused).predictions(0);
}

std::vector<double> predict(const LstmStack& stack, const WindowedDataset& data) {
    constexpr std::size_t kChunk = 256;
    std::vector<double> out;
    out.reserve(data.size());
    std::mt19937_64 unused(0);
    std::vector<std::size_t> rows;
    for (std::size_t start = 0; start < data.size(); start += kChunk) {
        const std::size_t end = std::min(data.size(), start + kChunk);
        rows.resize(end - start);
        std::iota(rows.begin(), rows.end(), start);
        const auto fwd = stack_forward(stack, batch_matrix(data, rows), Mode::infer, unused);
        out.insert(out.end(), fwd.predictions.data(), fwd.predictions.data() + fwd.predictions.size());
    }
    return out;
}

double mse_loss(std::span<const double> predictions, std::span<const double> targets) {
    if (predictions.size() != targets.size()) throw DataError("mse_loss: length mismatch");
    if (predictions.empty()) throw DataError("mse_loss: empty input");
    double sum = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const double e = predictions[i] - targets[i];
        sum += e * e;
    }
    return sum / static_cast<double>(predictions.size());
}

Parameters backward(const LstmStack& stack, const ForwardCache& cache, const VectorXd& loss_grad) {
    const std::size_t n_layers = stack.params.layers.size();
    if (cache.layers.size() != n_layers || loss_grad.size() != cache.batch ||
        cache.head_input.cols() != cache.batch) {
        throw DataError("backward: cache does not match the stack or gradient");
    }
    const Eigen::Index batch = cache.batch;
    const Eigen::Index steps = cache.steps;

    Parameters grads = stack.params.zeros_like();
    grads.dense.w = cache.head_input * loss_grad;
    grads.dense.b = loss_grad.sum();

    // Gradient w.r.t. the top layer's output sequence (only the last step feeds the head).
    const LayerCache& top = cache.layers.back();
    MatrixXd d_head = stack.params.dense.w * loss_grad.transpose();
    if (top.mask.size() > 0) d_head = d_head.cwiseProduct(top.mask);
    MatrixXd d_out = MatrixXd::Zero(stack.params.layers.back().units(), steps * batch);
    d_out.rightCols(batch) = d_head;

    for (std::size_t li = n_layers; li-- > 0;) {
        const LayerParams& p = stack.params.layers[li];
        const LayerCache& lc = cache.layers[li];
        const int units = p.units();
        MatrixXd d_pre(4 * units, steps * batch);
        MatrixXd dh_next = MatrixXd::Zero(units, batch);
        MatrixXd dc_next = MatrixXd::Zero(units, batch);
        for (Eigen::Index t = steps; t-- > 0;) {
            const auto gates = lc.gates.middleCols(t * batch, batch);
            const auto f = gates.topRows(units).array();
            const auto i = gates.middleRows(units, units).array();
            const auto g = gates.middleRows(2 * units, units).array();
            const auto o = gates.bottomRows(units).array();
            const auto tc = lc.tanh_c.middleCols(t * batch, batch).array();
            const auto c_prev = lc.cell.middleCols(t * batch, batch).array();

            const MatrixXd dh = d_out.middleCols(t * batch, batch) + dh_next;
            const auto dha = dh.array();
            const MatrixXd dc = (dc_next.array() + dha * o * (1.0 - tc.square())).matrix();
            const auto dca = dc.array();

            auto dz = d_pre.middleCols(t * batch, batch);
            dz.topRows(units) = (dca * c_prev * f * (1.0 - f)).matrix();
            dz.middleRows(units, units) = (dca * g * i * (1.0 - i)).matrix();
            dz.middleRows(2 * units, units) = (dca * i * (1.0 - g.square())).matrix();
            dz.bottomRows(units) = (dha * tc * o * (1.0 - o)).matrix();

            dc_next = (dca * f).matrix();
            dh_next.noalias() = p.w_h.transpose() * dz;
        }
        LayerParams& gl = grads.layers[li];
        gl.w_h.noalias() = d_pre * lc.hidden.leftCols(steps * batch).transpose();
        gl.w_x.noalias() = d_pre * lc.inputs.transpose();
        gl.b = d_pre.rowwise().sum();
        if (li > 0) {
            MatrixXd d_in = p.w_x.transpose() * d_pre;
            const LayerCache& below = cache.layers[li - 1];
            if (below.mask.size() > 0) d_in = d_in.cwiseProduct(below.mask);
            d_out = std::move(d_in);
        }
    }
    return grads;
}

void TrainConfig::validate() const {
    if (epochs < 1) throw ConfigError("epochs must be positive");
    if (batch_size < 1) throw ConfigError("batch_size must be positive");
    if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
    if (!(adam_beta1 > 0.0 && adam_beta1 < 1.0) || !(adam_beta2 > 0.0 && adam_beta2 < 1.0)) {
        throw ConfigError("Adam betas must lie in (0, 1)");
    }
    if (!(adam_epsilon > 0.0)) throw ConfigError("adam_epsilon must be positive");
}

AdamState adam_init(const Parameters& params) {
    return AdamState{params.zeros_like(), params.zeros_like(), 0};
}

void adam_step(Parameters& params, Parameters& grads, AdamState& state, const TrainConfig& config) {
    if (!params.congruent(grads) || !params.congruent(state.m) || !params.congruent(state.v)) {
        throw DataError("adam_step: parameter, gradient and moment shapes differ");
    }
    ++state.step;
    const double b1 = config.adam_beta1;
    const double b2 = config.adam_beta2;
    const double correction1 = 1.0 - std::pow(b1, static_cast<double>(state.step));
    const double correction2 = 1.0 - std::pow(b2, static_cast<double>(state.step));
    auto p = params.tensors();
    auto g = grads.tensors();
    auto m = state.m.tensors();
    auto v = state.v.tensors();
    for (std::size_t k = 0; k < p.size(); ++k) {
        m[k] = b1 * m[k] + (1.0 - b1) * g[k];
        v[k] = b2 * v[k] + (1.0 - b2) * g[k].cwiseAbs2();
        const auto m_hat = m[k].array() / correction1;
        const auto v_hat = v[k].array() / correction2;
        p[k].array() -= config.learning_rate * m_hat / (v_hat.sqrt() + config.adam_epsilon);
    }
}

TrainResult train(const LstmStack& stack, const WindowedDataset& train_set, const WindowedDataset& val_set,
                  const TrainConfig& config, const std::function<void(const EpochLoss&)>& on_epoch) {
    config.validate();
    stack.validate();
    if (train_set.size() == 0 || val_set.size() == 0) throw DataError("training and validation sets must be nonempty");
    if (train_set.window != static_cast<std::size_t>(stack.window) ||
        val_set.window != static_cast<std::size_t>(stack.window)) {
        throw DataError("dataset window does not match the stack's lookback");
    }

    LstmStack current = stack;
    AdamState adam = adam_init(current.params);
    std::mt19937_64 shuffle_rng(config.seed);
    std::mt19937_64 dropout_rng(config.seed ^ kDropoutStream);

    TrainResult result;
    double best_val = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> order(train_set.size());
    std::iota(order.begin(), order.end(), 0);
    const auto batch_size = static_cast<std::size_t>(config.batch_size);

    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        if (config.shuffle) std::shuffle(order.begin(), order.end(), shuffle_rng);
        double loss_sum = 0.0;
        for (std::size_t start = 0; start < order.size(); start += batch_size) {
            const std::size_t end = std::min(order.size(), start + batch_size);
            const std::span<const std::size_t> rows(order.data() + start, end - start);
            const MatrixXd x = batch_matrix(train_set, rows);
            VectorXd y(static_cast<Eigen::Index>(rows.size()));
            for (std::size_t b = 0; b < rows.size(); ++b) y(static_cast<Eigen::Index>(b)) = train_set.targets[rows[b]];

            const ForwardResult fwd = stack_forward(current, x, Mode::train, dropout_rng);
            const VectorXd err = fwd.predictions - y;
            const double n = static_cast<double>(rows.size());
            const double loss = err.squaredNorm() / n;
            if (!std::isfinite(loss)) {
                throw NumericError("training diverged: non-finite loss at epoch " + std::to_string(epoch) +
                                   ", batch starting at sample " + std::to_string(start) +
                                   " (try a smaller learning rate)");
            }
            loss_sum += loss * n;
            Parameters grads = backward(current, fwd.cache, (2.0 / n) * err);
            adam_step(current.params, grads, adam, config);
        }

        EpochLoss record;
        record.epoch = epoch;
        record.train_mse = loss_sum / static_cast<double>(order.size());
        record.val_mse = mse_loss(predict(current, val_set), val_set.targets);
        if (!std::isfinite(record.val_mse)) {
            throw NumericError("training diverged: non-finite validation loss at epoch " + std::to_string(epoch));
        }
        result.history.push_back(record);
        if (on_epoch) on_epoch(record);
        if (record.val_mse < best_val) {
            best_val = record.val_mse;
            result.best_epoch = epoch;
            result.stack = current;
        }
    }
    return result;
}

std::vector<double> multi_sequence_predict(const LstmStack& stack, std::span<const double> seed_window,
                                           std::span<const double> actuals) {
    if (seed_window.size() != static_cast<std::size_t>(stack.window)) {
        throw DataError("seed window must have exactly " + std::to_string(stack.window) + " values");
    }
    if (actuals.empty()) throw DataError("no actual values to predict");
    // Windows are built from observed values only, so every step can be evaluated in one batch.
    const WindowedDataset windows =
        make_windows_with_context(seed_window, actuals, static_cast<std::size_t>(stack.window));
    return predict(stack, windows);
}

namespace {

nlohmann::json matrix_to_json(const MatrixXd& m) {
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(m.size()));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) flat.push_back(m(r, c));
    }
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", flat}};
}

MatrixXd matrix_from_json(const nlohmann::json& j) {
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    const auto flat = j.at("data").get<std::vector<double>>();
    if (static_cast<Eigen::Index>(flat.size()) != rows * cols) throw DataError("tensor size mismatch in checkpoint");
    MatrixXd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = flat[static_cast<std::size_t>(r * cols + c)];
    }
    return m;
}

}  // namespace

std::string checkpoint_to_text(const LstmStack& stack, const TrainConfig& config, const std::string& fingerprint,
                               const std::optional<Scaler>& scaler) {
    nlohmann::json j;
    j["kind"] = "lstm";
    j["window"] = stack.window;
    j["seed"] = stack.seed;
    j["dropout_rates"] = stack.dropout_rates;
    nlohmann::json layers = nlohmann::json::array();
    for (const auto& l : stack.params.layers) {
        layers.push_back({{"units", l.units()},
                          {"input_size", l.input_size()},
                          {"gate_order", "forget,input,candidate,output"},
                          {"w_h", matrix_to_json(l.w_h)},
                          {"w_x", matrix_to_json(l.w_x)},
                          {"b", matrix_to_json(l.b)}});
    }
    j["layers"] = layers;
    j["dense"] = {{"w", matrix_to_json(stack.params.dense.w)}, {"b", stack.params.dense.b}};
    j["train_config"] = {{"epochs", config.epochs},
                         {"batch_size", config.batch_size},
                         {"learning_rate", config.learning_rate},
                         {"adam_beta1", config.adam_beta1},
                         {"adam_beta2", config.adam_beta2},
                         {"adam_epsilon", config.adam_epsilon},
                         {"seed", config.seed},
                         {"shuffle", config.shuffle}};
    if (scaler) j["scaler"] = {{"min", scaler->min()}, {"max", scaler->max()}};
    if (!fingerprint.empty()) j["fingerprint"] = fingerprint;
    return j.dump(1) + "\n";
}

LstmStack checkpoint_from_text(const std::string& text, TrainConfig* config, std::string* fingerprint,
                               std::optional<Scaler>* scaler) {
    try {
        const auto j = nlohmann::json::parse(text);
        if (j.at("kind") != "lstm") throw DataError("checkpoint is not an LSTM stack");
        LstmStack stack;
        stack.window = j.at("window").get<int>();
        stack.seed = j.at("seed").get<std::uint64_t>();
        stack.dropout_rates = j.at("dropout_rates").get<std::vector<double>>();
        for (const auto& lj : j.at("layers")) {
            LayerParams l;
            l.w_h = matrix_from_json(lj.at("w_h"));
            l.w_x = matrix_from_json(lj.at("w_x"));
            l.b = matrix_from_json(lj.at("b"));
            stack.params.layers.push_back(std::move(l));
        }
        stack.params.dense.w = matrix_from_json(j.at("dense").at("w"));
        stack.params.dense.b = j.at("dense").at("b").get<double>();
        stack.validate();
        if (config) {
            const auto& c = j.at("train_config");
            config->epochs = c.at("epochs").get<int>();
            config->batch_size = c.at("batch_size").get<int>();
            config->learning_rate = c.at("learning_rate").get<double>();
            config->adam_beta1 = c.at("adam_beta1").get<double>();
            config->adam_beta2 = c.at("adam_beta2").get<double>();
            config->adam_epsilon = c.at("adam_epsilon").get<double>();
            config->seed = c.at("seed").get<std::uint64_t>();
            config->shuffle = c.at("shuffle").get<bool>();
        }
        if (fingerprint) *fingerprint = j.value("fingerprint", std::string{});
        if (scaler) {
            *scaler = std::nullopt;
            if (j.contains("scaler")) {
                *scaler = Scaler(j.at("scaler").at("min").get<double>(), j.at("scaler").at("max").get<double>());
            }
        }
        return stack;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed LSTM checkpoint: ") + e.what());
    } catch (const ConfigError& e) {
        throw DataError(std::string("invalid LSTM checkpoint: ") + e.what());
    }
}

}  // namespace pricecast::lstm
