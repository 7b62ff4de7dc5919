#pragma once

#include "pricecast/arima.hpp"
#include "pricecast/dataset.hpp"
#include "pricecast/lstm.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace pricecast {

struct DataSource {
    std::string ticker;
    std::filesystem::path path;  // resolved against the config file's directory
    std::string column = "High";
};

/// ARIMA partition: the series is restricted to dates >= train_start, then split.
struct ArimaSplit {
    std::optional<Date> train_start;
    SplitSpec split;
};

struct ArimaSettings {
    std::optional<int> d;                 // empty: choose by ADF
    std::optional<std::pair<int, int>> order;  // empty: grid search
    int p_max = 3;
    int q_max = 3;
    Criterion criterion = Criterion::bic;
    std::optional<int> refit_every;
    int acf_lags = 20;
    /// Extra explicit orders fitted and reported alongside the main model.
    std::vector<ArimaOrder> extra_orders;
};

struct LstmSettings {
    int layers = 3;
    int units = 100;
    double dropout = 0.1;
    int window = 60;
    lstm::TrainConfig train{};
};

/// Declarative run description loaded from a JSON file. Every key has a
/// default; dates default to the 2010-2018 protocol.
struct RunConfig {
    std::vector<DataSource> sources;
    SplitSpec lstm_split;
    ArimaSplit arima_split;
    ArimaSettings arima;
    LstmSettings lstm;
    std::vector<std::string> backtest_models{"arima", "lstm"};
    std::filesystem::path output_dir = "out";
    std::uint64_t seed = 42;

    /// Canonical JSON of the resolved configuration (output dir excluded).
    [[nodiscard]] std::string canonical() const;
    /// 16-hex-digit FNV-1a hash of canonical().
    [[nodiscard]] std::string fingerprint() const;
    [[nodiscard]] lstm::StackConfig stack_config() const;
    [[nodiscard]] lstm::TrainConfig train_config() const;
};

RunConfig load_config(const std::filesystem::path& path);
/// Parses config text; relative data paths resolve against `base_dir`.
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir);

/// 64-bit FNV-1a, hex encoded.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace pricecast
