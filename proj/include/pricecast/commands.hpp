#pragma once

#include "pricecast/arima.hpp"
#include "pricecast/config.hpp"
#include "pricecast/dataset.hpp"
#include "pricecast/evaluate.hpp"
#include "pricecast/lstm.hpp"
#include "pricecast/stationarity.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace pricecast {

struct CommandOptions {
    std::filesystem::path out_dir = "out";
    std::optional<std::string> ticker;  // restrict to one ticker
    bool end_to_end = false;            // backtest: (re)fit models instead of loading checkpoints
    std::ostream* log = nullptr;
};

struct LoadedSeries {
    DataSource source;
    PriceSeries series;
    LoadStats stats;
};

/// Loads every configured source that passes the ticker filter.
std::vector<LoadedSeries> load_sources(const RunConfig& config, const std::optional<std::string>& ticker);

/// Smallest d in 0..2 whose differenced series rejects a unit root at 5%
/// (2 when none does).
int recommend_d(std::span<const double> values);

struct AnalyzeResult {
    std::string ticker;
    std::vector<AdfResult> adf;  // levels, first and second differences
    int recommended_d = 0;
    CorrelogramResult acf;       // of the recommended differenced series
    CorrelogramResult pacf;
    GridSearchResult grid;
};

/// ADF reports, differenced series, correlograms and the BIC heatmap for the
/// ARIMA training partition of every ticker.
std::vector<AnalyzeResult> cmd_analyze(const RunConfig& config, const CommandOptions& options);

struct ArimaFitResult {
    std::string ticker;
    ArimaModel model;
    std::optional<GridSearchResult> grid;
    std::vector<ArimaModel> extras;
    ResidualDiagnostics diagnostics;
};

/// Selects d (config or ADF) and (p, q) (config or grid search), fits on the
/// ARIMA training partition.
ArimaFitResult fit_arima_for(const RunConfig& config, const PriceSeries& series);

std::vector<ArimaFitResult> cmd_fit_arima(const RunConfig& config, const CommandOptions& options);

/// Normalized-scale MSE on each partition (test uses multi-sequence prediction).
struct LstmScores {
    double train = 0.0;
    double val = 0.0;
    double test = 0.0;
};

struct LstmRunResult {
    std::string ticker;
    lstm::TrainResult training;
    Scaler scaler{0.0, 1.0};
    LstmScores scores;
};

/// Full LSTM pipeline for one series: split, train-fit scaler, windows, train, score.
LstmRunResult run_lstm_for(const RunConfig& config, const PriceSeries& series, std::ostream* log = nullptr);

std::vector<LstmRunResult> cmd_train_lstm(const RunConfig& config, const CommandOptions& options);

enum class SweepDimension { dropout, layers, units };
SweepDimension parse_sweep_dimension(const std::string& text);
std::string to_string(SweepDimension d);

struct SweepRow {
    double value = 0.0;
    std::optional<LstmScores> scores;
    std::string error;  // set when the cell failed
};

struct SweepTable {
    std::string ticker;
    SweepDimension dimension = SweepDimension::dropout;
    std::vector<SweepRow> rows;
};

/// Trains one model per value with the shared seed. Failing cells are
/// recorded and the sweep continues.
std::vector<SweepTable> cmd_sweep(const RunConfig& config, SweepDimension dimension, const std::vector<double>& values,
                                  const CommandOptions& options);

std::string render_sweep_table(const SweepTable& table);

/// Rolling ARIMA forecasts and multi-sequence LSTM predictions on the shared
/// test window; emits the evaluation report.
EvalReport cmd_backtest(const RunConfig& config, const CommandOptions& options);

}  // namespace pricecast
