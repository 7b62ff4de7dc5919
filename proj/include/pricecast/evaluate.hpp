#pragma once

#include "pricecast/dataset.hpp"

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace pricecast {

/// Error metrics on the original price scale.
struct Metrics {
    double mae = 0.0;
    double mse = 0.0;
    double rmse = 0.0;  // sqrt(mse)
    std::size_t n = 0;
};

/// MAE, MSE and RMSE of predicted vs actual. Throws DataError on mismatched,
/// empty or non-finite input.
Metrics compute_metrics(std::span<const double> predicted, std::span<const double> actual);

/// Predictions of one model for one ticker, aligned to test dates.
struct ModelTrace {
    std::string ticker;
    std::string model;
    std::vector<Date> dates;
    std::vector<double> actual;
    std::vector<double> predicted;
};

enum class MetricKind { mae = 0, mse = 1, rmse = 2 };

struct ModelResult {
    ModelTrace trace;
    Metrics metrics;
};

struct TickerVerdict {
    std::string ticker;
    /// Winning model per metric (indexed by MetricKind), or "tie".
    std::array<std::string, 3> winner;
};

struct EvalReport {
    std::vector<std::string> tickers;  // first-appearance order
    std::vector<std::string> models;   // first-appearance order
    std::vector<ModelResult> results;  // ticker-major, then model order
    std::vector<TickerVerdict> verdicts;
    /// Metrics over each model's concatenated traces.
    std::map<std::string, Metrics> pooled;
    std::string fingerprint;

    [[nodiscard]] const ModelResult& at(const std::string& ticker, const std::string& model) const;
};

/// Builds the per-ticker, per-model grid. All traces of a ticker must share
/// dates and actuals; otherwise DataError.
EvalReport compare(const std::vector<ModelTrace>& traces, const std::string& fingerprint = {});

/// Writes metrics.csv, metrics.txt, trace_<ticker>_<model>.csv and
/// plot_<ticker>_<model>.svg into out_dir. Output bytes depend only on the
/// report. Throws DataError for an empty report and IoError on write failure.
void emit_report(const EvalReport& report, const std::filesystem::path& out_dir);

/// Writes `content` via a temporary file and rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
/// Writes every (name, content) pair into `dir`. All temporaries are written
/// before any is renamed, so a write failure leaves no new files behind.
void write_files_atomic(const std::filesystem::path& dir,
                        const std::vector<std::pair<std::string, std::string>>& files);

/// Fixed-point text with `decimals` places, locale independent.
std::string fixed(double value, int decimals = 6);

}  // namespace pricecast
