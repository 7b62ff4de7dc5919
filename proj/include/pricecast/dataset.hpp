#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pricecast {

/// Calendar date at day resolution.
class Date {
public:
    Date() = default;
    explicit Date(std::chrono::sys_days days) : days_(days) {}
    Date(int year, unsigned month, unsigned day);

    /// Parses YYYY-MM-DD. Throws DataError on malformed or impossible dates.
    static Date parse(std::string_view text);

    [[nodiscard]] std::string iso() const;
    [[nodiscard]] std::chrono::sys_days days() const { return days_; }
    [[nodiscard]] std::chrono::year_month_day ymd() const { return std::chrono::year_month_day{days_}; }

    auto operator<=>(const Date&) const = default;

private:
    std::chrono::sys_days days_{};
};

/// Date-indexed daily price series. Dates strictly increase, values are finite.
class PriceSeries {
public:
    PriceSeries(std::string ticker, std::vector<Date> dates, std::vector<double> values);

    [[nodiscard]] const std::string& ticker() const { return ticker_; }
    [[nodiscard]] const std::vector<Date>& dates() const { return dates_; }
    [[nodiscard]] const std::vector<double>& values() const { return values_; }
    [[nodiscard]] std::size_t size() const { return values_.size(); }

    /// Sub-series of rows with from < date <= to (either bound optional).
    [[nodiscard]] std::optional<PriceSeries> slice(std::optional<Date> after,
                                                   std::optional<Date> through) const;

private:
    std::string ticker_;
    std::vector<Date> dates_;
    std::vector<double> values_;
};

struct LoadStats {
    std::size_t rows_read = 0;
    std::size_t rows_dropped = 0;  // empty or "null" value cells
};

/// Reads a Yahoo-style CSV (Date column plus named numeric columns).
/// Rows are sorted ascending by date; missing values are dropped and counted.
PriceSeries load_csv(const std::filesystem::path& path, const std::string& column = "High",
                     std::string ticker = {}, LoadStats* stats = nullptr);

struct SplitSpec {
    Date train_end;
    std::optional<Date> val_end;
    Date test_end;

    /// Checks train_end < val_end < test_end.
    void validate() const;
};

struct SplitResult {
    PriceSeries train;
    std::optional<PriceSeries> val;
    PriceSeries test;
};

/// Partitions by date: train <= train_end < val <= val_end < test <= test_end.
/// Rows after test_end are discarded. Throws DataError if a mandatory part is empty.
SplitResult split(const PriceSeries& series, const SplitSpec& spec);

/// Min-max scaler, max strictly greater than min.
class Scaler {
public:
    Scaler(double min, double max);

    [[nodiscard]] double min() const { return min_; }
    [[nodiscard]] double max() const { return max_; }

    [[nodiscard]] double normalize(double x) const { return (x - min_) / (max_ - min_); }
    [[nodiscard]] double denormalize(double u) const { return u * (max_ - min_) + min_; }

private:
    double min_;
    double max_;
};

/// Fits min/max over the values. Throws DataError for fewer than 2 values or a
/// constant series.
Scaler fit_scaler(std::span<const double> values);
inline Scaler fit_scaler(const PriceSeries& series) { return fit_scaler(series.values()); }

std::vector<double> normalize(std::span<const double> values, const Scaler& scaler);
std::vector<double> denormalize(std::span<const double> values, const Scaler& scaler);

/// Sliding one-step-ahead samples: input values[i, i+window), target values[i+window].
struct WindowedDataset {
    std::size_t window = 0;
    std::vector<std::vector<double>> inputs;
    std::vector<double> targets;

    [[nodiscard]] std::size_t size() const { return targets.size(); }
};

WindowedDataset make_windows(std::span<const double> values, std::size_t window);

/// Windows whose targets are exactly `values`, seeded by the last `window`
/// entries of `context` (e.g. the tail of the training partition).
WindowedDataset make_windows_with_context(std::span<const double> context,
                                          std::span<const double> values, std::size_t window);

}  // namespace pricecast
