#include "pricecast/dataset.hpp"

#include "pricecast/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

namespace pricecast {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n\"");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n\"");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(trim(line.substr(start)));
            break;
        }
        fields.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return fields;
}

bool is_missing(std::string_view cell) {
    if (cell.empty()) return true;
    std::string lower(cell);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return lower == "null" || lower == "nan" || lower == "na";
}

template <typename Int>
bool parse_int(std::string_view text, Int& out) {
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, out);
    return ec == std::errc{} && ptr == end;
}

}  // namespace

Date::Date(int year, unsigned month, unsigned day) {
    const std::chrono::year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                                          std::chrono::day{day}};
    if (!ymd.ok()) throw DataError("invalid calendar date");
    days_ = std::chrono::sys_days{ymd};
}

Date Date::parse(std::string_view text) {
    text = trim(text);
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
        throw DataError("unparseable date '" + std::string(text) + "' (expected YYYY-MM-DD)");
    }
    int y = 0;
    unsigned m = 0;
    unsigned d = 0;
    if (!parse_int(text.substr(0, 4), y) || !parse_int(text.substr(5, 2), m) ||
        !parse_int(text.substr(8, 2), d)) {
        throw DataError("unparseable date '" + std::string(text) + "'");
    }
    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m},
                                          std::chrono::day{d}};
    if (!ymd.ok()) throw DataError("invalid calendar date '" + std::string(text) + "'");
    return Date{std::chrono::sys_days{ymd}};
}

std::string Date::iso() const {
    const auto d = ymd();
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                  static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
    return buf;
}

PriceSeries::PriceSeries(std::string ticker, std::vector<Date> dates, std::vector<double> values)
    : ticker_(std::move(ticker)), dates_(std::move(dates)), values_(std::move(values)) {
    if (dates_.size() != values_.size()) throw DataError("dates and values differ in length");
    if (values_.empty()) throw DataError("price series must not be empty");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) throw DataError("non-finite price on " + dates_[i].iso());
        if (i > 0 && !(dates_[i - 1] < dates_[i])) {
            throw DataError("dates not strictly increasing at " + dates_[i].iso());
        }
    }
}

std::optional<PriceSeries> PriceSeries::slice(std::optional<Date> after,
                                              std::optional<Date> through) const {
    const auto begin = after ? std::upper_bound(dates_.begin(), dates_.end(), *after) : dates_.begin();
    const auto end = through ? std::upper_bound(dates_.begin(), dates_.end(), *through) : dates_.end();
    if (begin >= end) return std::nullopt;
    const auto lo = static_cast<std::size_t>(begin - dates_.begin());
    const auto hi = static_cast<std::size_t>(end - dates_.begin());
    return PriceSeries(ticker_, {dates_.begin() + lo, dates_.begin() + hi},
                       {values_.begin() + lo, values_.begin() + hi});
}

PriceSeries load_csv(const std::filesystem::path& path, const std::string& column, std::string ticker,
                     LoadStats* stats) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open CSV file '" + path.string() + "'");

    std::string line;
    if (!std::getline(in, line)) throw DataError("CSV file '" + path.string() + "' is empty");
    if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line.erase(0, 3);  // BOM

    const auto header = split_fields(line);
    const auto find_col = [&](std::string_view name) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) return i;
        }
        return std::nullopt;
    };
    const auto date_col = find_col("Date");
    if (!date_col) throw DataError("CSV file '" + path.string() + "' has no Date column");
    const auto value_col = find_col(column);
    if (!value_col) {
        throw DataError("CSV file '" + path.string() + "' has no '" + column + "' column");
    }

    struct Row {
        Date date;
        double value;
    };
    std::vector<Row> rows;
    LoadStats local;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        ++local.rows_read;
        const auto fields = split_fields(line);
        if (fields.size() <= std::max(*date_col, *value_col)) {
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": too few fields");
        }
        const Date date = Date::parse(fields[*date_col]);
        const auto cell = fields[*value_col];
        if (is_missing(cell)) {
            ++local.rows_dropped;
            continue;
        }
        double value = 0.0;
        std::istringstream num{std::string(cell)};
        num >> value;
        if (!num || !num.eof() || !std::isfinite(value)) {
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": bad number '" +
                            std::string(cell) + "'");
        }
        rows.push_back({date, value});
    }
    if (rows.empty()) throw DataError("CSV file '" + path.string() + "' has zero usable rows");

    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.date < b.date; });
    std::vector<Date> dates;
    std::vector<double> values;
    dates.reserve(rows.size());
    values.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i > 0 && rows[i].date == rows[i - 1].date) {
            throw DataError("duplicate date " + rows[i].date.iso() + " in '" + path.string() + "'");
        }
        dates.push_back(rows[i].date);
        values.push_back(rows[i].value);
    }
    if (stats) *stats = local;
    if (ticker.empty()) ticker = path.stem().string();
    return PriceSeries(std::move(ticker), std::move(dates), std::move(values));
}

void SplitSpec::validate() const {
    if (val_end) {
        if (!(train_end < *val_end) || !(*val_end < test_end)) {
            throw ConfigError("split dates must satisfy train_end < val_end < test_end");
        }
    } else if (!(train_end < test_end)) {
        throw ConfigError("split dates must satisfy train_end < test_end");
    }
}

SplitResult split(const PriceSeries& series, const SplitSpec& spec) {
    spec.validate();
    auto train = series.slice(std::nullopt, spec.train_end);
    if (!train) throw DataError(series.ticker() + ": training partition is empty");
    std::optional<PriceSeries> val;
    Date test_start = spec.train_end;
    if (spec.val_end) {
        val = series.slice(spec.train_end, spec.val_end);
        if (!val) throw DataError(series.ticker() + ": validation partition is empty");
        test_start = *spec.val_end;
    }
    auto test = series.slice(test_start, spec.test_end);
    if (!test) throw DataError(series.ticker() + ": test partition is empty");
    return SplitResult{std::move(*train), std::move(val), std::move(*test)};
}

Scaler::Scaler(double min, double max) : min_(min), max_(max) {
    if (!(max > min) || !std::isfinite(min) || !std::isfinite(max)) {
        throw DataError("scaler requires finite max > min");
    }
}

Scaler fit_scaler(std::span<const double> values) {
    if (values.size() < 2) throw DataError("scaler needs at least two values");
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    if (*lo == *hi) throw DataError("constant series cannot be min-max normalized");
    return Scaler(*lo, *hi);
}

std::vector<double> normalize(std::span<const double> values, const Scaler& scaler) {
    std::vector<double> out(values.size());
    std::transform(values.begin(), values.end(), out.begin(),
                   [&](double x) { return scaler.normalize(x); });
    return out;
}

std::vector<double> denormalize(std::span<const double> values, const Scaler& scaler) {
    std::vector<double> out(values.size());
    std::transform(values.begin(), values.end(), out.begin(),
                   [&](double u) { return scaler.denormalize(u); });
    return out;
}

WindowedDataset make_windows(std::span<const double> values, std::size_t window) {
    if (window == 0) throw DataError("window length must be positive");
    if (values.size() <= window) {
        throw DataError("sequence of length " + std::to_string(values.size()) +
                        " is too short for window " + std::to_string(window));
    }
    WindowedDataset ds;
    ds.window = window;
    const std::size_t count = values.size() - window;
    ds.inputs.reserve(count);
    ds.targets.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        ds.inputs.emplace_back(values.begin() + static_cast<std::ptrdiff_t>(i),
                               values.begin() + static_cast<std::ptrdiff_t>(i + window));
        ds.targets.push_back(values[i + window]);
    }
    return ds;
}

WindowedDataset make_windows_with_context(std::span<const double> context,
                                          std::span<const double> values, std::size_t window) {
    if (context.size() < window) {
        throw DataError("context of length " + std::to_string(context.size()) +
                        " is shorter than window " + std::to_string(window));
    }
    if (values.empty()) throw DataError("no target values to window");
    std::vector<double> joined(context.end() - static_cast<std::ptrdiff_t>(window), context.end());
    joined.insert(joined.end(), values.begin(), values.end());
    return make_windows(joined, window);
}

}  // namespace pricecast
