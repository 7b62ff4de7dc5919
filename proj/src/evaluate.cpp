#include "pricecast/evaluate.hpp"

#include "pricecast/errors.hpp"
#include "pricecast/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace pricecast {

namespace {

constexpr std::array<const char*, 3> kMetricNames{"mae", "mse", "rmse"};

double metric_value(const Metrics& m, std::size_t kind) {
    return kind == 0 ? m.mae : kind == 1 ? m.mse : m.rmse;
}

bool nearly_equal(double a, double b) {
    return std::abs(a - b) <= 1e-12 * (1.0 + std::max(std::abs(a), std::abs(b)));
}

std::string pad(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string full(double v) {
    std::ostringstream out;
    out << std::setprecision(17) << v;
    return out.str();
}

}  // namespace

std::string fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    return buf;
}

Metrics compute_metrics(std::span<const double> predicted, std::span<const double> actual) {
    if (predicted.size() != actual.size()) throw DataError("metrics: predicted and actual differ in length");
    if (predicted.empty()) throw DataError("metrics: empty input");
    double abs_sum = 0.0;
    double sq_sum = 0.0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        if (!std::isfinite(predicted[i]) || !std::isfinite(actual[i])) {
            throw DataError("metrics: non-finite value at index " + std::to_string(i));
        }
        const double e = predicted[i] - actual[i];
        abs_sum += std::abs(e);
        sq_sum += e * e;
    }
    Metrics m;
    m.n = predicted.size();
    const double n = static_cast<double>(m.n);
    m.mae = abs_sum / n;
    m.mse = sq_sum / n;
    m.rmse = std::sqrt(m.mse);
    return m;
}

const ModelResult& EvalReport::at(const std::string& ticker, const std::string& model) const {
    for (const auto& r : results) {
        if (r.trace.ticker == ticker && r.trace.model == model) return r;
    }
    throw DataError("report has no entry for " + ticker + "/" + model);
}

EvalReport compare(const std::vector<ModelTrace>& traces, const std::string& fingerprint) {
    EvalReport report;
    report.fingerprint = fingerprint;
    const auto remember = [](std::vector<std::string>& list, const std::string& v) {
        if (std::find(list.begin(), list.end(), v) == list.end()) list.push_back(v);
    };
    for (const auto& t : traces) {
        if (t.dates.size() != t.actual.size() || t.actual.size() != t.predicted.size()) {
            throw DataError("trace " + t.ticker + "/" + t.model + " has inconsistent lengths");
        }
        remember(report.tickers, t.ticker);
        remember(report.models, t.model);
    }

    for (const auto& ticker : report.tickers) {
        const ModelTrace* reference = nullptr;
        TickerVerdict verdict;
        verdict.ticker = ticker;
        std::vector<const ModelResult*> row;
        for (const auto& model : report.models) {
            const auto it = std::find_if(traces.begin(), traces.end(),
                                         [&](const ModelTrace& t) { return t.ticker == ticker && t.model == model; });
            if (it == traces.end()) continue;
            if (!reference) {
                reference = &*it;
            } else if (it->dates != reference->dates || it->actual != reference->actual) {
                throw DataError("traces for " + ticker + " are not aligned to the same test dates");
            }
            report.results.push_back({*it, compute_metrics(it->predicted, it->actual)});
        }
        for (std::size_t k = 0; k < 3; ++k) {
            std::string best;
            double best_value = 0.0;
            bool tie = false;
            for (const auto& r : report.results) {
                if (r.trace.ticker != ticker) continue;
                const double v = metric_value(r.metrics, k);
                if (best.empty() || v < best_value) {
                    tie = !best.empty() && nearly_equal(v, best_value);
                    best = r.trace.model;
                    best_value = v;
                } else if (nearly_equal(v, best_value)) {
                    tie = true;
                }
            }
            verdict.winner[k] = tie ? "tie" : best;
        }
        report.verdicts.push_back(std::move(verdict));
    }

    for (const auto& model : report.models) {
        std::vector<double> predicted;
        std::vector<double> actual;
        for (const auto& r : report.results) {
            if (r.trace.model != model) continue;
            predicted.insert(predicted.end(), r.trace.predicted.begin(), r.trace.predicted.end());
            actual.insert(actual.end(), r.trace.actual.begin(), r.trace.actual.end());
        }
        report.pooled[model] = compute_metrics(predicted, actual);
    }
    return report;
}

namespace {

std::filesystem::path temp_path(const std::filesystem::path& path) {
    auto tmp = path;
    tmp += ".tmp";
    return tmp;
}

void write_temp(const std::filesystem::path& path, const std::string& content) {
    const auto tmp = temp_path(path);
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << content;
    out.flush();
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void discard_temps(const std::filesystem::path& dir, const std::vector<std::pair<std::string, std::string>>& files) {
    std::error_code ec;
    for (const auto& f : files) std::filesystem::remove(temp_path(dir / f.first), ec);
}

}  // namespace

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    write_files_atomic(path.parent_path().empty() ? "." : path.parent_path(),
                       {{path.filename().string(), content}});
}

void write_files_atomic(const std::filesystem::path& dir,
                        const std::vector<std::pair<std::string, std::string>>& files) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
    try {
        for (const auto& [name, content] : files) write_temp(dir / name, content);
    } catch (...) {
        discard_temps(dir, files);
        throw;
    }
    for (const auto& [name, content] : files) {
        std::filesystem::rename(temp_path(dir / name), dir / name, ec);
        if (ec) {
            discard_temps(dir, files);
            throw IoError("cannot move '" + (dir / name).string() + "' into place: " + ec.message());
        }
    }
}

void emit_report(const EvalReport& report, const std::filesystem::path& out_dir) {
    if (report.results.empty()) throw DataError("cannot emit an empty report");
    const std::string fp_line = report.fingerprint.empty() ? "" : "# fingerprint=" + report.fingerprint + "\n";

    // Render everything first so a failure leaves no partial report behind.
    std::vector<std::pair<std::string, std::string>> files;

    std::ostringstream csv;
    csv << fp_line << "ticker,model,mae,mse,rmse,n\n";
    for (const auto& r : report.results) {
        csv << r.trace.ticker << ',' << r.trace.model << ',' << full(r.metrics.mae) << ',' << full(r.metrics.mse)
            << ',' << full(r.metrics.rmse) << ',' << r.metrics.n << '\n';
    }
    for (const auto& model : report.models) {
        const Metrics& m = report.pooled.at(model);
        csv << "pooled," << model << ',' << full(m.mae) << ',' << full(m.mse) << ',' << full(m.rmse) << ','
            << m.n << '\n';
    }
    files.emplace_back("metrics.csv", csv.str());

    std::ostringstream txt;
    if (!report.fingerprint.empty()) txt << "fingerprint: " << report.fingerprint << "\n\n";
    txt << "RMSE by ticker\n";
    std::size_t col = 12;
    for (const auto& t : report.tickers) col = std::max(col, t.size() + 2);
    txt << pad("model", 12);
    for (const auto& t : report.tickers) txt << pad(t, col);
    txt << '\n';
    for (const auto& model : report.models) {
        txt << pad(model, 12);
        for (const auto& t : report.tickers) {
            const auto it = std::find_if(report.results.begin(), report.results.end(), [&](const ModelResult& r) {
                return r.trace.ticker == t && r.trace.model == model;
            });
            txt << pad(it == report.results.end() ? "-" : fixed(it->metrics.rmse), col);
        }
        txt << '\n';
    }
    txt << "\nPooled metrics\n" << pad("model", 12) << pad("MAE", 14) << pad("MSE", 14) << pad("RMSE", 14) << "n\n";
    for (const auto& model : report.models) {
        const Metrics& m = report.pooled.at(model);
        txt << pad(model, 12) << pad(fixed(m.mae), 14) << pad(fixed(m.mse), 14) << pad(fixed(m.rmse), 14) << m.n
            << '\n';
    }
    txt << "\nWinner by metric\n" << pad("ticker", col) << pad("MAE", 12) << pad("MSE", 12) << "RMSE\n";
    for (const auto& v : report.verdicts) {
        txt << pad(v.ticker, col) << pad(v.winner[0], 12) << pad(v.winner[1], 12) << v.winner[2] << '\n';
    }
    files.emplace_back("metrics.txt", txt.str());

    for (const auto& r : report.results) {
        const std::string stem = r.trace.ticker + "_" + r.trace.model;
        std::ostringstream trace;
        trace << fp_line << "date,actual,predicted\n";
        for (std::size_t i = 0; i < r.trace.dates.size(); ++i) {
            trace << r.trace.dates[i].iso() << ',' << full(r.trace.actual[i]) << ',' << full(r.trace.predicted[i])
                  << '\n';
        }
        files.emplace_back("trace_" + stem + ".csv", trace.str());
        files.emplace_back("plot_" + stem + ".svg",
                           svg::line_chart(r.trace.ticker + " - " + r.trace.model + " one-step forecast",
                                           r.trace.dates,
                                           {{"actual", r.trace.actual, "#1f77b4"},
                                            {"predicted", r.trace.predicted, "#d62728"}},
                                           report.fingerprint.empty() ? "" : "fingerprint=" + report.fingerprint));
    }

    write_files_atomic(out_dir, files);
}

}  // namespace pricecast
