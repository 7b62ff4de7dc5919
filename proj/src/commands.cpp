#include "pricecast/commands.hpp"

#include "pricecast/errors.hpp"
#include "pricecast/svg.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace pricecast {

namespace {

void note(std::ostream* log, const std::string& msg) {
    if (log) *log << msg << std::endl;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read '" + path.string() + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string fp_comment(const std::string& fingerprint) { return "# fingerprint=" + fingerprint + "\n"; }

struct ArimaPartition {
    PriceSeries train;
    PriceSeries test;
};

ArimaPartition arima_partition(const RunConfig& config, const PriceSeries& series) {
    std::optional<PriceSeries> restricted = series;
    if (config.arima_split.train_start) {
        // slice() keeps dates strictly after its first bound.
        const Date before{config.arima_split.train_start->days() - std::chrono::days{1}};
        restricted = series.slice(before, std::nullopt);
        if (!restricted) throw DataError(series.ticker() + ": no data on or after the ARIMA training start");
    }
    SplitResult parts = split(*restricted, config.arima_split.split);
    return ArimaPartition{std::move(parts.train), std::move(parts.test)};
}

std::string series_csv(const std::vector<Date>& dates, std::span<const double> values, std::size_t offset,
                       const std::string& fingerprint) {
    std::ostringstream out;
    out << fp_comment(fingerprint) << "date,value\n" << std::setprecision(12);
    for (std::size_t i = 0; i < values.size(); ++i) out << dates[i + offset].iso() << ',' << values[i] << '\n';
    return out.str();
}

std::string correlogram_csv(const CorrelogramResult& c, const std::string& fingerprint) {
    std::ostringstream out;
    out << fp_comment(fingerprint);
    write_correlogram_csv(out, c);
    return out.str();
}

std::string describe_model(const ArimaModel& m) {
    std::ostringstream out;
    out << std::setprecision(10);
    out << "order = ARIMA" << m.order.str() << '\n';
    out << "intercept = " << m.intercept << '\n';
    for (std::size_t i = 0; i < m.phi.size(); ++i) out << "phi" << i + 1 << " = " << m.phi[i] << '\n';
    for (std::size_t j = 0; j < m.theta.size(); ++j) out << "theta" << j + 1 << " = " << m.theta[j] << '\n';
    out << "sigma2 = " << m.sigma2 << '\n';
    out << "n_obs = " << m.n_obs << '\n';
    out << "loglik = " << m.loglik << '\n';
    out << "aic = " << aic(m) << '\n';
    out << "bic = " << bic(m) << '\n';
    out << "stationary = " << (m.stationary ? "true" : "false") << '\n';
    out << "invertible = " << (m.invertible ? "true" : "false") << '\n';
    if (m.stderrs) {
        for (const auto& t : t_test(m)) {
            out << "t_test." << t.name << " = estimate " << t.estimate << ", stderr " << t.stderr_ << ", t "
                << t.t_stat << (t.significant ? ", significant at 5%" : ", not significant at 5%") << '\n';
        }
    } else {
        out << "t_test = unavailable (CSS Hessian not positive definite)\n";
    }
    return out.str();
}

struct LstmData {
    Scaler scaler;
    WindowedDataset train;
    WindowedDataset val;
    std::vector<double> seed_window;  // normalized values just before the test partition
    std::vector<double> test;         // normalized test values
    PriceSeries test_series;
};

LstmData prepare_lstm(const RunConfig& config, const PriceSeries& series) {
    SplitResult parts = split(series, config.lstm_split);
    const auto window = static_cast<std::size_t>(config.lstm.window);
    const Scaler scaler = fit_scaler(parts.train);
    const std::vector<double> train = normalize(parts.train.values(), scaler);
    const std::vector<double> val = normalize(parts.val->values(), scaler);
    std::vector<double> history = train;
    history.insert(history.end(), val.begin(), val.end());
    if (history.size() < window) throw DataError(series.ticker() + ": not enough history for the LSTM window");
    LstmData data{scaler,
                  make_windows(train, window),
                  make_windows_with_context(train, val, window),
                  std::vector<double>(history.end() - static_cast<std::ptrdiff_t>(window), history.end()),
                  normalize(parts.test.values(), scaler),
                  parts.test};
    return data;
}

}  // namespace

std::vector<LoadedSeries> load_sources(const RunConfig& config, const std::optional<std::string>& ticker) {
    std::vector<LoadedSeries> out;
    for (const auto& src : config.sources) {
        if (ticker && src.ticker != *ticker) continue;
        LoadStats stats;
        PriceSeries series = load_csv(src.path, src.column, src.ticker, &stats);
        out.push_back({src, std::move(series), stats});
    }
    if (out.empty()) {
        throw ConfigError(ticker ? "ticker '" + *ticker + "' is not in the config" : "config lists no data sources");
    }
    return out;
}

int recommend_d(std::span<const double> values) {
    for (int d = 0; d <= 2; ++d) {
        const std::vector<double> x = difference(values, d);
        if (adf_test(x).rejects(Significance::pct5)) return d;
    }
    return 2;
}

std::vector<AnalyzeResult> cmd_analyze(const RunConfig& config, const CommandOptions& options) {
    const std::string fp = config.fingerprint();
    std::vector<AnalyzeResult> results;
    std::vector<std::pair<std::string, std::string>> files;
    FitOptions fit_options;
    fit_options.seed = config.seed;

    for (const auto& loaded : load_sources(config, options.ticker)) {
        const std::string& t = loaded.source.ticker;
        note(options.log, "analyze " + t);
        const ArimaPartition part = arima_partition(config, loaded.series);
        const auto& values = part.train.values();
        const auto& dates = part.train.dates();

        AnalyzeResult r;
        r.ticker = t;
        std::ostringstream report;
        report << "fingerprint = " << fp << '\n'
               << "ticker = " << t << '\n'
               << "partition = " << dates.front().iso() << " .. " << dates.back().iso() << '\n'
               << "rows_dropped = " << loaded.stats.rows_dropped << "\n\n";
        const char* labels[] = {"level", "first difference", "second difference"};
        r.recommended_d = 2;
        bool chosen = false;
        for (int d = 0; d <= 2; ++d) {
            const std::vector<double> x = difference(values, d);
            r.adf.push_back(adf_test(x));
            write_adf_report(report, r.adf.back(), std::string(labels[d]) + " of " + t);
            report << '\n';
            if (!chosen && r.adf.back().rejects(Significance::pct5)) {
                r.recommended_d = d;
                chosen = true;
            }
        }
        const int d = config.arima.d.value_or(r.recommended_d);
        report << "recommended_d = " << r.recommended_d << '\n';
        report << "d_used = " << d << '\n';

        const std::vector<double> diff1 = difference(values, 1);
        const std::vector<double> diff2 = difference(values, 2);
        files.emplace_back("diff1_" + t + ".csv", series_csv(dates, diff1, 1, fp));
        files.emplace_back("diff2_" + t + ".csv", series_csv(dates, diff2, 2, fp));

        const std::vector<double> stationary = difference(values, d);
        r.acf = acf(stationary, config.arima.acf_lags);
        r.pacf = pacf(stationary, config.arima.acf_lags);
        files.emplace_back("acf_" + t + ".csv", correlogram_csv(r.acf, fp));
        files.emplace_back("pacf_" + t + ".csv", correlogram_csv(r.pacf, fp));

        r.grid = grid_search(values, config.arima.p_max, config.arima.q_max, d, Criterion::bic, fit_options);
        std::ostringstream grid_csv;
        grid_csv << fp_comment(fp);
        write_grid_csv(grid_csv, r.grid, Criterion::bic);
        files.emplace_back("bic_heatmap_" + t + ".csv", grid_csv.str());
        files.emplace_back("bic_heatmap_" + t + ".svg",
                           svg::heatmap("BIC by (p, q), d=" + std::to_string(d) + " - " + t, "p", "q",
                                        r.grid.p_max + 1, r.grid.q_max + 1, r.grid.bic_matrix, "fingerprint=" + fp));
        const ArimaOrder aic_best = r.grid.best_for(Criterion::aic);
        report << "bic_best_order = ARIMA" << r.grid.best_order.str() << '\n';
        report << "aic_best_order = ARIMA" << aic_best.str() << '\n';
        for (const auto& f : r.grid.failures) report << "grid_failure = " << f << '\n';
        files.emplace_back("adf_" + t + ".txt", report.str());
        results.push_back(std::move(r));
    }
    write_files_atomic(options.out_dir, files);
    return results;
}

ArimaFitResult fit_arima_for(const RunConfig& config, const PriceSeries& series) {
    const ArimaPartition part = arima_partition(config, series);
    const auto& values = part.train.values();
    FitOptions fit_options;
    fit_options.seed = config.seed;

    ArimaFitResult r;
    r.ticker = series.ticker();
    const int d = config.arima.d.value_or(recommend_d(values));
    ArimaOrder order{0, d, 0};
    if (config.arima.order) {
        order.p = config.arima.order->first;
        order.q = config.arima.order->second;
    } else {
        r.grid = grid_search(values, config.arima.p_max, config.arima.q_max, d, config.arima.criterion, fit_options);
        order = r.grid->best_order;
    }
    r.model = fit(values, order, fit_options);
    for (const auto& extra : config.arima.extra_orders) r.extras.push_back(fit(values, extra, fit_options));
    r.diagnostics = residual_diagnostics(r.model, values, config.arima.acf_lags);
    return r;
}

std::vector<ArimaFitResult> cmd_fit_arima(const RunConfig& config, const CommandOptions& options) {
    const std::string fp = config.fingerprint();
    std::vector<ArimaFitResult> results;
    std::vector<std::pair<std::string, std::string>> files;
    for (const auto& loaded : load_sources(config, options.ticker)) {
        const std::string& t = loaded.source.ticker;
        note(options.log, "fit-arima " + t);
        ArimaFitResult r;
        try {
            r = fit_arima_for(config, loaded.series);
        } catch (const NumericError& e) {
            throw NumericError(t + ": " + e.what());
        }
        files.emplace_back("arima_" + t + ".json", model_to_text(r.model, fp));

        std::ostringstream report;
        report << "fingerprint = " << fp << "\nticker = " << t << "\n\n" << describe_model(r.model);
        report << "residual_acf_inside_band = " << fixed(r.diagnostics.correlogram.fraction_inside_band(), 4) << '\n';
        report << "residual_check = " << (r.diagnostics.pass ? "pass" : "fail") << '\n';
        if (r.grid) {
            report << "selection = grid search, criterion " << to_string(r.grid->criterion) << '\n';
            for (const auto& f : r.grid->failures) report << "grid_failure = " << f << '\n';
            std::ostringstream grid_csv;
            grid_csv << fp_comment(fp);
            write_grid_csv(grid_csv, *r.grid, r.grid->criterion);
            files.emplace_back(to_string(r.grid->criterion) + "_grid_" + t + ".csv", grid_csv.str());
        }
        for (const auto& extra : r.extras) report << "\n[extra]\n" << describe_model(extra);
        files.emplace_back("arima_" + t + "_report.txt", report.str());

        std::ostringstream resid;
        resid << fp_comment(fp);
        write_correlogram_csv(resid, r.diagnostics.correlogram);
        files.emplace_back("residual_acf_" + t + ".csv", resid.str());
        results.push_back(std::move(r));
    }
    write_files_atomic(options.out_dir, files);
    return results;
}

LstmRunResult run_lstm_for(const RunConfig& config, const PriceSeries& series, std::ostream* log) {
    const LstmData data = prepare_lstm(config, series);
    const lstm::LstmStack stack = lstm::LstmStack::create(config.stack_config());
    const auto on_epoch = [&](const lstm::EpochLoss& e) {
        if (log) {
            *log << "  " << series.ticker() << " epoch " << e.epoch << " train_mse " << e.train_mse << " val_mse "
                 << e.val_mse << std::endl;
        }
    };
    LstmRunResult r;
    r.ticker = series.ticker();
    try {
        r.training = lstm::train(stack, data.train, data.val, config.train_config(), on_epoch);
    } catch (const NumericError& e) {
        throw NumericError(series.ticker() + ": " + e.what());
    }
    r.scaler = data.scaler;
    const auto& best = r.training.stack;
    r.scores.train = lstm::mse_loss(lstm::predict(best, data.train), data.train.targets);
    r.scores.val = lstm::mse_loss(lstm::predict(best, data.val), data.val.targets);
    r.scores.test = lstm::mse_loss(lstm::multi_sequence_predict(best, data.seed_window, data.test), data.test);
    return r;
}

std::vector<LstmRunResult> cmd_train_lstm(const RunConfig& config, const CommandOptions& options) {
    const std::string fp = config.fingerprint();
    std::vector<LstmRunResult> results;
    std::vector<std::pair<std::string, std::string>> files;
    for (const auto& loaded : load_sources(config, options.ticker)) {
        const std::string& t = loaded.source.ticker;
        note(options.log, "train-lstm " + t);
        LstmRunResult r = run_lstm_for(config, loaded.series, options.log);
        files.emplace_back("lstm_" + t + ".json",
                           lstm::checkpoint_to_text(r.training.stack, config.train_config(), fp, r.scaler));
        std::ostringstream loss;
        loss << fp_comment(fp) << "epoch,train_mse,val_mse\n" << std::setprecision(17);
        for (const auto& e : r.training.history) loss << e.epoch << ',' << e.train_mse << ',' << e.val_mse << '\n';
        files.emplace_back("loss_" + t + ".csv", loss.str());
        std::ostringstream scores;
        scores << "fingerprint = " << fp << "\nticker = " << t << "\nbest_epoch = " << r.training.best_epoch
               << std::setprecision(17) << "\ntrain_score = " << r.scores.train << "\nvalidation_score = "
               << r.scores.val << "\ntest_score = " << r.scores.test << '\n';
        files.emplace_back("lstm_" + t + "_scores.txt", scores.str());
        results.push_back(std::move(r));
    }
    write_files_atomic(options.out_dir, files);
    return results;
}

SweepDimension parse_sweep_dimension(const std::string& text) {
    if (text == "dropout") return SweepDimension::dropout;
    if (text == "layers") return SweepDimension::layers;
    if (text == "units") return SweepDimension::units;
    throw ConfigError("unknown sweep dimension '" + text + "' (dropout, layers, units)");
}

std::string to_string(SweepDimension d) {
    switch (d) {
        case SweepDimension::dropout: return "dropout";
        case SweepDimension::layers: return "layers";
        case SweepDimension::units: return "units";
    }
    return "?";
}

std::string render_sweep_table(const SweepTable& table) {
    const std::string name = to_string(table.dimension);
    std::ostringstream out;
    out << std::left << std::setw(18) << table.ticker << std::setw(24) << "Train Score" << std::setw(24)
        << "Validation Score" << "Test Score\n";
    for (const auto& row : table.rows) {
        std::ostringstream label;
        label << name << " = " << row.value;
        out << std::setw(18) << label.str();
        if (row.scores) {
            std::ostringstream a, b, c;
            a << std::setprecision(12) << row.scores->train;
            b << std::setprecision(12) << row.scores->val;
            c << std::setprecision(12) << row.scores->test;
            out << std::setw(24) << a.str() << std::setw(24) << b.str() << c.str() << '\n';
        } else {
            out << "failed: " << row.error << '\n';
        }
    }
    return out.str();
}

std::vector<SweepTable> cmd_sweep(const RunConfig& config, SweepDimension dimension, const std::vector<double>& values,
                                  const CommandOptions& options) {
    if (values.empty()) throw ConfigError("sweep needs at least one value");
    std::vector<SweepTable> tables;
    std::vector<std::pair<std::string, std::string>> files;
    const std::string dim = to_string(dimension);
    for (const auto& loaded : load_sources(config, options.ticker)) {
        SweepTable table;
        table.ticker = loaded.source.ticker;
        table.dimension = dimension;
        for (double v : values) {
            note(options.log, "sweep " + table.ticker + " " + dim + "=" + fixed(v, 3));
            SweepRow row;
            row.value = v;
            try {
                RunConfig cell = config;
                switch (dimension) {
                    case SweepDimension::dropout:
                        if (!(v >= 0.0 && v < 1.0)) throw ConfigError("dropout must lie in [0, 1)");
                        cell.lstm.dropout = v;
                        break;
                    case SweepDimension::layers:
                        if (v < 1 || v != static_cast<int>(v)) throw ConfigError("layers must be a positive integer");
                        cell.lstm.layers = static_cast<int>(v);
                        break;
                    case SweepDimension::units:
                        if (v < 1 || v != static_cast<int>(v)) throw ConfigError("units must be a positive integer");
                        cell.lstm.units = static_cast<int>(v);
                        break;
                }
                row.scores = run_lstm_for(cell, loaded.series, options.log).scores;
            } catch (const std::exception& e) {
                row.error = e.what();
            }
            table.rows.push_back(std::move(row));
        }
        std::ostringstream csv;
        csv << fp_comment(config.fingerprint()) << dim << ",train_score,validation_score,test_score,error\n"
            << std::setprecision(17);
        for (const auto& row : table.rows) {
            csv << row.value << ',';
            if (row.scores) csv << row.scores->train << ',' << row.scores->val << ',' << row.scores->test << ",\n";
            else csv << ",,," << '"' << row.error << "\"\n";
        }
        files.emplace_back("sweep_" + dim + "_" + table.ticker + ".csv", csv.str());
        files.emplace_back("sweep_" + dim + "_" + table.ticker + ".txt",
                           "# fingerprint=" + config.fingerprint() + "\n" + render_sweep_table(table));
        tables.push_back(std::move(table));
    }
    write_files_atomic(options.out_dir, files);
    return tables;
}

EvalReport cmd_backtest(const RunConfig& config, const CommandOptions& options) {
    const std::string fp = config.fingerprint();
    const auto wants = [&](const std::string& m) {
        return std::find(config.backtest_models.begin(), config.backtest_models.end(), m) !=
               config.backtest_models.end();
    };
    std::vector<ModelTrace> traces;
    std::vector<std::pair<std::string, std::string>> checkpoints;

    for (const auto& loaded : load_sources(config, options.ticker)) {
        const std::string& t = loaded.source.ticker;
        note(options.log, "backtest " + t);
        const ArimaPartition arima_part = arima_partition(config, loaded.series);
        const PriceSeries& test = arima_part.test;

        const auto add_trace = [&](const std::string& model, std::vector<double> predicted, const PriceSeries& ref) {
            traces.push_back(ModelTrace{t, model, ref.dates(), ref.values(), std::move(predicted)});
        };

        if (wants("arima")) {
            std::vector<ArimaModel> models;
            std::vector<std::string> names;
            const auto path = options.out_dir / ("arima_" + t + ".json");
            if (options.end_to_end) {
                ArimaFitResult r = fit_arima_for(config, loaded.series);
                checkpoints.emplace_back("arima_" + t + ".json", model_to_text(r.model, fp));
                models.push_back(r.model);
                for (auto& e : r.extras) models.push_back(e);
            } else {
                if (!std::filesystem::exists(path)) {
                    throw DataError("missing ARIMA checkpoint '" + path.string() +
                                    "' (run fit-arima first or pass --end-to-end)");
                }
                std::string stored;
                models.push_back(model_from_text(read_file(path), &stored));
                if (stored != fp) {
                    throw ConfigError("checkpoint '" + path.string() + "' was produced by a different configuration (" +
                                      stored + " vs " + fp + ")");
                }
                FitOptions fo;
                fo.seed = config.seed;
                for (const auto& extra : config.arima.extra_orders) {
                    models.push_back(fit(arima_part.train.values(), extra, fo));
                }
            }
            names.push_back("arima");
            for (std::size_t k = 1; k < models.size(); ++k) {
                const auto& o = models[k].order;
                names.push_back("arima_" + std::to_string(o.p) + "_" + std::to_string(o.d) + "_" + std::to_string(o.q));
            }
            FitOptions fo;
            fo.seed = config.seed;
            for (std::size_t k = 0; k < models.size(); ++k) {
                add_trace(names[k],
                          rolling_forecast(models[k], arima_part.train.values(), test.values(),
                                           config.arima.refit_every, fo),
                          test);
            }
        }

        if (wants("lstm")) {
            const auto path = options.out_dir / ("lstm_" + t + ".json");
            LstmData data = prepare_lstm(config, loaded.series);
            lstm::LstmStack stack;
            if (options.end_to_end) {
                LstmRunResult r = run_lstm_for(config, loaded.series, options.log);
                checkpoints.emplace_back("lstm_" + t + ".json",
                                         lstm::checkpoint_to_text(r.training.stack, config.train_config(), fp, r.scaler));
                stack = std::move(r.training.stack);
            } else {
                if (!std::filesystem::exists(path)) {
                    throw DataError("missing LSTM checkpoint '" + path.string() +
                                    "' (run train-lstm first or pass --end-to-end)");
                }
                std::string stored;
                std::optional<Scaler> scaler;
                stack = lstm::checkpoint_from_text(read_file(path), nullptr, &stored, &scaler);
                if (stored != fp) {
                    throw ConfigError("checkpoint '" + path.string() + "' was produced by a different configuration (" +
                                      stored + " vs " + fp + ")");
                }
                if (!scaler || scaler->min() != data.scaler.min() || scaler->max() != data.scaler.max()) {
                    throw ConfigError("checkpoint '" + path.string() + "' scaler does not match the training data");
                }
            }
            const std::vector<double> normalized = lstm::multi_sequence_predict(stack, data.seed_window, data.test);
            add_trace("lstm", denormalize(normalized, data.scaler), data.test_series);
        }

        if (wants("naive")) {
            std::vector<double> predicted;
            double last = arima_part.train.values().back();
            for (double v : test.values()) {
                predicted.push_back(last);
                last = v;
            }
            add_trace("naive", std::move(predicted), test);
        }
        if (wants("oracle")) add_trace("oracle", test.values(), test);
    }

    EvalReport report = compare(traces, fp);
    if (!checkpoints.empty()) write_files_atomic(options.out_dir, checkpoints);
    emit_report(report, options.out_dir);
    return report;
}

}  // namespace pricecast
