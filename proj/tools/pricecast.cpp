#include "pricecast/commands.hpp"
#include "pricecast/config.hpp"
#include "pricecast/errors.hpp"

#include "CLI11.hpp"

#include <iostream>

using namespace pricecast;

namespace {

struct Common {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> ticker;
    bool quiet = false;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config, "Run configuration (JSON)")->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", c.out, "Output directory (overrides output_dir)");
    cmd->add_option("--seed", c.seed, "Global seed (overrides seed)");
    cmd->add_option("--ticker", c.ticker, "Only process this ticker");
    cmd->add_flag("--quiet", c.quiet, "Suppress progress output");
}

std::pair<RunConfig, CommandOptions> resolve(const Common& c) {
    RunConfig config = load_config(c.config);
    if (c.seed) config.seed = *c.seed;
    CommandOptions options;
    options.out_dir = c.out.empty() ? config.output_dir : std::filesystem::path(c.out);
    options.ticker = c.ticker;
    options.log = c.quiet ? nullptr : &std::cerr;
    return {std::move(config), options};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pricecast: ARIMA and LSTM stock price forecasting"};
    app.require_subcommand(1);

    Common analyze_opts, arima_opts, lstm_opts, sweep_opts, backtest_opts;
    std::string dimension;
    std::vector<double> sweep_values;
    bool end_to_end = false;

    auto* analyze = app.add_subcommand("analyze", "ADF tests, differencing, correlograms and BIC heatmap");
    add_common(analyze, analyze_opts);
    auto* fit_arima = app.add_subcommand("fit-arima", "Select and fit the ARIMA model");
    add_common(fit_arima, arima_opts);
    auto* train_lstm = app.add_subcommand("train-lstm", "Train the LSTM stack");
    add_common(train_lstm, lstm_opts);
    auto* sweep = app.add_subcommand("sweep", "Train one LSTM per hyper-parameter value");
    add_common(sweep, sweep_opts);
    sweep->add_option("--dimension", dimension, "dropout, layers or units")->required();
    sweep->add_option("--values", sweep_values, "Values to try")->required()->delimiter(',');
    auto* backtest = app.add_subcommand("backtest", "Compare models on the shared test window");
    add_common(backtest, backtest_opts);
    backtest->add_flag("--end-to-end", end_to_end, "Fit and train instead of loading checkpoints");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*analyze) {
            auto [config, options] = resolve(analyze_opts);
            for (const auto& r : cmd_analyze(config, options)) {
                std::cout << r.ticker << ": recommended d = " << r.recommended_d << ", BIC order ARIMA"
                          << r.grid.best_order.str() << '\n';
            }
        } else if (*fit_arima) {
            auto [config, options] = resolve(arima_opts);
            for (const auto& r : cmd_fit_arima(config, options)) {
                std::cout << r.ticker << ": ARIMA" << r.model.order.str() << " loglik " << r.model.loglik << '\n';
            }
        } else if (*train_lstm) {
            auto [config, options] = resolve(lstm_opts);
            for (const auto& r : cmd_train_lstm(config, options)) {
                std::cout << r.ticker << ": train " << r.scores.train << " val " << r.scores.val << " test "
                          << r.scores.test << '\n';
            }
        } else if (*sweep) {
            auto [config, options] = resolve(sweep_opts);
            const auto dim = parse_sweep_dimension(dimension);
            for (const auto& table : cmd_sweep(config, dim, sweep_values, options)) {
                std::cout << render_sweep_table(table) << '\n';
            }
        } else if (*backtest) {
            auto [config, options] = resolve(backtest_opts);
            options.end_to_end = end_to_end;
            const EvalReport report = cmd_backtest(config, options);
            std::cout << "report written to " << options.out_dir.string() << " (" << report.tickers.size()
                      << " tickers, " << report.models.size() << " models)\n";
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
