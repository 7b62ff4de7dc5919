#include "pricecast/config.hpp"

#include "pricecast/errors.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace pricecast {

namespace {

using nlohmann::json;

Date date_or(const json& j, const char* key, const Date& fallback) {
    if (!j.contains(key) || j.at(key).is_null()) return fallback;
    try {
        return Date::parse(j.at(key).get<std::string>());
    } catch (const DataError& e) {
        throw ConfigError(std::string("config key '") + key + "': " + e.what());
    }
}

template <typename T>
T value_or(const json& j, const char* key, const T& fallback) {
    if (!j.contains(key) || j.at(key).is_null()) return fallback;
    return j.at(key).get<T>();
}

void reject_unknown(const json& j, std::initializer_list<const char*> known, const std::string& section) {
    for (const auto& [key, _] : j.items()) {
        bool found = false;
        for (const char* k : known) found = found || key == k;
        if (!found) throw ConfigError("unknown config key '" + section + key + "'");
    }
}

json split_json(const SplitSpec& s) {
    json j{{"train_end", s.train_end.iso()}, {"test_end", s.test_end.iso()}};
    j["val_end"] = s.val_end ? json(s.val_end->iso()) : json(nullptr);
    return j;
}

}  // namespace

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string RunConfig::canonical() const {
    json j;
    j["seed"] = seed;
    json data = json::array();
    for (const auto& s : sources) {
        data.push_back({{"ticker", s.ticker}, {"path", s.path.filename().string()}, {"column", s.column}});
    }
    j["data"] = data;
    j["splits"]["lstm"] = split_json(lstm_split);
    j["splits"]["arima"] = split_json(arima_split.split);
    j["splits"]["arima"]["train_start"] =
        arima_split.train_start ? json(arima_split.train_start->iso()) : json(nullptr);
    j["arima"] = {{"d", arima.d ? json(*arima.d) : json("adf")},
                  {"order", arima.order ? json({arima.order->first, arima.order->second}) : json("grid")},
                  {"p_max", arima.p_max},
                  {"q_max", arima.q_max},
                  {"criterion", to_string(arima.criterion)},
                  {"refit_every", arima.refit_every ? json(*arima.refit_every) : json(nullptr)},
                  {"acf_lags", arima.acf_lags}};
    json extras = json::array();
    for (const auto& o : arima.extra_orders) extras.push_back({o.p, o.d, o.q});
    j["arima"]["extra_orders"] = extras;
    j["lstm"] = {{"layers", lstm.layers},
                 {"units", lstm.units},
                 {"dropout", lstm.dropout},
                 {"window", lstm.window},
                 {"epochs", lstm.train.epochs},
                 {"batch_size", lstm.train.batch_size},
                 {"learning_rate", lstm.train.learning_rate},
                 {"adam_beta1", lstm.train.adam_beta1},
                 {"adam_beta2", lstm.train.adam_beta2},
                 {"adam_epsilon", lstm.train.adam_epsilon},
                 {"shuffle", lstm.train.shuffle}};
    j["backtest"]["models"] = backtest_models;
    return j.dump();
}

std::string RunConfig::fingerprint() const { return fnv1a_hex(canonical()); }

lstm::StackConfig RunConfig::stack_config() const {
    return lstm::StackConfig{lstm.layers, lstm.units, lstm.dropout, lstm.window, seed};
}

lstm::TrainConfig RunConfig::train_config() const {
    lstm::TrainConfig t = lstm.train;
    t.seed = seed;
    return t;
}

RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
    json root;
    try {
        root = json::parse(text, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("config root must be an object");

    RunConfig cfg;
    cfg.lstm_split = SplitSpec{Date(2015, 12, 31), Date(2017, 12, 31), Date(2018, 12, 31)};
    cfg.arima_split = ArimaSplit{Date(2016, 1, 1), SplitSpec{Date(2017, 12, 31), std::nullopt, Date(2018, 12, 31)}};

    try {
        reject_unknown(root, {"seed", "output_dir", "data", "splits", "arima", "lstm", "backtest"}, "");
        cfg.seed = value_or<std::uint64_t>(root, "seed", cfg.seed);
        cfg.output_dir = value_or<std::string>(root, "output_dir", cfg.output_dir.string());

        if (!root.contains("data")) throw ConfigError("config needs a 'data' section");
        const json& data = root.at("data");
        reject_unknown(data, {"column", "sources"}, "data.");
        const std::string default_column = value_or<std::string>(data, "column", "High");
        for (const auto& src : data.at("sources")) {
            reject_unknown(src, {"ticker", "path", "column"}, "data.sources[].");
            DataSource ds;
            ds.ticker = src.at("ticker").get<std::string>();
            ds.path = src.at("path").get<std::string>();
            if (ds.path.is_relative()) ds.path = base_dir / ds.path;
            ds.column = value_or<std::string>(src, "column", default_column);
            if (!std::filesystem::exists(ds.path)) {
                throw ConfigError("data file for " + ds.ticker + " not found: " + ds.path.string());
            }
            cfg.sources.push_back(std::move(ds));
        }
        if (cfg.sources.empty()) throw ConfigError("config lists no data sources");

        if (root.contains("splits")) {
            const json& splits = root.at("splits");
            reject_unknown(splits, {"lstm", "arima"}, "splits.");
            if (splits.contains("lstm")) {
                const json& s = splits.at("lstm");
                reject_unknown(s, {"train_end", "val_end", "test_end"}, "splits.lstm.");
                cfg.lstm_split.train_end = date_or(s, "train_end", cfg.lstm_split.train_end);
                cfg.lstm_split.val_end = date_or(s, "val_end", *cfg.lstm_split.val_end);
                cfg.lstm_split.test_end = date_or(s, "test_end", cfg.lstm_split.test_end);
            }
            if (splits.contains("arima")) {
                const json& s = splits.at("arima");
                reject_unknown(s, {"train_start", "train_end", "test_end"}, "splits.arima.");
                if (s.contains("train_start")) {
                    cfg.arima_split.train_start =
                        s.at("train_start").is_null() ? std::nullopt
                                                      : std::optional<Date>(date_or(s, "train_start", Date{}));
                }
                cfg.arima_split.split.train_end = date_or(s, "train_end", cfg.arima_split.split.train_end);
                cfg.arima_split.split.test_end = date_or(s, "test_end", cfg.arima_split.split.test_end);
            }
        }
        cfg.lstm_split.validate();
        cfg.arima_split.split.validate();
        if (!cfg.lstm_split.val_end) throw ConfigError("the LSTM split needs a validation end date");

        if (root.contains("arima")) {
            const json& a = root.at("arima");
            reject_unknown(a, {"d", "order", "p_max", "q_max", "criterion", "refit_every", "acf_lags", "extra_orders"},
                           "arima.");
            if (a.contains("d") && !(a.at("d").is_string() && a.at("d") == "adf")) cfg.arima.d = a.at("d").get<int>();
            if (a.contains("order") && !(a.at("order").is_string() && a.at("order") == "grid")) {
                const auto pq = a.at("order").get<std::vector<int>>();
                if (pq.size() != 2) throw ConfigError("arima.order must be \"grid\" or [p, q]");
                cfg.arima.order = std::make_pair(pq[0], pq[1]);
            }
            cfg.arima.p_max = value_or<int>(a, "p_max", cfg.arima.p_max);
            cfg.arima.q_max = value_or<int>(a, "q_max", cfg.arima.q_max);
            cfg.arima.criterion = parse_criterion(value_or<std::string>(a, "criterion", "bic"));
            if (a.contains("refit_every") && !a.at("refit_every").is_null()) {
                cfg.arima.refit_every = a.at("refit_every").get<int>();
            }
            cfg.arima.acf_lags = value_or<int>(a, "acf_lags", cfg.arima.acf_lags);
            if (a.contains("extra_orders")) {
                for (const auto& o : a.at("extra_orders")) {
                    const auto v = o.get<std::vector<int>>();
                    if (v.size() != 3) throw ConfigError("arima.extra_orders entries must be [p, d, q]");
                    cfg.arima.extra_orders.push_back({v[0], v[1], v[2]});
                }
            }
        }
        if (cfg.arima.d) ArimaOrder{0, *cfg.arima.d, 0}.validate();
        if (cfg.arima.order && (cfg.arima.order->first < 0 || cfg.arima.order->second < 0)) {
            throw ConfigError("arima.order entries must be nonnegative");
        }
        for (const auto& o : cfg.arima.extra_orders) o.validate();
        if (cfg.arima.p_max < 0 || cfg.arima.p_max > 5 || cfg.arima.q_max < 0 || cfg.arima.q_max > 5) {
            throw ConfigError("arima.p_max and arima.q_max must lie in 0..5");
        }
        if (cfg.arima.refit_every && *cfg.arima.refit_every <= 0) throw ConfigError("arima.refit_every must be positive");
        if (cfg.arima.acf_lags < 1) throw ConfigError("arima.acf_lags must be positive");

        if (root.contains("lstm")) {
            const json& l = root.at("lstm");
            reject_unknown(l, {"layers", "units", "dropout", "window", "epochs", "batch_size", "learning_rate",
                               "adam_beta1", "adam_beta2", "adam_epsilon", "shuffle"},
                           "lstm.");
            cfg.lstm.layers = value_or<int>(l, "layers", cfg.lstm.layers);
            cfg.lstm.units = value_or<int>(l, "units", cfg.lstm.units);
            cfg.lstm.dropout = value_or<double>(l, "dropout", cfg.lstm.dropout);
            cfg.lstm.window = value_or<int>(l, "window", cfg.lstm.window);
            auto& t = cfg.lstm.train;
            t.epochs = value_or<int>(l, "epochs", t.epochs);
            t.batch_size = value_or<int>(l, "batch_size", t.batch_size);
            t.learning_rate = value_or<double>(l, "learning_rate", t.learning_rate);
            t.adam_beta1 = value_or<double>(l, "adam_beta1", t.adam_beta1);
            t.adam_beta2 = value_or<double>(l, "adam_beta2", t.adam_beta2);
            t.adam_epsilon = value_or<double>(l, "adam_epsilon", t.adam_epsilon);
            t.shuffle = value_or<bool>(l, "shuffle", t.shuffle);
        }
        if (cfg.lstm.layers < 1 || cfg.lstm.units < 1 || cfg.lstm.window < 1) {
            throw ConfigError("lstm.layers, lstm.units and lstm.window must be positive");
        }
        if (!(cfg.lstm.dropout >= 0.0 && cfg.lstm.dropout < 1.0)) throw ConfigError("lstm.dropout must lie in [0, 1)");
        cfg.lstm.train.validate();

        if (root.contains("backtest")) {
            const json& b = root.at("backtest");
            reject_unknown(b, {"models"}, "backtest.");
            cfg.backtest_models = value_or<std::vector<std::string>>(b, "models", cfg.backtest_models);
            for (const auto& m : cfg.backtest_models) {
                if (m != "arima" && m != "lstm" && m != "naive" && m != "oracle") {
                    throw ConfigError("unknown backtest model '" + m + "' (arima, lstm, naive, oracle)");
                }
            }
            if (cfg.backtest_models.empty()) throw ConfigError("backtest.models must not be empty");
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid config: ") + e.what());
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), path.parent_path());
}

}  // namespace pricecast
