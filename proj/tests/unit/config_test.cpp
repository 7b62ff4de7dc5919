#include "pricecast/config.hpp"
#include "pricecast/errors.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace pricecast;
using testing_support::TempDir;

namespace {

const char* kMinimal = R"({"data": {"sources": [{"ticker": "AAA", "path": "a.csv"}]}})";

struct ConfigTest : ::testing::Test {
    TempDir dir{"config"};
    void SetUp() override { dir.write("a.csv", "Date,High\n2018-01-02,1\n"); }
    RunConfig parse(const std::string& text) { return parse_config(text, dir.path()); }
};

}  // namespace

TEST_F(ConfigTest, DefaultsFollowProtocolDates) {
    const RunConfig c = parse(kMinimal);
    ASSERT_EQ(c.sources.size(), 1u);
    EXPECT_EQ(c.sources[0].path, dir.path() / "a.csv");
    EXPECT_EQ(c.sources[0].column, "High");
    EXPECT_EQ(c.lstm_split.train_end, Date(2015, 12, 31));
    EXPECT_EQ(*c.lstm_split.val_end, Date(2017, 12, 31));
    EXPECT_EQ(c.lstm_split.test_end, Date(2018, 12, 31));
    EXPECT_EQ(*c.arima_split.train_start, Date(2016, 1, 1));
    EXPECT_EQ(c.arima_split.split.train_end, Date(2017, 12, 31));
    EXPECT_FALSE(c.arima.d);
    EXPECT_FALSE(c.arima.order);
    EXPECT_EQ(c.arima.criterion, Criterion::bic);
    EXPECT_EQ(c.lstm.layers, 3);
    EXPECT_EQ(c.lstm.units, 100);
    EXPECT_EQ(c.lstm.dropout, 0.1);
    EXPECT_EQ(c.lstm.window, 60);
    EXPECT_EQ(c.seed, 42u);
}

TEST_F(ConfigTest, ParsesEverySection) {
    const RunConfig c = parse(R"(
      // comments are allowed
      {"seed": 9, "output_dir": "o",
       "data": {"column": "Close", "sources": [{"ticker": "AAA", "path": "a.csv", "column": "High"}]},
       "splits": {"lstm": {"train_end": "2012-01-01", "val_end": "2013-01-01", "test_end": "2014-01-01"},
                  "arima": {"train_start": null, "train_end": "2013-06-01", "test_end": "2014-01-01"}},
       "arima": {"d": 1, "order": [1, 1], "criterion": "aic", "refit_every": 20, "acf_lags": 15,
                 "extra_orders": [[1, 0, 0]]},
       "lstm": {"layers": 2, "units": 16, "dropout": 0.2, "window": 30, "epochs": 5, "batch_size": 8,
                "learning_rate": 0.01, "shuffle": false},
       "backtest": {"models": ["arima", "naive", "oracle"]}})");
    EXPECT_EQ(c.seed, 9u);
    EXPECT_EQ(c.sources[0].column, "High");
    EXPECT_FALSE(c.arima_split.train_start);
    EXPECT_EQ(*c.arima.d, 1);
    EXPECT_EQ(c.arima.order->second, 1);
    EXPECT_EQ(c.arima.criterion, Criterion::aic);
    EXPECT_EQ(*c.arima.refit_every, 20);
    EXPECT_EQ(c.arima.extra_orders.at(0), (ArimaOrder{1, 0, 0}));
    EXPECT_EQ(c.stack_config().units, 16);
    EXPECT_EQ(c.stack_config().seed, 9u);
    EXPECT_EQ(c.train_config().batch_size, 8);
    EXPECT_FALSE(c.train_config().shuffle);
    EXPECT_EQ(c.backtest_models.size(), 3u);
}

TEST_F(ConfigTest, Rejections) {
    EXPECT_THROW(parse("{"), ConfigError);
    EXPECT_THROW(parse(R"({"data": {"sources": []}})"), ConfigError);
    EXPECT_THROW(parse(R"({"data": {"sources": [{"ticker": "B", "path": "missing.csv"}]}})"), ConfigError);
    EXPECT_THROW(parse(R"({"typo": 1, "data": {"sources": [{"ticker": "AAA", "path": "a.csv"}]}})"), ConfigError);
    EXPECT_THROW(parse(R"({"data": {"sources": [{"ticker": "AAA", "path": "a.csv"}]}, "arima": {"d": 3}})"),
                 ConfigError);
    EXPECT_THROW(parse(R"({"data": {"sources": [{"ticker": "AAA", "path": "a.csv"}]}, "arima": {"p_max": 6}})"),
                 ConfigError);
    EXPECT_THROW(parse(R"({"data": {"sources": [{"ticker": "AAA", "path": "a.csv"}]},
                          "splits": {"lstm": {"train_end": "2019-01-01"}}})"),
                 ConfigError);
    EXPECT_THROW(parse(R"({"data": {"sources": [{"ticker": "AAA", "path": "a.csv"}]}, "lstm": {"dropout": 1.0}})"),
                 ConfigError);
    EXPECT_THROW(parse(R"({"data": {"sources": [{"ticker": "AAA", "path": "a.csv"}]},
                          "backtest": {"models": ["prophet"]}})"),
                 ConfigError);
}

TEST_F(ConfigTest, FingerprintTracksResolvedSettings) {
    const RunConfig a = parse(kMinimal);
    EXPECT_EQ(a.fingerprint().size(), 16u);
    EXPECT_EQ(a.fingerprint(), parse(kMinimal).fingerprint());
    RunConfig b = a;
    b.output_dir = "elsewhere";
    EXPECT_EQ(a.fingerprint(), b.fingerprint());
    b.seed = 43;
    EXPECT_NE(a.fingerprint(), b.fingerprint());
    RunConfig c = a;
    c.lstm.units = 99;
    EXPECT_NE(a.fingerprint(), c.fingerprint());
}

TEST(Fnv1a, KnownVectors) {
    EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
    EXPECT_EQ(fnv1a_hex("a"), "af63dc4c8601ec8c");
    EXPECT_EQ(fnv1a_hex("foobar"), "85944171f73967e8");
}

TEST(LoadConfig, ResolvesRelativeToFile) {
    TempDir dir("config");
    std::filesystem::create_directories(dir.path() / "data");
    dir.write("data/a.csv", "Date,High\n2018-01-02,1\n");
    const auto path = dir.write("run.json", R"({"data": {"sources": [{"ticker": "AAA", "path": "data/a.csv"}]}})");
    EXPECT_EQ(load_config(path).sources[0].path, dir.path() / "data" / "a.csv");
    EXPECT_THROW(load_config(dir.path() / "nope.json"), ConfigError);
}
