#include "pricecast/arima.hpp"
#include "pricecast/errors.hpp"
#include "oracles.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

using namespace pricecast;
using namespace testing_support;

namespace {

ArimaModel make_model(ArimaOrder order, std::vector<double> phi, std::vector<double> theta, double c) {
    ArimaModel m;
    m.order = order;
    m.phi = std::move(phi);
    m.theta = std::move(theta);
    m.intercept = c;
    return m;
}

double mean_of(const std::vector<double>& x) {
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

}  // namespace

TEST(ArimaOrder, Validation) {
    EXPECT_NO_THROW((ArimaOrder{1, 2, 1}.validate()));
    EXPECT_THROW((ArimaOrder{1, 3, 1}.validate()), ConfigError);
    EXPECT_THROW((ArimaOrder{-1, 0, 0}.validate()), ConfigError);
    EXPECT_EQ((ArimaOrder{1, 0, 1}.str()), "(1,0,1)");
}

TEST(CssResiduals, WhiteNoiseModelDemeans) {
    const std::vector<double> x{1, 4, 2, 7};
    const double mu = mean_of(x);
    const auto r = css_residuals(make_model({0, 0, 0}, {}, {}, mu), x);
    ASSERT_EQ(r.size(), 4u);
    for (std::size_t t = 0; t < x.size(); ++t) EXPECT_NEAR(r[t], x[t] - mu, 1e-15);
}

TEST(CssResiduals, ZeroPhiShiftsByOne) {
    const std::vector<double> x{1, 4, 2, 7};
    const double mu = mean_of(x);
    const auto r = css_residuals(make_model({1, 0, 0}, {0.0}, {}, mu), x);
    ASSERT_EQ(r.size(), 3u);
    for (std::size_t t = 0; t < r.size(); ++t) EXPECT_NEAR(r[t], x[t + 1] - mu, 1e-15);
}

TEST(CssResiduals, HandUnrolledAr1) {
    // Demeaned [1,2,3] = [-1,0,1]; AR(1) phi=0.5 without intercept.
    const std::vector<double> x{-1, 0, 1};
    const auto r = css_residuals(make_model({1, 0, 0}, {0.5}, {}, 0.0), x);
    ASSERT_EQ(r.size(), 2u);
    EXPECT_DOUBLE_EQ(r[0], 0.0 - 0.5 * -1.0);
    EXPECT_DOUBLE_EQ(r[1], 1.0 - 0.5 * 0.0);
}

TEST(CssResiduals, HandUnrolledArma11) {
    const std::vector<double> x{2, 1, 3, 0};
    const auto r = css_residuals(make_model({1, 0, 1}, {0.5}, {0.4}, 0.1), x);
    ASSERT_EQ(r.size(), 3u);
    const double e1 = 1 - 0.1 - 0.5 * 2;
    const double e2 = 3 - 0.1 - 0.5 * 1 + 0.4 * e1;
    const double e3 = 0 - 0.1 - 0.5 * 3 + 0.4 * e2;
    EXPECT_DOUBLE_EQ(r[0], e1);
    EXPECT_DOUBLE_EQ(r[1], e2);
    EXPECT_DOUBLE_EQ(r[2], e3);
}

TEST(Fit, WhiteNoiseClosedForm) {
    const auto x = simulate_arma(500, {}, {}, 3.0, 5);
    const ArimaModel m = fit(x, {0, 0, 0});
    const double mu = mean_of(x);
    double var = 0;
    for (double v : x) var += (v - mu) * (v - mu);
    var /= static_cast<double>(x.size());
    EXPECT_NEAR(m.intercept, mu, 1e-6);
    EXPECT_NEAR(m.sigma2, var, 1e-6 * var);
    EXPECT_EQ(m.n_obs, x.size());
    EXPECT_NEAR(m.loglik, -0.5 * 500 * (std::log(2 * M_PI * m.sigma2) + 1.0), 1e-9);
}

TEST(Fit, RecoversAr1) {
    const auto x = simulate_arma(2000, {0.7}, {}, 0.0, 77);
    const ArimaModel m = fit(x, {1, 0, 0});
    EXPECT_GE(m.phi[0], 0.62);
    EXPECT_LE(m.phi[0], 0.78);
    EXPECT_TRUE(m.stationary);
    ASSERT_TRUE(m.stderrs);
    // Asymptotic stderr of phi is sqrt((1 - phi^2) / n).
    EXPECT_NEAR((*m.stderrs)[1], std::sqrt((1 - 0.49) / 2000.0), 0.004);
}

TEST(Fit, RecoversWellIdentifiedArma11) {
    const auto x = simulate_arma(4000, {0.5}, {-0.4}, 1.0, 78);
    const ArimaModel m = fit(x, {1, 0, 1});
    EXPECT_NEAR(m.phi[0], 0.5, 0.1);
    EXPECT_NEAR(m.theta[0], -0.4, 0.1);
    EXPECT_NEAR(m.process_mean(), 2.0, 0.2);
    EXPECT_TRUE(m.invertible);
}

TEST(Fit, Arma11ReachesGridMinimum) {
    // Near-cancelling roots give a flat ridge; the fit must still sit at the CSS minimum.
    for (std::uint64_t seed : {78u, 79u, 80u}) {
        const auto x = simulate_arma(4000, {0.5}, {0.4}, 1.0, seed);
        const ArimaModel m = fit(x, {1, 0, 1});
        const auto ssr = [&](double p, double q, double c) {
            ArimaModel g = m;
            g.phi = {p};
            g.theta = {q};
            g.intercept = c;
            double s = 0;
            for (double e : css_residuals(g, x)) s += e * e;
            return s;
        };
        const double fitted = ssr(m.phi[0], m.theta[0], m.intercept);
        const double mu = m.process_mean();
        double best = INFINITY;
        for (double p = -0.5; p <= 0.95; p += 0.01) {
            for (double q = -0.5; q <= 0.95; q += 0.01) best = std::min(best, ssr(p, q, mu * (1 - p)));
        }
        EXPECT_LE(fitted, best + 1e-6 * best) << seed;
    }
}

TEST(Fit, DifferencedRandomWalkWithDrift) {
    auto x = simulate_arma(1000, {}, {}, 0.3, 79);
    std::partial_sum(x.begin(), x.end(), x.begin());
    const ArimaModel m = fit(x, {0, 1, 0});
    EXPECT_NEAR(m.intercept, 0.3, 0.1);
    EXPECT_EQ(m.n_obs, 999u);
}

TEST(Fit, ParametricBootstrapRecovery) {
    const auto data = simulate_arma(4000, {0.6}, {0.3}, 0.5, 80);
    const ArimaModel ref = fit(data, {1, 0, 1});
    int inside = 0;
    const int reps = 20;
    for (int r = 0; r < reps; ++r) {
        const auto x = simulate_arma(4000, ref.phi, ref.theta, ref.intercept, 900 + r, std::sqrt(ref.sigma2));
        const ArimaModel m = fit(x, {1, 0, 1});
        ASSERT_TRUE(m.stderrs);
        const bool ok = std::abs(m.phi[0] - ref.phi[0]) <= 3 * (*m.stderrs)[1] &&
                        std::abs(m.theta[0] - ref.theta[0]) <= 3 * (*m.stderrs)[2];
        inside += ok;
    }
    EXPECT_GE(inside, 18);
}

TEST(Fit, InsufficientData) {
    const auto x = white_noise(25, 1);
    EXPECT_THROW(fit(x, {2, 0, 1}), DataError);
    EXPECT_NO_THROW(fit(x, {1, 0, 0}));
}

TEST(Fit, DeterministicForSeed) {
    const auto x = simulate_arma(600, {0.4}, {0.2}, 0.0, 81);
    FitOptions o;
    o.seed = 12;
    const ArimaModel a = fit(x, {2, 0, 2}, o);
    const ArimaModel b = fit(x, {2, 0, 2}, o);
    EXPECT_EQ(model_to_text(a), model_to_text(b));
}

TEST(InformationCriteria, PlugIn) {
    EXPECT_DOUBLE_EQ(aic(0.0, 3), 6.0);
    EXPECT_DOUBLE_EQ(aic(-10.0, 4) - aic(-10.0, 3), 2.0);
    EXPECT_NEAR(bic(0.0, 3, std::exp(2.0)), 6.0, 1e-12);
    for (int k = 1; k < 6; ++k) {
        EXPECT_GT(aic(-5.0, k + 1), aic(-5.0, k));
        EXPECT_GT(bic(-5.0, k + 1, 100), bic(-5.0, k, 100));
        EXPECT_GT(bic(-5.0, k, 8.0), aic(-5.0, k));
    }
    ArimaModel m = make_model({1, 0, 0}, {0.1}, {}, 0.0);
    m.loglik = -12.5;
    m.n_obs = 50;
    EXPECT_DOUBLE_EQ(aic(m), 2 * 3 + 25.0);
    EXPECT_DOUBLE_EQ(bic(m), 3 * std::log(50.0) + 25.0);
    EXPECT_GT(bic(m), aic(m));
}

TEST(InformationCriteria, WhiteNoisePrefersSmallModel) {
    int wins = 0;
    for (int r = 0; r < 50; ++r) {
        const auto x = white_noise(500, 500 + r);
        wins += aic(fit(x, {0, 0, 0})) < aic(fit(x, {3, 0, 0}));
    }
    EXPECT_GE(wins, 40);
}

TEST(InformationCriteria, ParseAndPrint) {
    EXPECT_EQ(parse_criterion("aic"), Criterion::aic);
    EXPECT_EQ(parse_criterion("BIC"), Criterion::bic);
    EXPECT_EQ(to_string(Criterion::bic), "bic");
    EXPECT_THROW(parse_criterion("hqic"), ConfigError);
}

TEST(GridSearch, ShapeAndArgmin) {
    const auto x = simulate_arma(1500, {0.6}, {}, 0.0, 90);
    const auto g = grid_search(x, 2, 3, 0, Criterion::bic);
    EXPECT_EQ(g.aic_matrix.size(), 12u);
    EXPECT_EQ(g.bic_matrix.size(), 12u);
    double best = INFINITY;
    for (const auto& c : g.bic_matrix) {
        if (c) best = std::min(best, *c);
    }
    const auto& chosen = g.cell(Criterion::bic, g.best_order.p, g.best_order.q);
    ASSERT_TRUE(chosen);
    EXPECT_DOUBLE_EQ(*chosen, best);
    EXPECT_EQ(g.best_for(Criterion::bic), g.best_order);
    std::ostringstream csv;
    write_grid_csv(csv, g, Criterion::bic);
    const std::string s = csv.str();
    EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 13);
}

TEST(GridSearch, SelectsAr1AndWhiteNoise) {
    int ar1 = 0, wn = 0;
    const int reps = 20;
    for (int r = 0; r < reps; ++r) {
        const auto x = simulate_arma(3000, {0.7}, {}, 0.0, 700 + r);
        ar1 += grid_search(x, 2, 2, 0, Criterion::bic).best_order == ArimaOrder{1, 0, 0};
        const auto y = white_noise(1000, 800 + r);
        wn += grid_search(y, 2, 2, 0, Criterion::bic).best_order == ArimaOrder{0, 0, 0};
    }
    EXPECT_GE(ar1, 16);
    EXPECT_GE(wn, 16);
}

TEST(GridSearch, BoundsChecked) {
    const auto x = white_noise(500, 1);
    EXPECT_THROW(grid_search(x, 6, 0, 0, Criterion::bic), ConfigError);
    EXPECT_THROW(grid_search(x, 1, -1, 0, Criterion::bic), ConfigError);
}

TEST(TTest, PlugIn) {
    ArimaModel m = make_model({1, 0, 0}, {1.0}, {}, 0.0);
    m.stderrs = std::vector<double>{0.3, 0.5};
    const auto t = t_test(m);
    ASSERT_EQ(t.size(), 2u);
    EXPECT_EQ(t[0].name, "intercept");
    EXPECT_EQ(t[0].t_stat, 0.0);
    EXPECT_FALSE(t[0].significant);
    EXPECT_EQ(t[1].name, "phi1");
    EXPECT_DOUBLE_EQ(t[1].t_stat, 2.0);
    EXPECT_TRUE(t[1].significant);
    m.stderrs.reset();
    EXPECT_THROW(t_test(m), NumericError);
}

TEST(TTest, Ar1CoefficientSignificant) {
    int sig = 0;
    for (int r = 0; r < 20; ++r) {
        const auto m = fit(simulate_arma(2000, {0.7}, {}, 0.0, 100 + r), {1, 0, 0});
        sig += t_test(m)[1].significant;
    }
    EXPECT_EQ(sig, 20);
}

TEST(ResidualDiagnostics, WellSpecifiedPassesMisspecifiedFails) {
    int pass = 0, fail = 0;
    for (int r = 0; r < 20; ++r) {
        const auto x = simulate_arma(1000, {0.9}, {}, 0.0, 200 + r);
        const auto good = residual_diagnostics(fit(x, {1, 0, 0}), x, 20);
        const auto bad = residual_diagnostics(fit(x, {0, 0, 0}), x, 20);
        EXPECT_EQ(good.correlogram.coefficients[0], 1.0);
        pass += good.pass;
        fail += !bad.pass;
    }
    EXPECT_GE(pass, 17);
    EXPECT_EQ(fail, 20);
}

TEST(Forecast, ConstantAndRandomWalk) {
    const std::vector<double> h{3, 1, 4, 1, 5};
    EXPECT_DOUBLE_EQ(forecast_one_step(make_model({0, 0, 0}, {}, {}, 2.5), h), 2.5);
    EXPECT_DOUBLE_EQ(forecast_one_step(make_model({0, 1, 0}, {}, {}, 0.0), h), 5.0);
    EXPECT_DOUBLE_EQ(forecast_one_step(make_model({1, 0, 0}, {0.5}, {}, 1.0), h), 1.0 + 0.5 * 5);
    EXPECT_THROW(forecast_one_step(make_model({2, 1, 0}, {0.1, 0.1}, {}, 0.0), std::vector<double>{1, 2}),
                 DataError);
}

TEST(Forecast, MatchesBruteForceRecursion) {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> order(0, 2);
    std::uniform_real_distribution<double> coef(-0.6, 0.6);
    for (int trial = 0; trial < 200; ++trial) {
        const ArimaOrder o{order(rng), order(rng), order(rng)};
        std::vector<double> phi(static_cast<std::size_t>(o.p)), theta(static_cast<std::size_t>(o.q));
        for (auto& v : phi) v = coef(rng);
        for (auto& v : theta) v = coef(rng);
        const ArimaModel m = make_model(o, phi, theta, coef(rng));
        const auto history = white_noise(static_cast<std::size_t>(o.p + o.d) + rng() % 30, rng());
        EXPECT_NEAR(forecast_one_step(m, history), oracles::brute_force_forecast(m.order, m.phi, m.theta, m.intercept, history), 1e-8) << o.str();
    }
}

TEST(RollingForecast, LengthAndPersistence) {
    const auto train = random_walk(100, 1);
    const auto test = random_walk(30, 2);
    const auto naive = rolling_forecast(make_model({0, 1, 0}, {}, {}, 0.0), train, test);
    ASSERT_EQ(naive.size(), test.size());
    EXPECT_DOUBLE_EQ(naive[0], train.back());
    for (std::size_t k = 1; k < test.size(); ++k) EXPECT_DOUBLE_EQ(naive[k], test[k - 1]);
}

TEST(RollingForecast, Ar1ErrorNearInnovationScale) {
    double ratio_sum = 0;
    const int reps = 20;
    for (int r = 0; r < reps; ++r) {
        const auto x = simulate_arma(1500, {0.7}, {}, 0.0, 300 + r);
        const std::vector<double> train(x.begin(), x.begin() + 1000), test(x.begin() + 1000, x.end());
        const ArimaModel m = fit(train, {1, 0, 0});
        const auto f = rolling_forecast(m, train, test);
        double sse = 0;
        for (std::size_t k = 0; k < test.size(); ++k) sse += (f[k] - test[k]) * (f[k] - test[k]);
        ratio_sum += std::sqrt(sse / static_cast<double>(test.size())) / std::sqrt(m.sigma2);
    }
    EXPECT_NEAR(ratio_sum / reps, 1.0, 0.1);
}

TEST(RollingForecast, RefitEvery) {
    const auto x = simulate_arma(700, {0.5}, {}, 0.0, 5);
    const std::vector<double> train(x.begin(), x.begin() + 600), test(x.begin() + 600, x.end());
    const ArimaModel m = fit(train, {1, 0, 0});
    const auto fixed_model = rolling_forecast(m, train, test);
    const auto refit = rolling_forecast(m, train, test, 25);
    ASSERT_EQ(refit.size(), test.size());
    for (std::size_t k = 0; k < 25; ++k) EXPECT_DOUBLE_EQ(refit[k], fixed_model[k]);
    EXPECT_NE(refit[60], fixed_model[60]);
    EXPECT_THROW(rolling_forecast(m, train, test, 0), ConfigError);
}

TEST(Checkpoint, RoundTrip) {
    const auto x = simulate_arma(800, {0.5}, {0.3}, 1.0, 6);
    const ArimaModel m = fit(x, {1, 0, 1});
    std::string fp;
    const ArimaModel back = model_from_text(model_to_text(m, "abc123"), &fp);
    EXPECT_EQ(fp, "abc123");
    EXPECT_EQ(back.order, m.order);
    EXPECT_EQ(back.phi, m.phi);
    EXPECT_EQ(back.theta, m.theta);
    EXPECT_EQ(back.intercept, m.intercept);
    EXPECT_EQ(back.sigma2, m.sigma2);
    EXPECT_EQ(model_to_text(back, "abc123"), model_to_text(m, "abc123"));
    EXPECT_THROW(model_from_text("{\"kind\": \"lstm\"}"), DataError);
    EXPECT_THROW(model_from_text("not json"), DataError);
}

TEST(Checkpoint, ExplicitArma11HasTwoCoefficientsAndIntercept) {
    const ArimaModel m = fit(simulate_arma(800, {0.5}, {0.3}, 1.0, 7), {1, 0, 1});
    EXPECT_EQ(m.phi.size() + m.theta.size(), 2u);
    ASSERT_TRUE(m.stderrs);
    EXPECT_EQ(m.stderrs->size(), 3u);
}
