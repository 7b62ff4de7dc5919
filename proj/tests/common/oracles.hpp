#pragma once

#include "pricecast/lstm.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace oracles {

/// One-step ARIMA forecast by plain recursion: difference by hand, rebuild
/// shocks from index p with zero pre-sample shocks, forecast, integrate.
/// MA terms enter with a minus sign.
inline double brute_force_forecast(int p, int d, int q, const std::vector<double>& phi,
                                   const std::vector<double>& theta, double intercept,
                                   const std::vector<double>& history) {
    std::vector<std::vector<double>> levels{history};
    for (int k = 0; k < d; ++k) {
        const auto& prev = levels.back();
        std::vector<double> next;
        for (std::size_t t = 1; t < prev.size(); ++t) next.push_back(prev[t] - prev[t - 1]);
        levels.push_back(next);
    }
    const std::vector<double>& w = levels.back();
    const int n = static_cast<int>(w.size());
    std::vector<double> e(static_cast<std::size_t>(n), 0.0);
    auto shock = [&](int t) { return t < p ? 0.0 : e[static_cast<std::size_t>(t)]; };
    for (int t = p; t < n; ++t) {
        double fitted = intercept;
        for (int i = 1; i <= p; ++i) fitted += phi[i - 1] * w[t - i];
        for (int j = 1; j <= q; ++j) fitted -= theta[j - 1] * shock(t - j);
        e[static_cast<std::size_t>(t)] = w[t] - fitted;
    }
    double f = intercept;
    for (int i = 1; i <= p; ++i) f += phi[i - 1] * w[n - i];
    for (int j = 1; j <= q; ++j) f -= theta[j - 1] * shock(n - j);
    for (int k = d - 1; k >= 0; --k) f += levels[k].back();
    return f;
}

template <class Order>
double brute_force_forecast(const Order& o, const std::vector<double>& phi, const std::vector<double>& theta,
                            double intercept, const std::vector<double>& history) {
    return brute_force_forecast(o.p, o.d, o.q, phi, theta, intercept, history);
}

/// Largest relative error between backprop gradients and central finite
/// differences of 0.5 * sum (prediction - target)^2, dropout masks held fixed
/// by replaying the same RNG seed.
inline double gradient_check(const pricecast::lstm::LstmStack& stack, const Eigen::MatrixXd& windows,
                             const Eigen::VectorXd& targets, std::uint64_t dropout_seed, double eps = 1e-5) {
    using namespace pricecast::lstm;
    const auto loss = [&](const LstmStack& s) {
        std::mt19937_64 rng(dropout_seed);
        const Eigen::VectorXd e = stack_forward(s, windows, Mode::train, rng).predictions - targets;
        return 0.5 * e.squaredNorm();
    };
    std::mt19937_64 rng(dropout_seed);
    const auto fwd = stack_forward(stack, windows, Mode::train, rng);
    Parameters grads = backward(stack, fwd.cache, fwd.predictions - targets);

    LstmStack probe = stack;
    auto params = probe.params.tensors();
    auto analytic = grads.tensors();
    double worst = 0.0;
    for (std::size_t k = 0; k < params.size(); ++k) {
        for (Eigen::Index j = 0; j < params[k].size(); ++j) {
            const double keep = params[k](j);
            params[k](j) = keep + eps;
            const double up = loss(probe);
            params[k](j) = keep - eps;
            const double down = loss(probe);
            params[k](j) = keep;
            const double numeric = (up - down) / (2 * eps);
            const double a = analytic[k](j);
            worst = std::max(worst, std::abs(a - numeric) / std::max(1e-8, std::abs(a) + std::abs(numeric)));
        }
    }
    return worst;
}

}  // namespace oracles
