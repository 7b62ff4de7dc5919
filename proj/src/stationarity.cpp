#include "pricecast/stationarity.hpp"

#include "pricecast/errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>

namespace pricecast {

std::vector<double> difference(std::span<const double> values, int d) {
    if (d < 0) throw DataError("differencing order must be nonnegative");
    if (values.size() <= static_cast<std::size_t>(d)) {
        throw DataError("sequence too short to difference " + std::to_string(d) + " times");
    }
    std::vector<double> out(values.begin(), values.end());
    for (int pass = 0; pass < d; ++pass) {
        for (std::size_t i = 0; i + 1 < out.size(); ++i) out[i] = out[i + 1] - out[i];
        out.pop_back();
    }
    return out;
}

std::string AdfResult::p_value_bracket() const {
    if (reject_at[0]) return "< 0.01";
    if (reject_at[1]) return "0.01 - 0.05";
    if (reject_at[2]) return "0.05 - 0.10";
    return "> 0.10";
}

namespace {

struct OlsFit {
    double ssr = 0.0;
    double gamma = 0.0;
    double gamma_se = 0.0;
    std::size_t rows = 0;
    std::size_t cols = 0;
};

// Builds and solves the ADF regression on rows t = first..n-1 of the level
// series (dy indexed so dy[t-1] = y[t] - y[t-1]).
OlsFit adf_regression(std::span<const double> y, const std::vector<double>& dy, int lags,
                      std::size_t first) {
    const std::size_t n = y.size();
    const std::size_t rows = n - first;
    const std::size_t cols = 2 + static_cast<std::size_t>(lags);
    Eigen::MatrixXd x(rows, cols);
    Eigen::VectorXd target(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t t = first + r;
        target(r) = dy[t - 1];
        x(r, 0) = 1.0;
        x(r, 1) = y[t - 1];
        for (int j = 1; j <= lags; ++j) x(r, 1 + j) = dy[t - 1 - j];
    }
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    if (qr.rank() < static_cast<Eigen::Index>(cols)) {
        throw NumericError("ADF regression matrix is singular");
    }
    if (rows <= cols) throw NumericError("ADF regression has no residual degrees of freedom");
    const Eigen::VectorXd beta = qr.solve(target);
    const Eigen::VectorXd resid = target - x * beta;
    OlsFit fit;
    fit.rows = rows;
    fit.cols = cols;
    fit.ssr = resid.squaredNorm();
    fit.gamma = beta(1);
    const double s2 = fit.ssr / static_cast<double>(rows - cols);
    const Eigen::MatrixXd xtx = x.transpose() * x;
    const Eigen::VectorXd unit = Eigen::VectorXd::Unit(static_cast<Eigen::Index>(cols), 1);
    fit.gamma_se = std::sqrt(s2 * xtx.ldlt().solve(unit)(1));
    return fit;
}

}  // namespace

AdfResult adf_test(std::span<const double> values, std::optional<int> max_lag) {
    const std::size_t n = values.size();
    if (n < 20) throw DataError("ADF test needs at least 20 observations");
    int lag_cap = max_lag.value_or(
        static_cast<int>(std::floor(12.0 * std::pow(static_cast<double>(n) / 100.0, 0.25))));
    if (lag_cap < 0) throw DataError("ADF max_lag must be nonnegative");
    // Keep enough rows for the widest regression.
    lag_cap = std::min<int>(lag_cap, static_cast<int>(n) / 2 - 3);
    lag_cap = std::max(lag_cap, 0);

    const std::vector<double> dy = difference(values, 1);

    // Lag selection on a common sample starting at t = lag_cap + 1.
    int best_lag = 0;
    double best_aic = std::numeric_limits<double>::infinity();
    const std::size_t common_first = static_cast<std::size_t>(lag_cap) + 1;
    for (int k = 0; k <= lag_cap; ++k) {
        const OlsFit fit = adf_regression(values, dy, k, common_first);
        const double rows = static_cast<double>(fit.rows);
        const double aic = rows * std::log(fit.ssr / rows) + 2.0 * static_cast<double>(fit.cols);
        if (aic < best_aic) {
            best_aic = aic;
            best_lag = k;
        }
    }

    const OlsFit fit = adf_regression(values, dy, best_lag, static_cast<std::size_t>(best_lag) + 1);
    AdfResult result;
    result.statistic = fit.gamma / fit.gamma_se;
    result.lags_used = best_lag;
    result.n_obs = fit.rows;
    for (std::size_t i = 0; i < 3; ++i) {
        result.reject_at[i] = result.statistic < result.critical_values[i];
    }
    return result;
}

void write_adf_report(std::ostream& out, const AdfResult& result, const std::string& label) {
    out << std::setprecision(10);
    out << "series = " << label << '\n';
    out << "test = augmented Dickey-Fuller (constant, no trend)\n";
    out << "statistic = " << result.statistic << '\n';
    out << "lags_used = " << result.lags_used << '\n';
    out << "n_obs = " << result.n_obs << '\n';
    out << "critical_value_1pct = " << result.critical_values[0] << '\n';
    out << "critical_value_5pct = " << result.critical_values[1] << '\n';
    out << "critical_value_10pct = " << result.critical_values[2] << '\n';
    out << "reject_1pct = " << (result.reject_at[0] ? "true" : "false") << '\n';
    out << "reject_5pct = " << (result.reject_at[1] ? "true" : "false") << '\n';
    out << "reject_10pct = " << (result.reject_at[2] ? "true" : "false") << '\n';
    out << "p_value = " << result.p_value_bracket() << '\n';
}

double CorrelogramResult::fraction_inside_band() const {
    if (coefficients.size() < 2) return 1.0;
    std::size_t inside = 0;
    for (std::size_t k = 1; k < coefficients.size(); ++k) {
        if (std::abs(coefficients[k]) <= confidence_band) ++inside;
    }
    return static_cast<double>(inside) / static_cast<double>(coefficients.size() - 1);
}

CorrelogramResult acf(std::span<const double> values, int max_lag) {
    if (max_lag < 1) throw DataError("max_lag must be positive");
    const std::size_t n = values.size();
    if (n <= static_cast<std::size_t>(max_lag)) throw DataError("sequence shorter than max_lag + 1");
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
    double denom = 0.0;
    for (double v : values) denom += (v - mean) * (v - mean);
    if (denom == 0.0) throw DataError("autocorrelation of a constant sequence is undefined");

    CorrelogramResult result;
    result.n = n;
    result.confidence_band = 1.96 / std::sqrt(static_cast<double>(n));
    result.coefficients.resize(static_cast<std::size_t>(max_lag) + 1);
    result.coefficients[0] = 1.0;
    for (int k = 1; k <= max_lag; ++k) {
        double num = 0.0;
        for (std::size_t t = 0; t + static_cast<std::size_t>(k) < n; ++t) {
            num += (values[t] - mean) * (values[t + static_cast<std::size_t>(k)] - mean);
        }
        result.coefficients[static_cast<std::size_t>(k)] = num / denom;
    }
    return result;
}

namespace {

// Runs the recursion up to `order`; partial[k] receives the order-k
// reflection coefficient when requested.
std::vector<double> levinson(std::span<const double> rho, int order, std::vector<double>* partial) {
    std::vector<double> phi;
    double v = 1.0;
    for (int k = 1; k <= order; ++k) {
        const auto uk = static_cast<std::size_t>(k);
        double num = rho[uk];
        for (std::size_t j = 1; j < uk; ++j) num -= phi[j - 1] * rho[uk - j];
        const double kk = v > 0.0 ? num / v : 0.0;
        std::vector<double> next(uk);
        for (std::size_t j = 1; j < uk; ++j) next[j - 1] = phi[j - 1] - kk * phi[uk - j - 1];
        next[uk - 1] = kk;
        phi = std::move(next);
        v *= (1.0 - kk * kk);
        if (partial) (*partial)[uk] = kk;
    }
    return phi;
}

}  // namespace

std::vector<double> durbin_levinson(std::span<const double> rho, int order) {
    if (order < 0 || rho.size() <= static_cast<std::size_t>(order)) {
        throw DataError("durbin_levinson: not enough autocorrelations");
    }
    return levinson(rho, order, nullptr);
}

CorrelogramResult pacf(std::span<const double> values, int max_lag) {
    const CorrelogramResult auto_corr = acf(values, max_lag);
    CorrelogramResult result;
    result.n = auto_corr.n;
    result.confidence_band = auto_corr.confidence_band;
    result.coefficients.assign(auto_corr.coefficients.size(), 0.0);
    result.coefficients[0] = 1.0;
    levinson(auto_corr.coefficients, max_lag, &result.coefficients);
    return result;
}

void write_correlogram_csv(std::ostream& out, const CorrelogramResult& result) {
    out << "lag,coefficient,band\n" << std::setprecision(12);
    for (std::size_t k = 0; k < result.coefficients.size(); ++k) {
        out << k << ',' << result.coefficients[k] << ',' << result.confidence_band << '\n';
    }
}

}  // namespace pricecast
