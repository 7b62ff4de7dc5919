#pragma once

#include "pricecast/simplex.hpp"
#include "pricecast/stationarity.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pricecast {

/// ARIMA(p, d, q). Differencing is capped at 2.
struct ArimaOrder {
    int p = 0;
    int d = 0;
    int q = 0;

    void validate() const;
    [[nodiscard]] std::string str() const;
    bool operator==(const ArimaOrder&) const = default;
};

/// Fitted model on the d-times differenced series x_t:
///   x_t = intercept + sum_i phi_i x_{t-i} + a_t - sum_j theta_j a_{t-j}
/// MA terms enter with a minus sign.
struct ArimaModel {
    ArimaOrder order;
    std::vector<double> phi;
    std::vector<double> theta;
    double intercept = 0.0;
    double sigma2 = 1.0;          // SSR / (n_obs - p)
    std::size_t n_obs = 0;        // observations after differencing
    double loglik = 0.0;          // -n_obs/2 (ln(2 pi sigma2) + 1)
    /// Standard errors ordered as [intercept, phi..., theta...]; absent when
    /// the CSS Hessian is not positive definite.
    std::optional<std::vector<double>> stderrs;
    bool converged = true;
    bool stationary = true;       // AR roots outside the unit circle
    bool invertible = true;       // MA roots outside the unit circle

    /// Mean of x_t implied by the AR part (intercept / (1 - sum phi)).
    [[nodiscard]] double process_mean() const;
    /// Parameter count used by the information criteria: p + q + 2.
    [[nodiscard]] int parameter_count() const { return order.p + order.q + 2; }
};

/// One-step CSS residuals of `values` after d-order differencing. Residuals
/// start at the (p+1)-th differenced point; pre-sample shocks are zero.
std::vector<double> css_residuals(const ArimaModel& model, std::span<const double> values);

struct FitOptions {
    SimplexOptions simplex{};
    std::uint64_t seed = 0;  // perturbation of the third simplex start
};

/// Conditional-sum-of-squares fit by Nelder-Mead from three starts: zeros,
/// the Yule-Walker AR solution, and a seeded perturbation of it. Throws
/// DataError for insufficient data and NumericError if no start converges.
ArimaModel fit(std::span<const double> values, const ArimaOrder& order, const FitOptions& options = {});

/// 2k - 2 loglik.
double aic(double loglik, int k);
/// k ln(n) - 2 loglik.
double bic(double loglik, int k, double n);
double aic(const ArimaModel& model);
double bic(const ArimaModel& model);

enum class Criterion { aic, bic };
std::string to_string(Criterion c);
Criterion parse_criterion(const std::string& text);

struct GridSearchResult {
    int p_max = 0;
    int q_max = 0;
    int d = 0;
    Criterion criterion = Criterion::bic;
    /// Row-major (p_max+1) x (q_max+1); empty optional marks a failed cell.
    std::vector<std::optional<double>> aic_matrix;
    std::vector<std::optional<double>> bic_matrix;
    std::vector<std::string> failures;  // "p,q: reason"
    ArimaOrder best_order;

    [[nodiscard]] const std::optional<double>& cell(Criterion c, int p, int q) const;
    /// Best order under either criterion using the same tie-break rules.
    [[nodiscard]] ArimaOrder best_for(Criterion c) const;
};

/// Fits every (p, q) with p <= p_max, q <= q_max (both at most 5).
/// Ties within 1e-9 prefer smaller p + q, then smaller p.
GridSearchResult grid_search(std::span<const double> values, int p_max, int q_max, int d,
                             Criterion criterion, const FitOptions& options = {});

void write_grid_csv(std::ostream& out, const GridSearchResult& grid, Criterion c);

struct CoefficientTest {
    std::string name;  // "intercept", "phi1", "theta2", ...
    double estimate = 0.0;
    double stderr_ = 0.0;
    double t_stat = 0.0;
    bool significant = false;  // |t| > 1.96
};

/// Per-coefficient t-ratios. Throws NumericError if standard errors are missing.
std::vector<CoefficientTest> t_test(const ArimaModel& model);

struct ResidualDiagnostics {
    CorrelogramResult correlogram;
    bool pass = false;  // >= 90% of lags 1..max_lag inside the band
};

ResidualDiagnostics residual_diagnostics(const ArimaModel& model, std::span<const double> values,
                                         int max_lag);

/// Conditional expectation of the next level given `history` (levels).
double forecast_one_step(const ArimaModel& model, std::span<const double> history);

/// One-step forecasts for every test point, each conditioned on all actuals
/// before it. With refit_every = k the model is re-estimated on the growing
/// history every k steps.
std::vector<double> rolling_forecast(const ArimaModel& model, std::span<const double> train,
                                     std::span<const double> test,
                                     std::optional<int> refit_every = std::nullopt,
                                     const FitOptions& options = {});

/// Keyed text (JSON) checkpoint.
std::string model_to_text(const ArimaModel& model, const std::string& fingerprint = {});
ArimaModel model_from_text(const std::string& text, std::string* fingerprint = nullptr);

}  // namespace pricecast
