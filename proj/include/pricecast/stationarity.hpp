#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace pricecast {

/// Applies first differencing `d` times; output length is input length - d.
std::vector<double> difference(std::span<const double> values, int d);

/// Significance levels reported by the ADF test, ordered 1%, 5%, 10%.
enum class Significance { pct1 = 0, pct5 = 1, pct10 = 2 };

/// Asymptotic Dickey-Fuller critical values for the constant-only regression.
inline constexpr std::array<double, 3> kAdfCriticalValues{-3.43, -2.86, -2.57};

struct AdfResult {
    double statistic = 0.0;  // t-ratio of the lagged-level coefficient
    int lags_used = 0;
    std::size_t n_obs = 0;   // observations in the final regression
    std::array<double, 3> critical_values = kAdfCriticalValues;
    std::array<bool, 3> reject_at{};

    [[nodiscard]] bool rejects(Significance level) const {
        return reject_at[static_cast<std::size_t>(level)];
    }
    /// Qualitative p-value bracket, e.g. "< 0.01".
    [[nodiscard]] std::string p_value_bracket() const;
};

/// Augmented Dickey-Fuller test with constant and no trend:
///   dy_t = a + g*y_{t-1} + sum_j b_j*dy_{t-j} + e_t
/// The augmentation order is chosen by AIC over 0..max_lag on a common
/// sample, then the chosen regression is re-estimated on all usable rows.
/// Default max_lag = floor(12 * (n/100)^(1/4)).
AdfResult adf_test(std::span<const double> values, std::optional<int> max_lag = std::nullopt);

/// Keyed text report of an ADF result.
void write_adf_report(std::ostream& out, const AdfResult& result, const std::string& label);

struct CorrelogramResult {
    std::vector<double> coefficients;  // index = lag, starting at 0
    double confidence_band = 0.0;      // 1.96 / sqrt(n)
    std::size_t n = 0;

    [[nodiscard]] std::size_t max_lag() const { return coefficients.empty() ? 0 : coefficients.size() - 1; }
    /// Fraction of lags 1..max_lag whose coefficient lies within the band.
    [[nodiscard]] double fraction_inside_band() const;
};

/// Sample autocorrelation with the biased (1/n) autocovariance estimator.
CorrelogramResult acf(std::span<const double> values, int max_lag);

/// Sample partial autocorrelation by Durbin-Levinson on the sample ACF.
/// Lag 0 is reported as 1.
CorrelogramResult pacf(std::span<const double> values, int max_lag);

/// Durbin-Levinson: AR coefficients of order `order` implied by an
/// autocorrelation sequence (rho[0] == 1). Used for Yule-Walker starts.
std::vector<double> durbin_levinson(std::span<const double> rho, int order);

/// CSV rows "lag,coefficient,band".
void write_correlogram_csv(std::ostream& out, const CorrelogramResult& result);

}  // namespace pricecast
