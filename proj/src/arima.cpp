#include "pricecast/arima.hpp"

#include "pricecast/errors.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>

namespace pricecast {

namespace {

constexpr int kMaxGridOrder = 5;

// Differencing that allows an empty result (history of exactly d points).
std::vector<double> difference_lenient(std::span<const double> values, int d) {
    std::vector<double> out(values.begin(), values.end());
    for (int pass = 0; pass < d && !out.empty(); ++pass) {
        for (std::size_t i = 0; i + 1 < out.size(); ++i) out[i] = out[i + 1] - out[i];
        out.pop_back();
    }
    return out;
}

// CSS recursion on an already-differenced series. `shocks` receives one
// residual per t in [p, n).
double arma_css(std::span<const double> x, double c, std::span<const double> phi,
                std::span<const double> theta, std::vector<double>& shocks) {
    const std::size_t p = phi.size();
    const std::size_t q = theta.size();
    const std::size_t n = x.size();
    shocks.assign(n > p ? n - p : 0, 0.0);
    double ssr = 0.0;
    for (std::size_t t = p; t < n; ++t) {
        double a = x[t] - c;
        for (std::size_t i = 1; i <= p; ++i) a -= phi[i - 1] * x[t - i];
        const std::size_t k = t - p;  // index into shocks
        for (std::size_t j = 1; j <= q && j <= k; ++j) a += theta[j - 1] * shocks[k - j];
        shocks[k] = a;
        ssr += a * a;
    }
    return ssr;
}

// Eigenvalues of the companion matrix of 1 - sum c_i z^i all inside the unit
// circle <=> every root of the polynomial lies outside it.
bool roots_outside_unit_circle(std::span<const double> coeffs) {
    const auto m = static_cast<Eigen::Index>(coeffs.size());
    if (m == 0) return true;
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) companion(0, i) = coeffs[static_cast<std::size_t>(i)];
    for (Eigen::Index i = 1; i < m; ++i) companion(i, i - 1) = 1.0;
    const Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    if (solver.info() != Eigen::Success) return false;
    return solver.eigenvalues().cwiseAbs().maxCoeff() < 1.0;
}

struct Packed {
    double c;
    std::vector<double> phi;
    std::vector<double> theta;
};

Packed unpack(std::span<const double> beta, int p, int q) {
    Packed out;
    out.c = beta[0];
    out.phi.assign(beta.begin() + 1, beta.begin() + 1 + p);
    out.theta.assign(beta.begin() + 1 + p, beta.begin() + 1 + p + q);
    return out;
}

}  // namespace

void ArimaOrder::validate() const {
    if (p < 0 || d < 0 || q < 0) throw ConfigError("ARIMA orders must be nonnegative");
    if (d > 2) throw ConfigError("ARIMA differencing order must not exceed 2");
}

std::string ArimaOrder::str() const {
    return "(" + std::to_string(p) + "," + std::to_string(d) + "," + std::to_string(q) + ")";
}

double ArimaModel::process_mean() const {
    const double s = std::accumulate(phi.begin(), phi.end(), 0.0);
    return std::abs(1.0 - s) > 1e-12 ? intercept / (1.0 - s) : intercept;
}

std::vector<double> css_residuals(const ArimaModel& model, std::span<const double> values) {
    model.order.validate();
    const auto& o = model.order;
    if (values.size() <= static_cast<std::size_t>(o.d)) throw DataError("insufficient data for differencing");
    const std::vector<double> x = difference(values, o.d);
    if (x.size() <= static_cast<std::size_t>(o.p + o.q)) {
        throw DataError("insufficient data for CSS residuals of ARIMA" + o.str());
    }
    std::vector<double> shocks;
    arma_css(x, model.intercept, model.phi, model.theta, shocks);
    return shocks;
}

ArimaModel fit(std::span<const double> values, const ArimaOrder& order, const FitOptions& options) {
    order.validate();
    if (values.size() <= static_cast<std::size_t>(order.d)) throw DataError("insufficient data for differencing");
    const std::vector<double> x = difference(values, order.d);
    const std::size_t k_coef = static_cast<std::size_t>(order.p + order.q + 1);
    if (x.size() < 10 * k_coef) {
        throw DataError("ARIMA" + order.str() + " needs at least " + std::to_string(10 * k_coef) +
                        " differenced observations, got " + std::to_string(x.size()));
    }

    // Estimate on the standardized series so tolerances are scale-free.
    const double n = static_cast<double>(x.size());
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double var = 0.0;
    for (double v : x) var += (v - mean) * (v - mean);
    var /= n;
    const double scale = var > 0.0 ? std::sqrt(var) : 1.0;
    std::vector<double> z(x.size());
    std::transform(x.begin(), x.end(), z.begin(), [&](double v) { return (v - mean) / scale; });

    const int p = order.p;
    const int q = order.q;
    const std::size_t dim = k_coef;
    const std::size_t n_eff = x.size() - static_cast<std::size_t>(p);

    std::vector<double> shocks;
    const auto objective = [&](std::span<const double> beta) {
        const Packed m = unpack(beta, p, q);
        return arma_css(z, m.c, m.phi, m.theta, shocks) / static_cast<double>(n_eff);
    };

    std::vector<std::vector<double>> starts;
    starts.emplace_back(dim, 0.0);
    std::vector<double> yule_walker(dim, 0.0);
    if (p > 0 && var > 0.0) {
        const CorrelogramResult rho = acf(z, p);
        const std::vector<double> ar = durbin_levinson(rho.coefficients, p);
        std::copy(ar.begin(), ar.end(), yule_walker.begin() + 1);
    }
    starts.push_back(yule_walker);
    std::mt19937_64 rng(options.seed ^ 0x9e3779b97f4a7c15ULL);
    std::normal_distribution<double> jitter(0.0, 0.1);
    std::vector<double> perturbed = yule_walker;
    for (double& b : perturbed) b += jitter(rng);
    starts.push_back(perturbed);

    const std::vector<double> step(dim, 0.1);
    std::optional<SimplexResult> best;
    for (const auto& start : starts) {
        SimplexResult run = nelder_mead(objective, start, step, options.simplex);
        // Restart once from the optimum with a fresh simplex; guards against collapse.
        if (run.converged && run.iterations < options.simplex.max_iterations) {
            SimplexOptions polish = options.simplex;
            polish.max_iterations = options.simplex.max_iterations - run.iterations;
            const std::vector<double> small(dim, 0.02);
            SimplexResult again = nelder_mead(objective, run.x, small, polish);
            again.iterations += run.iterations;
            if (again.value <= run.value) run = std::move(again);
        }
        if (!run.converged) continue;
        if (!best || run.value < best->value) best = std::move(run);
    }
    if (!best) {
        throw NumericError("ARIMA" + order.str() + " CSS fit did not converge within " +
                           std::to_string(options.simplex.max_iterations) + " iterations from any start");
    }

    const Packed std_params = unpack(best->x, p, q);
    ArimaModel model;
    model.order = order;
    model.phi = std_params.phi;
    model.theta = std_params.theta;
    const double phi_sum = std::accumulate(model.phi.begin(), model.phi.end(), 0.0);
    model.intercept = scale * std_params.c + mean * (1.0 - phi_sum);
    model.n_obs = x.size();
    const double ssr = arma_css(x, model.intercept, model.phi, model.theta, shocks);
    const double ne = static_cast<double>(n_eff);
    model.sigma2 = ssr / ne;
    if (!(model.sigma2 > 0.0)) {
        throw NumericError("ARIMA" + order.str() + " fit produced a degenerate innovation variance");
    }
    // Scaled to the full differenced length so that fits with different p stay comparable.
    model.loglik = -0.5 * n * (std::log(2.0 * std::numbers::pi * model.sigma2) + 1.0);
    model.converged = true;
    model.stationary = roots_outside_unit_circle(model.phi);
    model.invertible = roots_outside_unit_circle(model.theta);

    // Covariance from the numerical Hessian of the standardized SSR:
    // cov = 2 sigma^2 H^{-1}, mapped back through c = s c' + m (1 - sum phi).
    const auto ssr_at = [&](const std::vector<double>& beta) {
        const Packed m = unpack(beta, p, q);
        return arma_css(z, m.c, m.phi, m.theta, shocks);
    };
    const double h = 1e-4;
    const auto di = static_cast<Eigen::Index>(dim);
    Eigen::MatrixXd hess(di, di);
    const double f0 = ssr_at(best->x);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = i; j < dim; ++j) {
            std::vector<double> b = best->x;
            double value = 0.0;
            if (i == j) {
                b[i] += h;
                const double fp = ssr_at(b);
                b[i] -= 2.0 * h;
                const double fm = ssr_at(b);
                value = (fp - 2.0 * f0 + fm) / (h * h);
            } else {
                const auto corner = [&](double si, double sj) {
                    std::vector<double> bb = best->x;
                    bb[i] += si * h;
                    bb[j] += sj * h;
                    return ssr_at(bb);
                };
                value = (corner(1, 1) - corner(1, -1) - corner(-1, 1) + corner(-1, -1)) / (4.0 * h * h);
            }
            hess(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = value;
            hess(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = value;
        }
    }
    const Eigen::LLT<Eigen::MatrixXd> llt(hess);
    if (llt.info() == Eigen::Success) {
        const double sigma2_std = f0 / ne;
        const Eigen::MatrixXd cov_std = 2.0 * sigma2_std * llt.solve(Eigen::MatrixXd::Identity(di, di));
        Eigen::MatrixXd jac = Eigen::MatrixXd::Identity(di, di);
        jac(0, 0) = scale;
        for (Eigen::Index i = 1; i <= p; ++i) jac(0, i) = -mean;
        const Eigen::MatrixXd cov = jac * cov_std * jac.transpose();
        std::vector<double> se(dim);
        bool ok = true;
        for (std::size_t i = 0; i < dim; ++i) {
            const double v = cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i));
            ok = ok && v > 0.0 && std::isfinite(v);
            se[i] = ok ? std::sqrt(v) : 0.0;
        }
        if (ok) model.stderrs = std::move(se);
    }
    return model;
}

double aic(double loglik, int k) { return 2.0 * k - 2.0 * loglik; }

double bic(double loglik, int k, double n) { return k * std::log(n) - 2.0 * loglik; }

double aic(const ArimaModel& model) { return aic(model.loglik, model.parameter_count()); }

double bic(const ArimaModel& model) {
    return bic(model.loglik, model.parameter_count(), static_cast<double>(model.n_obs));
}

std::string to_string(Criterion c) { return c == Criterion::aic ? "aic" : "bic"; }

Criterion parse_criterion(const std::string& text) {
    std::string lower = text;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    if (lower == "aic") return Criterion::aic;
    if (lower == "bic") return Criterion::bic;
    throw ConfigError("unknown information criterion '" + text + "' (expected aic or bic)");
}

const std::optional<double>& GridSearchResult::cell(Criterion c, int p, int q) const {
    const auto idx = static_cast<std::size_t>(p * (q_max + 1) + q);
    return c == Criterion::aic ? aic_matrix.at(idx) : bic_matrix.at(idx);
}

ArimaOrder GridSearchResult::best_for(Criterion c) const {
    std::optional<ArimaOrder> best;
    double best_value = std::numeric_limits<double>::infinity();
    for (int p = 0; p <= p_max; ++p) {
        for (int q = 0; q <= q_max; ++q) {
            const auto& v = cell(c, p, q);
            if (!v) continue;
            bool take = false;
            if (!best || *v < best_value - 1e-9) {
                take = true;
            } else if (std::abs(*v - best_value) <= 1e-9) {
                const int total = p + q;
                const int best_total = best->p + best->q;
                take = total < best_total || (total == best_total && p < best->p);
            }
            if (take) {
                best = ArimaOrder{p, d, q};
                best_value = *v;
            }
        }
    }
    if (!best) throw NumericError("grid search: every cell failed");
    return *best;
}

GridSearchResult grid_search(std::span<const double> values, int p_max, int q_max, int d,
                             Criterion criterion, const FitOptions& options) {
    if (p_max < 0 || q_max < 0 || p_max > kMaxGridOrder || q_max > kMaxGridOrder) {
        throw ConfigError("grid bounds must lie in 0..5");
    }
    GridSearchResult grid;
    grid.p_max = p_max;
    grid.q_max = q_max;
    grid.d = d;
    grid.criterion = criterion;
    const auto cells = static_cast<std::size_t>((p_max + 1) * (q_max + 1));
    grid.aic_matrix.resize(cells);
    grid.bic_matrix.resize(cells);
    for (int p = 0; p <= p_max; ++p) {
        for (int q = 0; q <= q_max; ++q) {
            const auto idx = static_cast<std::size_t>(p * (q_max + 1) + q);
            try {
                const ArimaModel m = fit(values, ArimaOrder{p, d, q}, options);
                grid.aic_matrix[idx] = aic(m);
                grid.bic_matrix[idx] = bic(m);
            } catch (const NumericError& e) {
                grid.failures.push_back(std::to_string(p) + "," + std::to_string(q) + ": " + e.what());
            } catch (const DataError& e) {
                grid.failures.push_back(std::to_string(p) + "," + std::to_string(q) + ": " + e.what());
            }
        }
    }
    grid.best_order = grid.best_for(criterion);
    return grid;
}

void write_grid_csv(std::ostream& out, const GridSearchResult& grid, Criterion c) {
    out << "p,q," << to_string(c) << '\n' << std::setprecision(12);
    for (int p = 0; p <= grid.p_max; ++p) {
        for (int q = 0; q <= grid.q_max; ++q) {
            out << p << ',' << q << ',';
            if (const auto& v = grid.cell(c, p, q)) out << *v;
            out << '\n';
        }
    }
}

std::vector<CoefficientTest> t_test(const ArimaModel& model) {
    if (!model.stderrs) throw NumericError("standard errors unavailable (CSS Hessian not positive definite)");
    std::vector<CoefficientTest> out;
    const auto& se = *model.stderrs;
    const auto add = [&](std::string name, double estimate, double s) {
        CoefficientTest t;
        t.name = std::move(name);
        t.estimate = estimate;
        t.stderr_ = s;
        t.t_stat = s > 0.0 ? estimate / s : 0.0;
        t.significant = std::abs(t.t_stat) > 1.96;
        out.push_back(std::move(t));
    };
    add("intercept", model.intercept, se.at(0));
    for (std::size_t i = 0; i < model.phi.size(); ++i) {
        add("phi" + std::to_string(i + 1), model.phi[i], se.at(1 + i));
    }
    for (std::size_t j = 0; j < model.theta.size(); ++j) {
        add("theta" + std::to_string(j + 1), model.theta[j], se.at(1 + model.phi.size() + j));
    }
    return out;
}

ResidualDiagnostics residual_diagnostics(const ArimaModel& model, std::span<const double> values,
                                         int max_lag) {
    const std::vector<double> resid = css_residuals(model, values);
    ResidualDiagnostics diag;
    try {
        diag.correlogram = acf(resid, max_lag);
    } catch (const DataError& e) {
        throw NumericError(std::string("degenerate residuals: ") + e.what());
    }
    diag.pass = diag.correlogram.fraction_inside_band() >= 0.9;
    return diag;
}

double forecast_one_step(const ArimaModel& model, std::span<const double> history) {
    const auto& o = model.order;
    o.validate();
    const std::size_t needed = static_cast<std::size_t>(o.p + o.d);
    if (history.size() < needed) {
        throw DataError("forecast needs at least " + std::to_string(needed) + " history points");
    }
    const std::vector<double> x = difference_lenient(history, o.d);
    std::vector<double> shocks;
    arma_css(x, model.intercept, model.phi, model.theta, shocks);

    const std::size_t n = x.size();
    double next = model.intercept;
    for (std::size_t i = 1; i <= model.phi.size(); ++i) next += model.phi[i - 1] * x[n - i];
    for (std::size_t j = 1; j <= model.theta.size() && j <= shocks.size(); ++j) {
        next -= model.theta[j - 1] * shocks[shocks.size() - j];
    }

    // Undo differencing: y_n = x_n - sum_{k=1..d} C(d,k) (-1)^k y_{n-k}.
    double level = next;
    double binom = 1.0;
    for (int k = 1; k <= o.d; ++k) {
        binom = binom * (o.d - k + 1) / k;
        const double sign = (k % 2 == 1) ? -1.0 : 1.0;
        level -= binom * sign * history[history.size() - static_cast<std::size_t>(k)];
    }
    return level;
}

std::vector<double> rolling_forecast(const ArimaModel& model, std::span<const double> train,
                                     std::span<const double> test, std::optional<int> refit_every,
                                     const FitOptions& options) {
    if (refit_every && *refit_every <= 0) throw ConfigError("refit_every must be positive");
    std::vector<double> history(train.begin(), train.end());
    history.reserve(train.size() + test.size());
    ArimaModel current = model;
    std::vector<double> out;
    out.reserve(test.size());
    for (std::size_t k = 0; k < test.size(); ++k) {
        if (refit_every && k > 0 && k % static_cast<std::size_t>(*refit_every) == 0) {
            current = fit(history, model.order, options);
        }
        out.push_back(forecast_one_step(current, history));
        history.push_back(test[k]);
    }
    return out;
}

std::string model_to_text(const ArimaModel& model, const std::string& fingerprint) {
    nlohmann::json j;
    j["kind"] = "arima";
    j["order"] = {{"p", model.order.p}, {"d", model.order.d}, {"q", model.order.q}};
    j["phi"] = model.phi;
    j["theta"] = model.theta;
    j["intercept"] = model.intercept;
    j["sigma2"] = model.sigma2;
    j["n_obs"] = model.n_obs;
    j["loglik"] = model.loglik;
    j["aic"] = aic(model);
    j["bic"] = bic(model);
    j["stderrs"] = model.stderrs ? nlohmann::json(*model.stderrs) : nlohmann::json(nullptr);
    j["converged"] = model.converged;
    j["stationary"] = model.stationary;
    j["invertible"] = model.invertible;
    if (!fingerprint.empty()) j["fingerprint"] = fingerprint;
    return j.dump(2) + "\n";
}

ArimaModel model_from_text(const std::string& text, std::string* fingerprint) {
    try {
        const auto j = nlohmann::json::parse(text);
        if (j.at("kind") != "arima") throw DataError("checkpoint is not an ARIMA model");
        ArimaModel m;
        m.order = {j.at("order").at("p").get<int>(), j.at("order").at("d").get<int>(),
                   j.at("order").at("q").get<int>()};
        m.order.validate();
        m.phi = j.at("phi").get<std::vector<double>>();
        m.theta = j.at("theta").get<std::vector<double>>();
        if (m.phi.size() != static_cast<std::size_t>(m.order.p) ||
            m.theta.size() != static_cast<std::size_t>(m.order.q)) {
            throw DataError("ARIMA checkpoint coefficient counts do not match its order");
        }
        m.intercept = j.at("intercept").get<double>();
        m.sigma2 = j.at("sigma2").get<double>();
        m.n_obs = j.at("n_obs").get<std::size_t>();
        m.loglik = j.at("loglik").get<double>();
        if (!j.at("stderrs").is_null()) m.stderrs = j.at("stderrs").get<std::vector<double>>();
        m.converged = j.at("converged").get<bool>();
        m.stationary = j.at("stationary").get<bool>();
        m.invertible = j.at("invertible").get<bool>();
        if (fingerprint) *fingerprint = j.value("fingerprint", std::string{});
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed ARIMA checkpoint: ") + e.what());
    }
}

}  // namespace pricecast
