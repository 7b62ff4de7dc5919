#include "pricecast/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace pricecast {

SimplexResult nelder_mead(const Objective& f, std::span<const double> start, std::span<const double> step,
                          const SimplexOptions& options) {
    const std::size_t n = start.size();
    if (step.size() != n) throw std::invalid_argument("nelder_mead: step size mismatch");

    SimplexResult result;
    const auto eval = [&](const std::vector<double>& x) {
        ++result.evaluations;
        const double v = f(x);
        return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    };

    if (n == 0) {
        result.value = eval({});
        result.converged = true;
        return result;
    }

    std::vector<std::vector<double>> vertex(n + 1, std::vector<double>(start.begin(), start.end()));
    for (std::size_t i = 0; i < n; ++i) vertex[i + 1][i] += step[i] != 0.0 ? step[i] : 1e-3;
    std::vector<double> fv(n + 1);
    for (std::size_t i = 0; i <= n; ++i) fv[i] = eval(vertex[i]);

    std::vector<std::size_t> order(n + 1);
    std::vector<double> centroid(n), trial(n), trial2(n);

    const auto sort_vertices = [&] {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        std::vector<std::vector<double>> v2(n + 1);
        std::vector<double> f2(n + 1);
        for (std::size_t k = 0; k <= n; ++k) {
            v2[k] = std::move(vertex[order[k]]);
            f2[k] = fv[order[k]];
        }
        vertex.swap(v2);
        fv.swap(f2);
    };
    const auto along = [&](double t, std::vector<double>& out) {
        // out = centroid + t * (worst - centroid)
        for (std::size_t i = 0; i < n; ++i) out[i] = centroid[i] + t * (vertex[n][i] - centroid[i]);
    };

    sort_vertices();
    while (result.iterations < options.max_iterations) {
        double diameter = 0.0;
        for (std::size_t k = 1; k <= n; ++k) {
            for (std::size_t i = 0; i < n; ++i) {
                diameter = std::max(diameter, std::abs(vertex[k][i] - vertex[0][i]));
            }
        }
        if (std::isfinite(fv[n]) && fv[n] - fv[0] <= options.f_tolerance && diameter <= options.x_tolerance) {
            result.converged = true;
            break;
        }
        ++result.iterations;

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t i = 0; i < n; ++i) centroid[i] += vertex[k][i];
        }
        for (double& c : centroid) c /= static_cast<double>(n);

        along(-1.0, trial);
        const double f_reflect = eval(trial);
        if (f_reflect < fv[0]) {
            along(-2.0, trial2);
            const double f_expand = eval(trial2);
            if (f_expand < f_reflect) {
                vertex[n] = trial2;
                fv[n] = f_expand;
            } else {
                vertex[n] = trial;
                fv[n] = f_reflect;
            }
        } else if (f_reflect < fv[n - 1]) {
            vertex[n] = trial;
            fv[n] = f_reflect;
        } else {
            const bool outside = f_reflect < fv[n];
            along(outside ? -0.5 : 0.5, trial2);
            const double f_contract = eval(trial2);
            if (f_contract < std::min(f_reflect, fv[n])) {
                vertex[n] = trial2;
                fv[n] = f_contract;
            } else {
                for (std::size_t k = 1; k <= n; ++k) {
                    for (std::size_t i = 0; i < n; ++i) {
                        vertex[k][i] = vertex[0][i] + 0.5 * (vertex[k][i] - vertex[0][i]);
                    }
                    fv[k] = eval(vertex[k]);
                }
            }
        }
        sort_vertices();
    }

    result.x = vertex[0];
    result.value = fv[0];
    return result;
}

}  // namespace pricecast
