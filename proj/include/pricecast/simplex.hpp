#pragma once

#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace pricecast {

struct SimplexOptions {
    int max_iterations = 2000;
    /// Converged when f(worst) - f(best) over the simplex drops below this.
    double f_tolerance = 1e-8;
    /// Optionally also require the simplex diameter (max-norm) below this.
    double x_tolerance = std::numeric_limits<double>::infinity();
};

struct SimplexResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

/// Nelder-Mead downhill simplex (reflection 1, expansion 2, contraction 0.5,
/// shrink 0.5). The initial simplex is `start` plus one vertex per
/// coordinate offset by `step[i]`. Non-finite objective values are treated
/// as +infinity.
SimplexResult nelder_mead(const Objective& f, std::span<const double> start, std::span<const double> step,
                          const SimplexOptions& options = {});

}  // namespace pricecast
