#include "pricecast/simplex.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace pricecast;

TEST(NelderMead, Quadratic) {
    const auto f = [](std::span<const double> x) {
        return (x[0] - 1.0) * (x[0] - 1.0) + 3.0 * (x[1] + 2.0) * (x[1] + 2.0);
    };
    const std::vector<double> start{0, 0}, step{0.5, 0.5};
    SimplexOptions opt;
    opt.f_tolerance = 1e-14;
    const auto r = nelder_mead(f, start, step, opt);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.x[0], 1.0, 1e-5);
    EXPECT_NEAR(r.x[1], -2.0, 1e-5);
    EXPECT_LE(r.value, 1e-10);
}

TEST(NelderMead, Rosenbrock) {
    const auto f = [](std::span<const double> x) {
        return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
    };
    const std::vector<double> start{-1.2, 1.0}, step{0.1, 0.1};
    SimplexOptions opt;
    opt.max_iterations = 5000;
    opt.f_tolerance = 1e-16;
    const auto r = nelder_mead(f, start, step, opt);
    EXPECT_NEAR(r.x[0], 1.0, 1e-3);
    EXPECT_NEAR(r.x[1], 1.0, 2e-3);
}

TEST(NelderMead, NonFiniteTreatedAsWall) {
    const auto f = [](std::span<const double> x) {
        return x[0] < 0.0 ? std::numeric_limits<double>::quiet_NaN() : (x[0] - 0.5) * (x[0] - 0.5);
    };
    const std::vector<double> start{2.0}, step{1.0};
    const auto r = nelder_mead(f, start, step);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.x[0], 0.5, 1e-3);
}

TEST(NelderMead, IterationCapReportsNotConverged) {
    const auto f = [](std::span<const double> x) { return x[0]; };  // unbounded below
    const std::vector<double> start{0.0}, step{1.0};
    SimplexOptions opt;
    opt.max_iterations = 50;
    const auto r = nelder_mead(f, start, step, opt);
    EXPECT_FALSE(r.converged);
    EXPECT_EQ(r.iterations, 50);
}

TEST(NelderMead, ZeroDimensional) {
    const auto f = [](std::span<const double>) { return 4.0; };
    const auto r = nelder_mead(f, std::vector<double>{}, std::vector<double>{});
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.value, 4.0);
}
