#include "bilap/numerics.hpp"

#include "bilap/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace bilap;
using numerics::fd_weights;

TEST_CASE("fd_weights reproduces the classical uniform 7-point stencils") {
    std::vector<double> nodes;
    for (int i = -3; i <= 3; ++i) nodes.push_back(static_cast<double>(i));
    const auto w = fd_weights(0.0, nodes, 4);

    // 2nd derivative, 6th order
    const double d2[7] = {1.0 / 90, -3.0 / 20, 3.0 / 2, -49.0 / 18, 3.0 / 2, -3.0 / 20, 1.0 / 90};
    // 4th derivative, 4th order
    const double d4[7] = {-1.0 / 6, 2.0, -13.0 / 2, 28.0 / 3, -13.0 / 2, 2.0, -1.0 / 6};
    for (int j = 0; j < 7; ++j) {
        CHECK(w[2][j] == doctest::Approx(d2[j]).epsilon(1e-13));
        CHECK(w[4][j] == doctest::Approx(d4[j]).epsilon(1e-13));
    }
}

TEST_CASE("fd_weights is exact for degree-6 polynomials on scattered nodes") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> jitter(-0.2, 0.2);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> nodes;
        for (int i = -3; i <= 3; ++i) nodes.push_back(0.7 * i + jitter(rng));
        const double z = jitter(rng);
        const auto w = fd_weights(z, nodes, 4);

        // f(x) = x^6 - 2 x^4 + 3 x
        auto f = [](double x) { return std::pow(x, 6) - 2.0 * std::pow(x, 4) + 3.0 * x; };
        const double f3 = 120.0 * std::pow(z, 3) - 48.0 * z;
        const double f4 = 360.0 * z * z - 48.0;
        double s3 = 0.0, s4 = 0.0;
        for (std::size_t j = 0; j < nodes.size(); ++j) {
            s3 += w[3][j] * f(nodes[j]);
            s4 += w[4][j] * f(nodes[j]);
        }
        CHECK(s3 == doctest::Approx(f3).epsilon(1e-10));
        CHECK(s4 == doctest::Approx(f4).epsilon(1e-10));
    }
}

TEST_CASE("cubic interpolation is exact on cubics and rejects extrapolation") {
    std::vector<double> xs, ys;
    for (int i = 0; i <= 20; ++i) {
        const double x = 0.3 * i + 0.01 * i * i;
        xs.push_back(x);
        ys.push_back(((x - 1.0) * x + 2.0) * x - 5.0);
    }
    const numerics::CubicInterpolant interp(xs, ys);
    for (double x : {0.05, 1.7, 3.33, 6.0}) {
        const double expected = ((x - 1.0) * x + 2.0) * x - 5.0;
        CHECK(interp(x) == doctest::Approx(expected).epsilon(1e-13));
    }
    CHECK_THROWS_AS(interp(-1.0), PreconditionError);
    CHECK_THROWS_AS(interp(100.0), PreconditionError);
}

TEST_CASE("ols_line recovers exact lines and reports residuals") {
    std::vector<double> xs = {1, 2, 3, 4, 5, 6};
    std::vector<double> ys;
    for (double x : xs) ys.push_back(2.5 * x - 1.25);
    const auto fit = numerics::ols_line(xs, ys);
    CHECK(fit.slope == doctest::Approx(2.5).epsilon(1e-14));
    CHECK(fit.intercept == doctest::Approx(-1.25).epsilon(1e-13));
    CHECK(fit.rms_residual < 1e-13);

    ys[2] += 0.6; // perturb one point; residual must show it
    const auto fit2 = numerics::ols_line(xs, ys);
    CHECK(fit2.rms_residual > 0.05);
}

TEST_CASE("log_space endpoints and monotonicity") {
    const auto g = numerics::log_space(1e-3, 1e3, 61);
    CHECK(g.size() == 61);
    CHECK(g.front() == 1e-3);
    CHECK(g.back() == 1e3);
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
    CHECK_THROWS_AS(numerics::log_space(-1.0, 1.0, 10), PreconditionError);
}

TEST_CASE("window helpers") {
    const numerics::Window w{1.0, 10000.0};
    const auto mid = w.geometric_middle_half();
    CHECK(mid.lo == doctest::Approx(10.0));
    CHECK(mid.hi == doctest::Approx(1000.0));
    const auto isect = w.intersect({5.0, 20000.0});
    CHECK(isect.lo == 5.0);
    CHECK(isect.hi == 10000.0);
}
