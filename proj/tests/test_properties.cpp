#include "bilap/asymptotics.hpp"
#include "bilap/errors.hpp"
#include "bilap/modes.hpp"
#include "bilap/numerics.hpp"
#include "bilap/radial_ode.hpp"
#include "bilap/shooting.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace bilap;

TEST_CASE("scaling symmetry of the integrator") {
    // If u solves the equation, so does lambda^(4/(1+q)) u(x / lambda).
    // Integrating from the rescaled series data must reproduce the rescaled
    // trace on the overlap window. Endpoints are compared at several horizons
    // so no interpolation enters the check.
    const double q = 2.0;
    const double sigma = 4.0 / (1.0 + q);

    for (double lambda : {2.0, 0.5}) {
        for (double horizon : {2.0, 5.0, 10.0}) {
            ode::IntegratorControls c;
            c.r_target = horizon;
            c.r0 = 1e-4;
            const auto base = ode::integrate(3.0, q, c); // comfortably above threshold
            REQUIRE(base.termination == ode::Termination::ReachedTarget);

            const ode::RadialState s0 = base.samples.front();
            const double scale = std::pow(lambda, sigma);
            ode::RadialState scaled;
            scaled.r = lambda * s0.r;
            scaled.u = scale * s0.u;
            scaled.du = scale / lambda * s0.du;
            scaled.v = scale / (lambda * lambda) * s0.v;
            scaled.dv = scale / (lambda * lambda * lambda) * s0.dv;

            ode::IntegratorControls cs = c;
            cs.r_target = lambda * horizon;
            cs.r0 = scaled.r;
            const auto rescaled = ode::integrate_from(scaled, q, cs);
            REQUIRE(rescaled.termination == ode::Termination::ReachedTarget);

            const double expected = scale * base.samples.back().u;
            const double got = rescaled.samples.back().u;
            CHECK(std::fabs(got - expected) / std::fabs(expected) < 10.0 * c.rel_tol);
        }
    }
}

TEST_CASE("bisection maintains the bracket invariant step by step") {
    ode::IntegratorControls c;
    c.r_target = 200.0;
    // replicate the bisection loop, auditing every step
    double lo = 0.0, hi = 4.0;
    REQUIRE(!shooting::classify(lo, 2.0, c).is_global());
    REQUIRE(shooting::classify(hi, 2.0, c).is_global());
    double width = hi - lo;
    for (int i = 0; i < 20; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (shooting::classify(mid, 2.0, c).is_global())
            hi = mid;
        else
            lo = mid;
        CHECK(!shooting::classify(lo, 2.0, c).is_global());
        CHECK(shooting::classify(hi, 2.0, c).is_global());
        CHECK(hi - lo == doctest::Approx(width / 2.0).epsilon(1e-12));
        width = hi - lo;
    }
}

TEST_CASE("extending the horizon never revives an extinct shot") {
    // identical series start so the step sequences coincide exactly
    ode::IntegratorControls short_run;
    short_run.r_target = 500.0;
    short_run.r0 = 1e-3;
    ode::IntegratorControls long_run;
    long_run.r_target = 1000.0;
    long_run.r0 = 1e-3;

    for (double beta : {0.0, 0.5, 1.0, 1.5}) {
        const auto at_short = shooting::classify(beta, 2.0, short_run);
        const auto at_long = shooting::classify(beta, 2.0, long_run);
        if (!at_short.is_global()) {
            CHECK(!at_long.is_global());
            // the extinction radius is a property of the shot, not the horizon
            CHECK(at_long.radius == at_short.radius);
        }
    }
}

TEST_CASE("Poincare spectral inequalities with equality at k = 1") {
    using Coeffs = std::map<std::pair<int, int>, double>;

    // equality case
    const auto eq = modes::poincare_check(Coeffs{{{1, 1}, 1.0}, {{1, 2}, -2.0}, {{1, 3}, 0.5}});
    CHECK(eq.grad == 2.0);
    CHECK(eq.bilap == 4.0);

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    std::uniform_int_distribution<int> kdist(1, 12);
    for (int trial = 0; trial < 200; ++trial) {
        Coeffs cs;
        const int terms = 1 + trial % 6;
        for (int i = 0; i < terms; ++i) {
            const int k = kdist(rng);
            std::uniform_int_distribution<int> jdist(1, 2 * k + 1);
            double c = coeff(rng);
            if (c == 0.0) c = 1.0;
            cs[{k, jdist(rng)}] = c;
        }
        const auto quotients = modes::poincare_check(cs);
        CHECK(quotients.grad >= 2.0 - 1e-12);
        CHECK(quotients.bilap >= 4.0 - 1e-12);

        // invariance under scaling all coefficients
        Coeffs scaled = cs;
        for (auto& [key, value] : scaled) value *= -7.3;
        const auto q2 = modes::poincare_check(scaled);
        CHECK(q2.grad == doctest::Approx(quotients.grad).epsilon(1e-12));
        CHECK(q2.bilap == doctest::Approx(quotients.bilap).epsilon(1e-12));
    }
}

TEST_CASE("mode quartic reflection: tilde roots are the negated roots") {
    for (int k = 1; k <= 20; ++k) {
        const auto mu = modes::char_roots(k);
        const auto tilde = modes::char_roots_tilde(k);
        const double scale = std::max(1.0, std::fabs(modes::eigen_data(k).lambda *
                                                     (modes::eigen_data(k).lambda - 2.0)));
        for (double m : mu) CHECK(std::fabs(modes::quartic_tilde(k, -m)) / scale < 1e-12);
        // as sets, tilde = -mu
        const std::array<double, 4> negated{-mu[3], -mu[2], -mu[1], -mu[0]};
        CHECK(negated == tilde);
    }
}
