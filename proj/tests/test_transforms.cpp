#include "bilap/transforms.hpp"

#include "bilap/errors.hpp"
#include "bilap/numerics.hpp"
#include "bilap/shooting.hpp"

#include <doctest.h>

#include <cmath>

using namespace bilap;
using ode::SolutionTrace;
using transforms::KelvinTrace;

namespace {

SolutionTrace synthetic_trace(double q, double r_lo, double r_hi, std::size_t n,
                              double (*u)(double)) {
    SolutionTrace t;
    t.q = q;
    for (double r : numerics::log_space(r_lo, r_hi, n))
        t.samples.push_back({r, u(r), 0.0, 0.0, 0.0});
    t.termination = ode::Termination::ReachedTarget;
    t.r_stop = r_hi;
    return t;
}

} // namespace

TEST_CASE("kelvin transform is the pointwise inversion map") {
    SUBCASE("u = L r maps to zero") {
        const auto t = synthetic_trace(2.0, 0.5, 100.0, 64, [](double r) { return 3.0 * r; });
        const auto kt = transforms::kelvin(t, 3.0);
        REQUIRE(!kt.samples.empty());
        for (const auto& s : kt.samples) {
            CHECK(std::fabs(s.vbar) < 1e-14);
            CHECK(s.s <= 1.0);
        }
        // only r >= 1 samples admitted
        for (const auto& s : kt.samples) CHECK(s.s <= 1.0);
    }

    SUBCASE("u = L r + sqrt(r) maps to vbar = sqrt(s)") {
        const auto t = synthetic_trace(2.0, 1.0, 400.0, 64,
                                       [](double r) { return 2.0 * r + std::sqrt(r); });
        const auto kt = transforms::kelvin(t, 2.0);
        for (const auto& s : kt.samples)
            CHECK(s.vbar == doctest::Approx(std::sqrt(s.s)).epsilon(1e-12));
        // s strictly decreasing in trace order
        for (std::size_t i = 1; i < kt.samples.size(); ++i)
            CHECK(kt.samples[i].s < kt.samples[i - 1].s);
    }

    SUBCASE("rejects nonpositive L") {
        const auto t = synthetic_trace(2.0, 1.0, 10.0, 16, [](double r) { return r; });
        CHECK_THROWS_AS(transforms::kelvin(t, 0.0), NonPositiveLError);
        CHECK_THROWS_AS(transforms::kelvin(t, -1.0), NonPositiveLError);
    }

    SUBCASE("round trip reconstructs the original samples") {
        const auto t = synthetic_trace(2.0, 1.0, 500.0, 80,
                                       [](double r) { return 1.7 * r + std::cbrt(r); });
        const auto kt = transforms::kelvin(t, 1.7);
        std::size_t j = 0;
        for (const auto& sample : t.samples) {
            if (sample.r < 1.0) continue;
            const auto& k = kt.samples[j++];
            const double r_back = 1.0 / k.s;
            const double u_back = r_back * (k.vbar + 1.7);
            CHECK(r_back == doctest::Approx(sample.r).epsilon(1e-15));
            CHECK(u_back == doctest::Approx(sample.u).epsilon(1e-13));
        }
        CHECK(j == kt.samples.size());
    }
}

TEST_CASE("averaged-equation residual: stencils annihilate the kernel") {
    // The kernel of d^4/ds^4 + (4/s) d^3/ds^3 is spanned by {1, s, s^2, 1/s}
    // (powers s^a with a(a-1)(a-2)(a+1) = 0).
    auto make = [](double power, std::size_t n) {
        KelvinTrace kt;
        kt.L = 1.0;
        kt.q = 2.0;
        const auto grid = numerics::log_space(0.01, 1.0, n);
        for (std::size_t i = grid.size(); i-- > 0;)
            kt.samples.push_back({grid[i], std::pow(grid[i], power)});
        return kt;
    };

    SUBCASE("polynomial kernel members vanish to rounding") {
        for (double power : {0.0, 1.0, 2.0}) {
            const auto kt = make(power, 120);
            transforms::AvgOdeResidualOptions opts;
            opts.with_source = false;
            const auto profile = transforms::residual_avg_ode(kt, opts);
            REQUIRE(!profile.points.empty());
            // rounding floor of the stencil scales like s^-4
            for (const auto& p : profile.points)
                CHECK(std::fabs(p.residual) * std::pow(p.x, 4) < 1e-8);
        }
    }

    SUBCASE("the non-polynomial kernel member 1/s vanishes to stencil accuracy") {
        const auto kt = make(-1.0, 400);
        transforms::AvgOdeResidualOptions opts;
        opts.with_source = false;
        const auto profile = transforms::residual_avg_ode(kt, opts);
        REQUIRE(!profile.points.empty());
        CHECK(profile.max_relative < 1e-2);
    }

    SUBCASE("s^3 is not in the kernel: the third-derivative term survives") {
        const auto kt = make(3.0, 120);
        transforms::AvgOdeResidualOptions opts;
        opts.with_source = false;
        const auto profile = transforms::residual_avg_ode(kt, opts);
        // residual = 4 * 6 / s = 24 / s
        for (const auto& p : profile.points)
            CHECK(p.residual == doctest::Approx(24.0 / p.x).epsilon(1e-6));
    }
}

TEST_CASE("averaged-equation residual on a computed global trace") {
    ode::IntegratorControls controls;
    controls.r_target = 1e4;
    controls.rel_tol = 1e-12;
    controls.abs_tol = 1e-14;
    const auto cert =
        shooting::find_beta_star(2.0, shooting::auto_bracket(2.0, controls), 1e-6, controls);
    const auto trace = ode::integrate(2.0 * cert.midpoint(), 2.0, controls);
    REQUIRE(trace.termination == ode::Termination::ReachedTarget);

    const auto kt = transforms::kelvin(trace, 1.0);
    const auto profile = transforms::residual_avg_ode(kt);
    REQUIRE(profile.points.size() > 20);
    CHECK(profile.max_relative < 1e-2);
}

TEST_CASE("minimal q = 5 trace maps to vbar = O(s) under its fitted L") {
    ode::IntegratorControls controls;
    controls.r_target = 3e4;
    controls.rel_tol = 1e-12;
    controls.abs_tol = 1e-14;
    const auto cert =
        shooting::find_beta_star(5.0, shooting::auto_bracket(5.0, controls), 1e-8, controls);
    const auto trace = ode::integrate(cert.beta_hi, 5.0, controls);
    REQUIRE(trace.termination == ode::Termination::ReachedTarget);

    // fitted linear coefficient, then the tail of the transformed trace
    const double L = [&] {
        std::vector<double> phi, w;
        for (const auto& s : trace.samples) {
            if (s.r < 30.0 || s.r > 300.0) continue;
            phi.push_back(1.0 / s.r);
            w.push_back(s.u / s.r);
        }
        return numerics::ols_line(phi, w).intercept;
    }();
    REQUIRE(L > 0.0);

    const auto kt = transforms::kelvin(trace, L);
    double worst_ratio = 0.0;
    std::size_t counted = 0;
    for (const auto& s : kt.samples) {
        if (s.s > 1.0 / 30.0 || s.s < 1.0 / 300.0) continue;
        worst_ratio = std::max(worst_ratio, std::fabs(s.vbar) / s.s);
        ++counted;
    }
    REQUIRE(counted > 50);
    CHECK(worst_ratio < 10.0); // |vbar| <= C s with a modest constant
}

TEST_CASE("averaged-equation residual requires nine samples") {
    KelvinTrace kt;
    kt.L = 1.0;
    kt.q = 2.0;
    for (double s : {1.0, 0.8, 0.6, 0.4, 0.2}) kt.samples.push_back({s, s});
    CHECK_THROWS_AS(transforms::residual_avg_ode(kt), TooFewSamplesError);
}

TEST_CASE("emden change of variables") {
    KelvinTrace kt;
    kt.L = 2.0;
    kt.q = 3.0;
    kt.samples.push_back({1.0, 0.5});
    kt.samples.push_back({std::exp(-3.0), 0.25});
    const auto et = transforms::emden(kt);
    CHECK(et.samples[0].t == doctest::Approx(0.0));
    CHECK(et.samples[1].t == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(et.samples[0].zbar == 0.5);

    SUBCASE("power decay becomes an exact log-linear law") {
        KelvinTrace power;
        power.L = 1.0;
        power.q = 2.0;
        const double a = 1.75;
        const auto grid = numerics::log_space(1e-4, 1.0, 200);
        for (std::size_t i = grid.size(); i-- > 0;)
            power.samples.push_back({grid[i], std::pow(grid[i], a)});
        const auto etr = transforms::emden(power);
        std::vector<double> ts, lnz;
        for (const auto& s : etr.samples) {
            ts.push_back(s.t);
            lnz.push_back(std::log(std::fabs(s.zbar)));
        }
        const auto fit = numerics::ols_line(ts, lnz);
        CHECK(std::fabs(-fit.slope - a) < 1e-6);
    }

    SUBCASE("s outside (0, 1] is rejected") {
        KelvinTrace bad;
        bad.L = 1.0;
        bad.q = 2.0;
        bad.samples.push_back({1.5, 0.1});
        CHECK_THROWS_AS(transforms::emden(bad), SOutOfRangeError);
        bad.samples[0] = {0.0, 0.1};
        CHECK_THROWS_AS(transforms::emden(bad), SOutOfRangeError);
    }
}

TEST_CASE("xi extraction agrees with the kelvin values") {
    const auto t = synthetic_trace(2.0, 0.25, 50.0, 96,
                                   [](double r) { return 2.0 * r + std::pow(r, 0.5); });

    SUBCASE("u = L r gives xi = 0") {
        const auto lin = synthetic_trace(2.0, 1.0, 10.0, 32, [](double r) { return 5.0 * r; });
        for (const auto& [r, xi] : transforms::extract_xi(lin, 5.0))
            CHECK(std::fabs(xi) < 1e-14);
    }

    SUBCASE("pointwise identity with the transform") {
        const auto xi = transforms::extract_xi(t, 2.0);
        const auto kt = transforms::kelvin(t, 2.0);
        std::size_t j = 0;
        for (const auto& [r, value] : xi) {
            if (r < 1.0) continue;
            CHECK(value == kt.samples[j].vbar); // same formula, bit-identical
            CHECK(1.0 / r == doctest::Approx(kt.samples[j].s).epsilon(1e-15));
            ++j;
        }
    }

    SUBCASE("synthetic remainder exponent") {
        std::vector<double> lx, ly;
        for (const auto& [r, xi] : transforms::extract_xi(t, 2.0)) {
            lx.push_back(std::log(r));
            ly.push_back(std::log(std::fabs(xi)));
        }
        const auto fit = numerics::ols_line(lx, ly);
        CHECK(fit.slope == doctest::Approx(-0.5).epsilon(1e-10));
    }

    CHECK_THROWS_AS(transforms::extract_xi(t, -2.0), NonPositiveLError);
}
