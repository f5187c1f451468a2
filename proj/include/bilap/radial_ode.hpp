#pragma once

#include "bilap/numerics.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace bilap::ode {

// One sample of the first-order radial system for Lap^2 u = -u^-q in R^3:
//   u' = du
//   du' = v - 2 du / r        (v = Lap u = u'' + 2 u'/r)
//   v' = dv
//   dv' = -u^-q - 2 dv / r
struct RadialState {
    double r = 0.0;
    double u = 0.0;
    double du = 0.0;
    double v = 0.0;
    double dv = 0.0;
};

enum class Termination {
    ReachedTarget, // integrated to r_target
    Extinction,    // u crossed the extinction floor at finite radius
    StepUnderflow, // step size shrank below representable resolution
};

const char* to_string(Termination t);

struct SolutionTrace {
    std::vector<RadialState> samples;
    double q = 0.0;
    double beta = 0.0;
    Termination termination = Termination::ReachedTarget;
    // Radius where integration stopped: r_target, the extinction radius, or
    // the underflow radius.
    double r_stop = 0.0;

    double r_first() const { return samples.front().r; }
    double r_last() const { return samples.back().r; }
    // u(r) interpolated in log-log coordinates; r must lie inside the trace.
    double u_at(double r) const;
};

struct IntegratorControls {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double r0 = 0.0; // series-start radius; 0 requests the default rule
    double r_target = 1e3;
    double u_floor = 1e-8;
    std::int64_t max_steps = 10'000'000;

    // r0 resolves to clamp(1e-6 * r_target, 1e-6, 1e-3) when left at 0.
    double resolved_r0() const;
    void validate() const; // throws PreconditionError on nonsense
};

// Right-hand side of the first-order system; r must be positive (use the
// series start at the origin) and u positive.
std::array<double, 4> rhs(const RadialState& state, double q);

// State at r0 of the Taylor expansion around the origin realizing
// u(0) = 1, u'(0) = 0, Lap u(0) = beta, (Lap u)'(0) = 0:
//   u(r) = 1 + (beta/6) r^2 - r^4/120 + (q beta/5040) r^6 + O(r^8)
//   v(r) = beta - r^2/6 + (q beta/120) r^4 + O(r^6)
// Requires 0 < r0 <= 1e-3 so the truncation stays below integrator tolerances.
RadialState series_start(double beta, double q, double r0);

// Adaptive embedded Dormand-Prince 5(4) integration from the series start.
// Extinction (u crossing controls.u_floor) is localized by bisecting the last
// step to within abs_tol in r. Throws StepBudgetExceededError.
SolutionTrace integrate(double beta, double q, const IntegratorControls& controls);

// Same engine from an arbitrary interior state (used by the rescaling checks).
SolutionTrace integrate_from(const RadialState& start, double q,
                             const IntegratorControls& controls);

struct ResidualPoint {
    double x = 0.0;        // abscissa (radius or inverted radius)
    double residual = 0.0; // signed sum of the equation terms
    double scale = 0.0;    // largest single term magnitude at this point
};

struct ResidualProfile {
    std::vector<ResidualPoint> points;
    double max_relative = 0.0; // max |residual| / scale over the points

    void finalize();
};

struct BiharmonicResidualOptions {
    bool with_source = true;       // include the u^-q term
    double spacing_factor = 4.0;   // stencil spacing over local sample spacing
    int half_width = 4;            // 9-point stencils by default
    numerics::Window window{0, 0}; // {0,0} = full usable range
};

// Independent verification that a trace satisfies u'''' + 4 u'''/r = -u^-q,
// using only the u samples: locally uniform stencils filled by cubic
// interpolation (exact on polynomials in r, so synthetic biharmonic data
// gives zero residual to rounding).
ResidualProfile residual_biharmonic(const SolutionTrace& trace,
                                    const BiharmonicResidualOptions& opts = {});

} // namespace bilap::ode
