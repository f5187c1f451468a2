#pragma once

#include "bilap/numerics.hpp"
#include "bilap/radial_ode.hpp"

#include <utility>
#include <vector>

namespace bilap::shooting {

// Classification of a single shot at the finite horizon r_target: the run
// either survived (Global surrogate for R_max = infinity) or extinguished.
struct ShootingOutcome {
    enum class Kind { Extinct, Global };

    Kind kind = Kind::Extinct;
    double radius = 0.0; // extinction radius, or r_target when Global
    double beta = 0.0;
    double q = 0.0;
    // Step underflow near the terminal blow-down is reported as Extinct with
    // this flag set so callers can tell the two apart.
    bool underflow = false;

    bool is_global() const { return kind == Kind::Global; }
};

const char* to_string(ShootingOutcome::Kind k);

struct ThresholdCertificate {
    double q = 0.0;
    double beta_lo = 0.0; // Extinct endpoint
    double beta_hi = 0.0; // Global endpoint
    double r_target = 0.0;
    double tol = 0.0;
    int bisection_steps = 0;
    ShootingOutcome outcome_lo;
    ShootingOutcome outcome_hi;

    double width() const { return beta_hi - beta_lo; }
    double midpoint() const { return 0.5 * (beta_lo + beta_hi); }
};

ShootingOutcome classify(double beta, double q, const ode::IntegratorControls& controls);

// Classification of an already computed trace.
ShootingOutcome classify(const ode::SolutionTrace& trace);

// Bisect for the threshold initial Laplacian separating extinction from
// global existence at the configured horizon. Both bracket endpoints are
// validated up front (InvalidBracketError otherwise); the bracket invariant
// (lo Extinct, hi Global) is maintained at every step.
ThresholdCertificate find_beta_star(double q, std::pair<double, double> bracket, double tol,
                                    const ode::IntegratorControls& controls);

// Geometric search 1, 2, 4, ... for a Global upper endpoint; lower endpoint 0.
std::pair<double, double> auto_bracket(double q, const ode::IntegratorControls& controls);

struct OrderingReport {
    double beta_lo = 0.0;
    double beta_hi = 0.0;
    double min_difference = 0.0; // min over the grid of u_hi - u_lo
    double r_at_min = 0.0;
    std::size_t grid_points = 0;
};

// Checks the comparison-principle ordering u_beta2 > u_beta1 for beta2 > beta1
// on a shared log-spaced grid. Both runs must reach the target radius.
OrderingReport compare_solutions(double beta1, double beta2, double q,
                                 const ode::IntegratorControls& controls);

struct MinimalWindowOptions {
    double rel_tol = 0.01;         // pointwise agreement threshold in u
    std::size_t grid_points = 513; // log-spaced comparison grid
};

// Largest radius interval on which the two certificate-endpoint traces agree
// within rel_tol relative in u. Downstream asymptotic fits of the minimal
// solution must be restricted to (a subset of) this window.
numerics::Window minimal_window(const ThresholdCertificate& cert,
                                const ode::IntegratorControls& controls,
                                const MinimalWindowOptions& opts = {});

numerics::Window minimal_window(const ode::SolutionTrace& lo, const ode::SolutionTrace& hi,
                                const MinimalWindowOptions& opts = {});

} // namespace bilap::shooting
