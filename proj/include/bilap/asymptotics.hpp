#pragma once

#include "bilap/numerics.hpp"
#include "bilap/radial_ode.hpp"
#include "bilap/shooting.hpp"

#include <optional>
#include <string>

namespace bilap::asymptotics {

enum class Regime {
    MinimalSub3,   // threshold solution, 1 < q < 3: growth r^(4/(1+q))
    MinimalQ3,     // threshold solution, q = 3: growth r log r
    MinimalSuper3, // threshold solution, q > 3: linear growth with limit L
    NonMinimal,    // beta above threshold: quadratic growth
};

const char* to_string(Regime r);

struct FitResult {
    double value = 0.0;
    double rms_residual = 0.0; // in the fitted (log) coordinates
};

// Least-squares slope of ln u vs ln r over the window.
FitResult fit_growth_exponent(const ode::SolutionTrace& trace, const numerics::Window& window);

struct Q3Fit {
    double slope = 0.0;     // coefficient of ln r in u/r
    double intercept = 0.0;
    double rel_residual = 0.0;       // rms residual / rms(u/r) for the r log r model
    double power_rel_residual = 0.0; // same quantity for the pure-power model
    bool rlogr_preferred = false;
};

// Fits u/r against ln r (the r log r growth model) and, for model selection,
// also scores the pure power model on the same data.
Q3Fit fit_q3_loglinear(const ode::SolutionTrace& trace, const numerics::Window& window);

// Extrapolated limit of u(r)/r for minimal traces with q > 3, via the OLS
// intercept against the regime's remainder model: r^-1 for q > 4, r^(3-q) for
// 3 < q < 4, and the log-corrected ln(r)/r at q = 4.
double estimate_L(const ode::SolutionTrace& trace, const numerics::Window& window);

struct RemainderFit {
    double sigma = 0.0;        // decay exponent of |u/r - L|
    double rms_residual = 0.0; // of the power-law fit, in log coordinates
    // q = 4 model selection: residual of |xi| = A ln(r)/r and the verdict.
    double log_model_rms = 0.0;
    bool log_model_preferred = false;
};

RemainderFit fit_remainder_rate(const ode::SolutionTrace& trace, double L_hat,
                                const numerics::Window& window);

struct MainConditionVerdict {
    bool pass = false;
    double slope = 0.0; // log-log slope of r^theta |u/r - L|
    double theta = 0.0;
    double margin = 0.0;
};

// Checks the decay premise |u(r)/r - L| = o(r^-theta): Pass when the fitted
// log-log slope of r^theta |u/r - L| is negative with margin.
MainConditionVerdict check_main_condition(const ode::SolutionTrace& trace, double L_hat,
                                          double theta, const numerics::Window& window,
                                          double margin = 0.05);

struct RegimeReport {
    Regime label = Regime::NonMinimal;
    double q = 0.0;
    double beta_lo = 0.0; // for minimal reports the certificate endpoints;
    double beta_hi = 0.0; // equal for non-minimal reports
    double r_target = 0.0;

    double p = 0.0; // fitted growth exponent
    double p_spread = 0.0;
    double growth_rms = 0.0;

    std::optional<double> L_hat;
    double L_spread = 0.0;
    std::optional<double> sigma;
    double sigma_spread = 0.0;
    std::optional<bool> q4_log_preferred; // only set when q = 4
    std::optional<Q3Fit> q3;

    numerics::Window growth_window{0, 0};
    numerics::Window remainder_window{0, 0};
    numerics::Window minimal_agreement{0, 0};
};

// Knobs for the minimal-regime analysis. The horizon must sit far beyond the
// fit windows: bisection at horizon R yields a pseudo-threshold whose traces
// sag off the minimal profile within a fixed fraction of R, so fits anchored
// near R are contaminated no matter how tight the bracket.
struct MinimalAnalysisOptions {
    double r_target = 0.0; // 0 = per-q default (1e5, or 3e5 for 3 < q < 4)
    double certificate_tol = 1e-9;
    double rel_tol = 1e-12;
    double abs_tol = 1e-14;
    numerics::Window growth_window{0, 0};    // 0 = default [30, r_target/100]
    numerics::Window remainder_window{0, 0}; // 0 = default, see implementation

    ode::IntegratorControls controls(double q) const;
    numerics::Window default_growth_window(double q) const;
    numerics::Window default_remainder_window(double q) const;
};

// Locates the threshold, integrates both certificate endpoints, and runs the
// regime fits on both (reporting midpoints and endpoint spreads).
RegimeReport analyze_minimal(double q, const MinimalAnalysisOptions& opts = {});

// Growth fit for an explicit beta above threshold.
RegimeReport analyze_nonminimal(double q, double beta, const ode::IntegratorControls& controls,
                                const numerics::Window& fit_window = {0, 0});

} // namespace bilap::asymptotics
