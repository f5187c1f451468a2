#include "bilap/asymptotics.hpp"

#include "bilap/errors.hpp"

#include <algorithm>
#include <cmath>

namespace bilap::asymptotics {

namespace {

struct LogLogSamples {
    std::vector<double> x; // ln r
    std::vector<double> y; // ln u
};

// Trace samples falling inside the window, in log-log coordinates. Fits work
// on the raw samples directly; interpolation would blur the exact synthetic
// cases.
LogLogSamples collect(const ode::SolutionTrace& trace, const numerics::Window& window) {
    if (trace.samples.size() < 2) throw TooFewSamplesError(trace.samples.size(), 2);
    const double lo = std::max(window.lo, trace.r_first());
    const double hi = std::min(window.hi, trace.r_last());
    if (!(lo > 0.0) || !(hi > lo))
        throw WindowTooSmallError("fit window lies outside the trace");

    LogLogSamples out;
    for (const auto& s : trace.samples) {
        if (s.r < lo || s.r > hi) continue;
        if (!(s.u > 0.0)) throw PreconditionError("u must be positive on the fit window");
        out.x.push_back(std::log(s.r));
        out.y.push_back(std::log(s.u));
    }
    if (out.x.size() < 8) throw WindowTooSmallError("fewer than 8 samples in the fit window");
    return out;
}

double midpoint(double a, double b) { return 0.5 * (a + b); }

void require_sane_exponent(double p) {
    if (!(p > 0.0) || !(p < 3.0))
        throw NumericalError("fitted growth exponent " + std::to_string(p) +
                             " outside the admissible range (0, 3)");
}

} // namespace

const char* to_string(Regime r) {
    switch (r) {
        case Regime::MinimalSub3: return "MinimalSub3";
        case Regime::MinimalQ3: return "MinimalQ3";
        case Regime::MinimalSuper3: return "MinimalSuper3";
        case Regime::NonMinimal: return "NonMinimal";
    }
    return "?";
}

FitResult fit_growth_exponent(const ode::SolutionTrace& trace, const numerics::Window& window) {
    const LogLogSamples s = collect(trace, window);
    const numerics::LineFit fit = numerics::ols_line(s.x, s.y);
    return {fit.slope, fit.rms_residual};
}

Q3Fit fit_q3_loglinear(const ode::SolutionTrace& trace, const numerics::Window& window) {
    const LogLogSamples s = collect(trace, window);
    if (s.x.back() - s.x.front() < 0.5)
        throw WindowTooSmallError("q=3 model fit needs at least half a decade");

    std::vector<double> w(s.x.size());
    for (std::size_t i = 0; i < s.x.size(); ++i) w[i] = std::exp(s.y[i] - s.x[i]);

    Q3Fit out;
    const numerics::LineFit model = numerics::ols_line(s.x, w);
    out.slope = model.slope;
    out.intercept = model.intercept;
    const double w_rms = numerics::rms(w);
    out.rel_residual = w_rms > 0.0 ? model.rms_residual / w_rms : 0.0;

    // Pure-power alternative scored on the same u/r values.
    const numerics::LineFit power = numerics::ols_line(s.x, s.y);
    double ss = 0.0;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
        const double predicted = std::exp(power.at(s.x[i]) - s.x[i]);
        const double d = w[i] - predicted;
        ss += d * d;
    }
    out.power_rel_residual =
        w_rms > 0.0 ? std::sqrt(ss / static_cast<double>(s.x.size())) / w_rms : 0.0;
    out.rlogr_preferred = out.rel_residual < out.power_rel_residual;
    return out;
}

double estimate_L(const ode::SolutionTrace& trace, const numerics::Window& window) {
    if (!(trace.q > 3.0))
        throw WrongRegimeError("estimate_L applies to minimal traces with q > 3");

    const LogLogSamples s = collect(trace, window);
    std::vector<double> phi(s.x.size()), w(s.x.size());
    for (std::size_t i = 0; i < s.x.size(); ++i) {
        const double r = std::exp(s.x[i]);
        w[i] = std::exp(s.y[i] - s.x[i]);
        if (trace.q > 4.0)
            phi[i] = 1.0 / r;
        else if (trace.q < 4.0)
            phi[i] = std::pow(r, 3.0 - trace.q);
        else
            phi[i] = std::log(r) / r;
    }
    return numerics::ols_line(phi, w).intercept;
}

RemainderFit fit_remainder_rate(const ode::SolutionTrace& trace, double L_hat,
                                const numerics::Window& window) {
    if (!(trace.q > 3.0))
        throw WrongRegimeError("remainder rates apply to minimal traces with q > 3");
    if (!(L_hat > 0.0)) throw NonPositiveLError();

    const LogLogSamples s = collect(trace, window);
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
        const double xi = std::exp(s.y[i] - s.x[i]) - L_hat;
        if (std::fabs(xi) < 1e-14) continue;
        xs.push_back(s.x[i]);
        ys.push_back(std::log(std::fabs(xi)));
    }
    if (xs.size() < 8) throw WindowTooSmallError("too few usable remainder samples");

    RemainderFit out;
    const numerics::LineFit power = numerics::ols_line(xs, ys);
    out.sigma = -power.slope;
    out.rms_residual = power.rms_residual;

    if (trace.q == 4.0) {
        // One-parameter log-corrected model |xi| = A ln(r) / r.
        double mean = 0.0;
        std::vector<double> dev;
        dev.reserve(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (!(xs[i] > 0.0)) continue;
            dev.push_back(ys[i] - (std::log(xs[i]) - xs[i]));
        }
        for (double d : dev) mean += d;
        mean /= static_cast<double>(dev.size());
        double ss = 0.0;
        for (double d : dev) ss += (d - mean) * (d - mean);
        out.log_model_rms = std::sqrt(ss / static_cast<double>(dev.size()));
        out.log_model_preferred = out.log_model_rms < out.rms_residual;
    }
    return out;
}

MainConditionVerdict check_main_condition(const ode::SolutionTrace& trace, double L_hat,
                                          double theta, const numerics::Window& window,
                                          double margin) {
    if (!(theta > 0.0) || !(theta < 1.0))
        throw PreconditionError("theta must lie in (0, 1)");
    if (!(trace.q > 3.0))
        throw WrongRegimeError("the decay condition applies to q > 3");

    const LogLogSamples s = collect(trace, window);
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
        const double xi = std::exp(s.y[i] - s.x[i]) - L_hat;
        if (std::fabs(xi) < 1e-14) continue;
        xs.push_back(s.x[i]);
        ys.push_back(theta * s.x[i] + std::log(std::fabs(xi)));
    }
    if (xs.size() < 8) throw WindowTooSmallError("too few usable samples");

    MainConditionVerdict v;
    v.theta = theta;
    v.margin = margin;
    v.slope = numerics::ols_line(xs, ys).slope;
    v.pass = v.slope < -margin;
    return v;
}

ode::IntegratorControls MinimalAnalysisOptions::controls(double q) const {
    ode::IntegratorControls c;
    c.rel_tol = rel_tol;
    c.abs_tol = abs_tol;
    c.r_target = r_target > 0.0 ? r_target : (q > 3.0 && q < 4.0 ? 3e5 : 1e5);
    return c;
}

numerics::Window MinimalAnalysisOptions::default_growth_window(double q) const {
    const double rt = controls(q).r_target;
    return {30.0, rt / 100.0};
}

numerics::Window MinimalAnalysisOptions::default_remainder_window(double q) const {
    const double rt = controls(q).r_target;
    // The slowly decaying r^(3-q) remainder for 3 < q < 4 needs a window
    // further out; for q >= 4 the r^-1 signal fades under the horizon sag
    // beyond rt/300.
    if (q < 4.0) return {100.0, rt / 300.0};
    return {30.0, rt / 300.0};
}

RegimeReport analyze_minimal(double q, const MinimalAnalysisOptions& opts) {
    const ode::IntegratorControls controls = opts.controls(q);
    const auto bracket = shooting::auto_bracket(q, controls);
    const shooting::ThresholdCertificate cert =
        shooting::find_beta_star(q, bracket, opts.certificate_tol, controls);

    const ode::SolutionTrace lo = ode::integrate(cert.beta_lo, q, controls);
    const ode::SolutionTrace hi = ode::integrate(cert.beta_hi, q, controls);
    const numerics::Window agreement = shooting::minimal_window(lo, hi);

    RegimeReport rep;
    rep.q = q;
    rep.beta_lo = cert.beta_lo;
    rep.beta_hi = cert.beta_hi;
    rep.r_target = controls.r_target;
    rep.minimal_agreement = agreement;

    numerics::Window growth =
        (opts.growth_window.hi > 0.0 ? opts.growth_window : opts.default_growth_window(q))
            .intersect(agreement);
    if (growth.log_width() < 1.0) growth = agreement.geometric_middle_half();
    rep.growth_window = growth;

    const FitResult p_lo = fit_growth_exponent(lo, growth);
    const FitResult p_hi = fit_growth_exponent(hi, growth);
    rep.p = midpoint(p_lo.value, p_hi.value);
    rep.p_spread = std::fabs(p_hi.value - p_lo.value);
    rep.growth_rms = std::max(p_lo.rms_residual, p_hi.rms_residual);
    require_sane_exponent(rep.p);

    if (q < 3.0) {
        rep.label = Regime::MinimalSub3;
    } else if (q == 3.0) {
        rep.label = Regime::MinimalQ3;
        rep.q3 = fit_q3_loglinear(hi, growth);
    } else {
        rep.label = Regime::MinimalSuper3;
        numerics::Window rem =
            (opts.remainder_window.hi > 0.0 ? opts.remainder_window
                                            : opts.default_remainder_window(q))
                .intersect(agreement);
        if (rem.log_width() < 1.0) rem = growth;
        rep.remainder_window = rem;

        const double L_lo = estimate_L(lo, rem);
        const double L_hi = estimate_L(hi, rem);
        rep.L_hat = midpoint(L_lo, L_hi);
        rep.L_spread = std::fabs(L_hi - L_lo);

        const RemainderFit s_lo = fit_remainder_rate(lo, L_lo, rem);
        const RemainderFit s_hi = fit_remainder_rate(hi, L_hi, rem);
        rep.sigma = midpoint(s_lo.sigma, s_hi.sigma);
        rep.sigma_spread = std::fabs(s_hi.sigma - s_lo.sigma);
        if (q == 4.0) rep.q4_log_preferred = s_hi.log_model_preferred;
    }
    return rep;
}

RegimeReport analyze_nonminimal(double q, double beta, const ode::IntegratorControls& controls,
                                const numerics::Window& fit_window) {
    const ode::SolutionTrace trace = ode::integrate(beta, q, controls);
    if (trace.termination != ode::Termination::ReachedTarget) throw NotGlobalError(beta);

    numerics::Window window = fit_window;
    if (!(window.hi > 0.0))
        window = {controls.r_target / 100.0, controls.r_target / 2.0};
    window = window.intersect({trace.r_first(), trace.r_last()});

    RegimeReport rep;
    rep.label = Regime::NonMinimal;
    rep.q = q;
    rep.beta_lo = beta;
    rep.beta_hi = beta;
    rep.r_target = controls.r_target;
    rep.growth_window = window;

    const FitResult p = fit_growth_exponent(trace, window);
    rep.p = p.value;
    rep.growth_rms = p.rms_residual;
    require_sane_exponent(rep.p);
    return rep;
}

} // namespace bilap::asymptotics
