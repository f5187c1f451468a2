#include "bilap/shooting.hpp"

#include "bilap/errors.hpp"

#include <algorithm>
#include <cmath>

namespace bilap::shooting {

const char* to_string(ShootingOutcome::Kind k) {
    return k == ShootingOutcome::Kind::Global ? "Global" : "Extinct";
}

ShootingOutcome classify(const ode::SolutionTrace& trace) {
    ShootingOutcome out;
    out.beta = trace.beta;
    out.q = trace.q;
    out.radius = trace.r_stop;
    switch (trace.termination) {
        case ode::Termination::ReachedTarget:
            out.kind = ShootingOutcome::Kind::Global;
            break;
        case ode::Termination::Extinction:
            out.kind = ShootingOutcome::Kind::Extinct;
            break;
        case ode::Termination::StepUnderflow:
            // Underflow occurs in practice only during the terminal blow-down.
            out.kind = ShootingOutcome::Kind::Extinct;
            out.underflow = true;
            break;
    }
    return out;
}

ShootingOutcome classify(double beta, double q, const ode::IntegratorControls& controls) {
    controls.validate();
    return classify(ode::integrate(beta, q, controls));
}

ThresholdCertificate find_beta_star(double q, std::pair<double, double> bracket, double tol,
                                    const ode::IntegratorControls& controls) {
    if (!(tol > 0.0)) throw PreconditionError("bisection tolerance must be positive");
    double lo = bracket.first;
    double hi = bracket.second;
    if (!(hi > lo)) throw InvalidBracketError("bracket endpoints out of order");

    ShootingOutcome out_lo = classify(lo, q, controls);
    ShootingOutcome out_hi = classify(hi, q, controls);
    if (out_lo.is_global())
        throw InvalidBracketError("lower bracket endpoint classifies Global");
    if (!out_hi.is_global())
        throw InvalidBracketError("upper bracket endpoint classifies Extinct");

    // Outcome monotonicity audit: a Global verdict below the highest Extinct
    // verdict would contradict the threshold structure. Bisection keeps the
    // bracket ordered, so a witness can only come from inconsistent inputs.
    double max_extinct = lo;
    double min_global = hi;
    auto record = [&](const ShootingOutcome& o) {
        if (o.is_global()) {
            if (o.beta < max_extinct) throw NonMonotoneWitnessError(o.beta, max_extinct);
            min_global = std::min(min_global, o.beta);
        } else {
            if (o.beta > min_global) throw NonMonotoneWitnessError(min_global, o.beta);
            max_extinct = std::max(max_extinct, o.beta);
        }
    };
    record(out_lo);
    record(out_hi);

    int steps = 0;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            throw NumericalError("bracket hit floating-point resolution before tol");
        const ShootingOutcome out_mid = classify(mid, q, controls);
        record(out_mid);
        if (out_mid.is_global()) {
            hi = mid;
            out_hi = out_mid;
        } else {
            lo = mid;
            out_lo = out_mid;
        }
        ++steps;
    }

    ThresholdCertificate cert;
    cert.q = q;
    cert.beta_lo = lo;
    cert.beta_hi = hi;
    cert.r_target = controls.r_target;
    cert.tol = tol;
    cert.bisection_steps = steps;
    cert.outcome_lo = out_lo;
    cert.outcome_hi = out_hi;
    return cert;
}

std::pair<double, double> auto_bracket(double q, const ode::IntegratorControls& controls) {
    double hi = 1.0;
    while (!classify(hi, q, controls).is_global()) {
        hi *= 2.0;
        if (hi > 1e9) throw NumericalError("no Global shot found up to beta = 1e9");
    }
    return {0.0, hi};
}

OrderingReport compare_solutions(double beta1, double beta2, double q,
                                 const ode::IntegratorControls& controls) {
    if (beta2 < beta1) throw PreconditionError("compare_solutions requires beta2 >= beta1");

    const ode::SolutionTrace t1 = ode::integrate(beta1, q, controls);
    if (t1.termination != ode::Termination::ReachedTarget) throw NotGlobalError(beta1);
    const ode::SolutionTrace t2 = ode::integrate(beta2, q, controls);
    if (t2.termination != ode::Termination::ReachedTarget) throw NotGlobalError(beta2);

    const double lo = std::max(t1.r_first(), t2.r_first());
    const double hi = std::min(t1.r_last(), t2.r_last());

    OrderingReport rep;
    rep.beta_lo = beta1;
    rep.beta_hi = beta2;
    rep.grid_points = 257;
    rep.min_difference = std::numeric_limits<double>::infinity();
    for (double r : numerics::log_space(lo, hi, rep.grid_points)) {
        const double d = t2.u_at(r) - t1.u_at(r);
        if (d < rep.min_difference) {
            rep.min_difference = d;
            rep.r_at_min = r;
        }
    }
    return rep;
}

numerics::Window minimal_window(const ode::SolutionTrace& lo, const ode::SolutionTrace& hi,
                                const MinimalWindowOptions& opts) {
    const double r_lo = std::max(lo.r_first(), hi.r_first());
    const double r_hi = std::min(lo.r_last(), hi.r_last());
    if (!(r_hi > r_lo)) throw EmptyWindowError();

    const std::vector<double> grid = numerics::log_space(r_lo, r_hi, opts.grid_points);
    double last_ok = 0.0;
    for (double r : grid) {
        const double ul = lo.u_at(r);
        const double uh = hi.u_at(r);
        const double rel = std::fabs(uh - ul) / std::max(std::fabs(ul), std::fabs(uh));
        if (rel < opts.rel_tol)
            last_ok = r;
        else
            break;
    }
    if (last_ok == 0.0 || last_ok <= grid.front()) throw EmptyWindowError();
    return {grid.front(), last_ok};
}

numerics::Window minimal_window(const ThresholdCertificate& cert,
                                const ode::IntegratorControls& controls,
                                const MinimalWindowOptions& opts) {
    const ode::SolutionTrace lo = ode::integrate(cert.beta_lo, cert.q, controls);
    const ode::SolutionTrace hi = ode::integrate(cert.beta_hi, cert.q, controls);
    return minimal_window(lo, hi, opts);
}

} // namespace bilap::shooting
