#include "bilap/radial_ode.hpp"

#include "bilap/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bilap::ode {

namespace {

using Vec4 = std::array<double, 4>;

Vec4 to_vec(const RadialState& s) { return {s.u, s.du, s.v, s.dv}; }

RadialState to_state(double r, const Vec4& y) { return {r, y[0], y[1], y[2], y[3]}; }

// Unguarded system evaluation; caller ensures r > 0 and y[0] > 0.
Vec4 system_rhs(double r, const Vec4& y, double q) {
    return {y[1], y[2] - 2.0 * y[1] / r, y[3], -std::pow(y[0], -q) - 2.0 * y[3] / r};
}

// Dormand-Prince 5(4) coefficients.
constexpr double C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9;
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
                 A64 = 49.0 / 176, A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784,
                 B6 = 11.0 / 84;
// Difference between the 5th and embedded 4th order weights.
constexpr double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920,
                 E5 = -17253.0 / 339200, E6 = 22.0 / 525, E7 = -1.0 / 40;

struct StepResult {
    Vec4 y{};
    double err = 0.0; // scaled error estimate; accept when <= 1
    bool ok = false;  // false when a stage hit u <= 0
};

// Cap on h relative to r. Keeps the sample grid log-dense even where the
// solution is polynomially smooth, which the finite-difference residual
// checks rely on.
constexpr double kMaxStepFraction = 0.25;

StepResult dopri5_step(double r, const Vec4& y, double h, double q, double abs_tol,
                       double rel_tol) {
    StepResult out;
    Vec4 k1, k2, k3, k4, k5, k6, k7, t;

    auto stage_ok = [](const Vec4& s) { return s[0] > 0.0; };

    k1 = system_rhs(r, y, q);
    for (int i = 0; i < 4; ++i) t[i] = y[i] + h * A21 * k1[i];
    if (!stage_ok(t)) return out;
    k2 = system_rhs(r + C2 * h, t, q);
    for (int i = 0; i < 4; ++i) t[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
    if (!stage_ok(t)) return out;
    k3 = system_rhs(r + C3 * h, t, q);
    for (int i = 0; i < 4; ++i) t[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
    if (!stage_ok(t)) return out;
    k4 = system_rhs(r + C4 * h, t, q);
    for (int i = 0; i < 4; ++i)
        t[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
    if (!stage_ok(t)) return out;
    k5 = system_rhs(r + C5 * h, t, q);
    for (int i = 0; i < 4; ++i)
        t[i] = y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
    if (!stage_ok(t)) return out;
    k6 = system_rhs(r + h, t, q);

    for (int i = 0; i < 4; ++i)
        out.y[i] = y[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
    if (!stage_ok(out.y)) return out;
    k7 = system_rhs(r + h, out.y, q);

    double err = 0.0;
    for (int i = 0; i < 4; ++i) {
        const double e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] +
                              E7 * k7[i]);
        const double sc = abs_tol + rel_tol * std::max(std::fabs(y[i]), std::fabs(out.y[i]));
        err += (e / sc) * (e / sc);
    }
    out.err = std::sqrt(err / 4.0);
    out.ok = true;
    return out;
}

} // namespace

const char* to_string(Termination t) {
    switch (t) {
        case Termination::ReachedTarget: return "ReachedTarget";
        case Termination::Extinction: return "Extinction";
        case Termination::StepUnderflow: return "StepUnderflow";
    }
    return "?";
}

double SolutionTrace::u_at(double r) const {
    if (samples.empty() || r < r_first() || r > r_last())
        throw PreconditionError("u_at: radius outside the trace");
    const auto it = std::lower_bound(samples.begin(), samples.end(), r,
                                     [](const RadialState& s, double x) { return s.r < x; });
    std::size_t i = static_cast<std::size_t>(it - samples.begin());
    if (i < samples.size() && samples[i].r == r) return samples[i].u;

    // cubic interpolation in log-log coordinates: growth is power-like
    // across decades, so ln u is nearly linear in ln r
    if (i == 0) i = 1;
    std::size_t first = (i >= 2) ? i - 2 : 0;
    const std::size_t count = std::min<std::size_t>(4, samples.size());
    if (first + count > samples.size()) first = samples.size() - count;

    const double x = std::log(r);
    double acc = 0.0;
    for (std::size_t a = first; a < first + count; ++a) {
        double term = std::log(samples[a].u);
        for (std::size_t b = first; b < first + count; ++b) {
            if (a == b) continue;
            term *= (x - std::log(samples[b].r)) /
                    (std::log(samples[a].r) - std::log(samples[b].r));
        }
        acc += term;
    }
    return std::exp(acc);
}

double IntegratorControls::resolved_r0() const {
    if (r0 != 0.0) return r0;
    return std::min(std::max(1e-6 * r_target, 1e-6), 1e-3);
}

void IntegratorControls::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
        throw PreconditionError("tolerances must be positive");
    if (!(r_target > 0.0)) throw PreconditionError("r_target must be positive");
    const double s0 = resolved_r0();
    if (!(s0 > 0.0)) throw ZeroRadiusError();
    if (!(s0 < r_target)) throw PreconditionError("r0 must be below r_target");
    if (s0 > 1e-3) throw PreconditionError("r0 must not exceed 1e-3");
    if (!(u_floor > 0.0) || !(u_floor < 1.0))
        throw PreconditionError("u_floor must lie in (0, 1)");
    if (max_steps <= 0) throw PreconditionError("max_steps must be positive");
}

std::array<double, 4> rhs(const RadialState& state, double q) {
    if (state.r == 0.0) throw ZeroRadiusError("rhs is singular at r = 0; use series_start");
    if (state.r < 0.0) throw PreconditionError("radius must be nonnegative");
    if (!(state.u > 0.0)) throw NonPositiveUError();
    if (!(q > 0.0)) throw PreconditionError("q must be positive");
    return system_rhs(state.r, to_vec(state), q);
}

RadialState series_start(double beta, double q, double r0) {
    if (!(r0 > 0.0)) throw ZeroRadiusError();
    if (r0 > 1e-3) throw PreconditionError("series start requires r0 <= 1e-3");
    if (!(q > 0.0)) throw PreconditionError("q must be positive");

    // u = 1 + a2 r^2 + a4 r^4 + a6 r^6, v = Lap u = b0 + b2 r^2 + b4 r^4,
    // matched order by order against Lap^2 u = -u^-q with u(0) = 1.
    const double a2 = beta / 6.0;
    const double a4 = -1.0 / 120.0;
    const double a6 = q * beta / 5040.0;
    const double b0 = beta;
    const double b2 = -1.0 / 6.0;
    const double b4 = q * beta / 120.0;

    const double r2 = r0 * r0;
    RadialState s;
    s.r = r0;
    s.u = 1.0 + r2 * (a2 + r2 * (a4 + r2 * a6));
    s.du = r0 * (2.0 * a2 + r2 * (4.0 * a4 + r2 * 6.0 * a6));
    s.v = b0 + r2 * (b2 + r2 * b4);
    s.dv = r0 * (2.0 * b2 + r2 * 4.0 * b4);
    return s;
}

SolutionTrace integrate_from(const RadialState& start, double q,
                             const IntegratorControls& controls) {
    controls.validate();
    if (!(q > 0.0)) throw PreconditionError("q must be positive");
    if (!(start.r > 0.0)) throw ZeroRadiusError();
    if (!(start.u > 0.0)) throw NonPositiveUError();

    SolutionTrace trace;
    trace.q = q;
    trace.beta = start.r <= 1e-3 ? start.v : std::numeric_limits<double>::quiet_NaN();
    trace.samples.push_back(start);

    double r = start.r;
    Vec4 y = to_vec(start);
    double h = 0.1 * start.r;
    std::int64_t steps = 0;

    const double floor_u = controls.u_floor;

    while (r < controls.r_target) {
        if (++steps > controls.max_steps) throw StepBudgetExceededError(r);

        h = std::min(h, kMaxStepFraction * r);
        if (r + h > controls.r_target) h = controls.r_target - r;

        const StepResult st = dopri5_step(r, y, h, q, controls.abs_tol, controls.rel_tol);
        const bool accepted = st.ok && std::isfinite(st.err) && st.err <= 1.0;
        if (!accepted) {
            const double shrink = (st.ok && std::isfinite(st.err))
                                      ? std::max(0.2, 0.9 * std::pow(st.err, -0.2))
                                      : 0.5;
            const double h_min = 16.0 * std::numeric_limits<double>::epsilon() * std::max(r, 1.0);
            if (h * shrink < h_min) {
                trace.termination = Termination::StepUnderflow;
                trace.r_stop = r;
                return trace;
            }
            h *= shrink;
            continue;
        }

        if (st.y[0] <= floor_u) {
            // Localize the crossing radius by bisecting the step length.
            double lo = 0.0, hi = h;
            Vec4 y_cross = st.y;
            for (int it = 0; it < 200 && (hi - lo) > controls.abs_tol; ++it) {
                const double mid = 0.5 * (lo + hi);
                const StepResult sm =
                    dopri5_step(r, y, mid, q, controls.abs_tol, controls.rel_tol);
                const bool above = sm.ok && std::isfinite(sm.y[0]) && sm.y[0] > floor_u;
                if (above) {
                    lo = mid;
                } else {
                    hi = mid;
                    if (sm.ok && std::isfinite(sm.y[0])) y_cross = sm.y;
                }
            }
            trace.termination = Termination::Extinction;
            trace.r_stop = r + hi;
            if (std::isfinite(y_cross[0]) && y_cross[0] > 0.0)
                trace.samples.push_back(to_state(r + hi, y_cross));
            return trace;
        }

        r += h;
        y = st.y;
        trace.samples.push_back(to_state(r, y));
        h *= std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(st.err, 1e-16), -0.2)));
    }

    trace.termination = Termination::ReachedTarget;
    trace.r_stop = r;
    return trace;
}

SolutionTrace integrate(double beta, double q, const IntegratorControls& controls) {
    controls.validate();
    SolutionTrace trace = integrate_from(series_start(beta, q, controls.resolved_r0()), q, controls);
    trace.beta = beta;
    return trace;
}

void ResidualProfile::finalize() {
    max_relative = 0.0;
    for (const auto& p : points)
        if (p.scale > 0.0) max_relative = std::max(max_relative, std::fabs(p.residual) / p.scale);
}

ResidualProfile residual_biharmonic(const SolutionTrace& trace,
                                    const BiharmonicResidualOptions& opts) {
    if (trace.samples.size() < 7) throw TooFewSamplesError(trace.samples.size(), 7);

    std::vector<double> rs, us;
    rs.reserve(trace.samples.size());
    us.reserve(trace.samples.size());
    for (const auto& s : trace.samples) {
        rs.push_back(s.r);
        us.push_back(s.u);
    }

    numerics::Window window{opts.window.lo > 0.0 ? opts.window.lo : rs.front(),
                            opts.window.hi > 0.0 ? opts.window.hi : rs.back()};
    if (!(window.hi > window.lo)) throw PreconditionError("residual window is empty");

    const auto derivatives =
        numerics::high_derivatives(rs, us, window, opts.spacing_factor, opts.half_width);

    ResidualProfile profile;
    for (std::size_t i = 0; i < derivatives.x.size(); ++i) {
        const double t1 = derivatives.d4[i];
        const double t2 = 4.0 * derivatives.d3[i] / derivatives.x[i];
        const double t3 = opts.with_source ? std::pow(derivatives.value[i], -trace.q) : 0.0;
        ResidualPoint p;
        p.x = derivatives.x[i];
        p.residual = t1 + t2 + t3;
        p.scale = std::max({std::fabs(t1), std::fabs(t2), std::fabs(t3)});
        profile.points.push_back(p);
    }
    if (profile.points.empty())
        throw NumericalError("no stencil fits inside the sampled range");
    profile.finalize();
    return profile;
}

} // namespace bilap::ode
