#include "bilap/modes.hpp"

#include "bilap/errors.hpp"
#include "bilap/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace bilap::modes {

namespace {

void require_k_at_least(int k, int min) {
    if (k < min)
        throw PreconditionError("harmonic index k must be >= " + std::to_string(min));
}

double lambda_of(int k) { return static_cast<double>(k) * (k + 1.0); }

// Largest coefficient magnitude of either quartic, for relative residuals.
double coefficient_scale(int k) {
    const double l = lambda_of(k);
    return std::max({1.0, 2.0, 1.0 + 2.0 * l, 2.0 * (1.0 + l), std::fabs(l * (l - 2.0))});
}

// Decay-rate fit on the trailing window of ln |z|; sign changes inside the
// window are skipped past so the log is well defined.
double fit_tail_rate(const std::vector<double>& t, const std::vector<double>& z,
                     double tail_fraction) {
    const std::size_t n = t.size();
    std::size_t start = static_cast<std::size_t>(static_cast<double>(n) * (1.0 - tail_fraction));
    if (start + 8 > n) start = n >= 8 ? n - 8 : 0;

    for (std::size_t i = std::max<std::size_t>(start, 1); i < n; ++i)
        if ((z[i] > 0.0) != (z[i - 1] > 0.0)) start = std::min(n - 2, i + 1);

    std::vector<double> xs, ys;
    for (std::size_t i = start; i < n; ++i) {
        const double a = std::fabs(z[i]);
        if (a < 1e-290) continue;
        xs.push_back(t[i]);
        ys.push_back(std::log(a));
    }
    if (xs.size() < 4) throw NumericalError("tail too short to fit a decay rate");
    return -numerics::ols_line(xs, ys).slope;
}

ModeSolution build_solution(int k, double amplitude, double a,
                            const std::array<double, 2>& homogeneous_rates, double t0,
                            double t1, const ModeSolveOptions& opts) {
    if (!(t1 > t0)) throw PreconditionError("need t1 > t0");
    if (opts.grid_points < 16) throw PreconditionError("grid too coarse");

    double particular = 0.0;
    if (amplitude != 0.0) {
        const double p = quartic(k, -a);
        if (std::fabs(p) < 1e-8) throw ResonanceError(k, a);
        particular = amplitude / p;
    }

    ModeSolution sol;
    sol.k = k;
    sol.amplitude = amplitude;
    sol.decay = a;
    sol.t.resize(opts.grid_points);
    sol.z.resize(opts.grid_points);
    for (std::size_t i = 0; i < opts.grid_points; ++i) {
        const double t =
            t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(opts.grid_points - 1);
        sol.t[i] = t;
        double z = std::exp(-homogeneous_rates[0] * t) + std::exp(-homogeneous_rates[1] * t);
        if (amplitude != 0.0) z += particular * std::exp(-a * t);
        sol.z[i] = z;
    }
    sol.fitted_rate = fit_tail_rate(sol.t, sol.z, opts.tail_fraction);
    return sol;
}

} // namespace

EigenData eigen_data(int k) {
    require_k_at_least(k, 0);
    const auto kk = static_cast<std::int64_t>(k);
    return {kk * (kk + 1), 2 * kk + 1};
}

double quartic(int k, double mu) {
    require_k_at_least(k, 1);
    const double l = lambda_of(k);
    return (((mu + 2.0) * mu - (1.0 + 2.0 * l)) * mu - 2.0 * (1.0 + l)) * mu + l * (l - 2.0);
}

double quartic_tilde(int k, double mu) {
    require_k_at_least(k, 1);
    const double l = lambda_of(k);
    return (((mu - 2.0) * mu - (1.0 + 2.0 * l)) * mu + 2.0 * (1.0 + l)) * mu + l * (l - 2.0);
}

std::array<double, 4> char_roots(int k) {
    require_k_at_least(k, 1);
    const double kd = k;
    const std::array<double, 4> roots{-kd - 2.0, -kd, kd - 1.0, kd + 1.0};
    const double scale = coefficient_scale(k);
    for (double mu : roots)
        if (std::fabs(quartic(k, mu)) / scale >= 1e-12)
            throw NumericalError("closed-form root fails its quartic");
    return roots;
}

std::array<double, 4> char_roots_tilde(int k) {
    require_k_at_least(k, 1);
    const double kd = k;
    const std::array<double, 4> roots{-kd - 1.0, -kd + 1.0, kd, kd + 2.0};
    const double scale = coefficient_scale(k);
    for (double mu : roots)
        if (std::fabs(quartic_tilde(k, mu)) / scale >= 1e-12)
            throw NumericalError("closed-form root fails its quartic");
    return roots;
}

double max_root_residual(int k) {
    const double scale = coefficient_scale(k);
    double worst = 0.0;
    for (double mu : char_roots(k)) worst = std::max(worst, std::fabs(quartic(k, mu)) / scale);
    for (double mu : char_roots_tilde(k))
        worst = std::max(worst, std::fabs(quartic_tilde(k, mu)) / scale);
    return worst;
}

ModeSpectrum make_spectrum(int k) {
    require_k_at_least(k, 1);
    return {k, eigen_data(k), char_roots(k), char_roots_tilde(k)};
}

ModeSolution solve_mode_ode(int k, double amplitude, double a, double t0, double t1,
                            const ModeSolveOptions& opts) {
    require_k_at_least(k, 2);
    if (amplitude != 0.0 && !(a > 0.0))
        throw PreconditionError("forcing decay rate must be positive");
    // Decaying homogeneous modes e^{-(k+2)t} and e^{-kt}.
    return build_solution(k, amplitude, a, {static_cast<double>(k) + 2.0, static_cast<double>(k)},
                          t0, t1, opts);
}

ModeSolution solve_mode_ode_k1(double amplitude, double a, double t0, double t1,
                               const ModeSolveOptions& opts) {
    if (amplitude != 0.0 && !(a > 1.0)) throw NonIntegrableForcingError(a);
    // Root set {-3, -1, 0, 2}: keep e^{-3t} and e^{-t}, drop the constant and
    // growing modes.
    return build_solution(1, amplitude, a, {3.0, 1.0}, t0, t1, opts);
}

TailSum tail_sum(double delta, int k_max) {
    if (!(delta > 0.0)) throw PreconditionError("delta must be positive");
    if (k_max < 2) throw PreconditionError("k_max must be at least 2");

    TailSum out;
    for (int k = k_max; k >= 2; --k) {
        const double kd = k;
        out.sum += kd * (2.0 * kd + 1.0) * std::exp(-kd * delta);
    }
    out.ratio = out.sum * std::exp(2.0 * delta);
    return out;
}

RayleighQuotients poincare_check(const std::map<std::pair<int, int>, double>& coefficients) {
    if (coefficients.empty()) throw EmptyCoefficientsError();

    double mass = 0.0, grad = 0.0, bilap = 0.0;
    for (const auto& [key, c] : coefficients) {
        const auto [k, j] = key;
        if (k == 0) throw ContainsK0Error();
        require_k_at_least(k, 1);
        if (j < 1 || j > 2 * k + 1)
            throw PreconditionError("mode index j outside 1..2k+1");
        const double l = lambda_of(k);
        mass += c * c;
        grad += l * c * c;
        bilap += l * l * c * c;
    }
    if (mass == 0.0) throw PreconditionError("all coefficients vanish");
    return {grad / mass, bilap / mass};
}

} // namespace bilap::modes
