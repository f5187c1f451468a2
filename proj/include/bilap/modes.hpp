#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

namespace bilap::modes {

// Spherical-harmonic eigendata on S^2: eigenvalue of -Lap and multiplicity.
struct EigenData {
    std::int64_t lambda = 0;       // k (k + 1)
    std::int64_t multiplicity = 0; // 2 k + 1
};

EigenData eigen_data(int k);

// Characteristic quartic of the mode equation in the Emden-Fowler variable,
//   mu^4 + 2 mu^3 - (1 + 2 lambda_k) mu^2 - 2 (1 + lambda_k) mu
//     + lambda_k (lambda_k - 2),
// and its counterpart for the once-divided modes (tilde variant, obtained by
// mu -> -mu). Both evaluated by Horner for the root-residual checks.
double quartic(int k, double mu);
double quartic_tilde(int k, double mu);

// Closed-form roots {-k-2, -k, k-1, k+1}, ascending. Requires k >= 1.
std::array<double, 4> char_roots(int k);
// Closed-form roots {-k-1, -k+1, k, k+2}, ascending. Requires k >= 1.
std::array<double, 4> char_roots_tilde(int k);

// Largest relative residual of the closed-form roots in their quartic,
// normalized by the largest polynomial coefficient.
double max_root_residual(int k);

struct ModeSpectrum {
    int k = 0;
    EigenData eigen;
    std::array<double, 4> roots_mu{};
    std::array<double, 4> roots_mu_tilde{};
};

ModeSpectrum make_spectrum(int k);

// Bounded-at-infinity solution of the constant-coefficient mode equation with
// exponential forcing A e^{-a t}: the two decaying homogeneous modes with
// unit coefficients plus the particular solution A e^{-a t} / P_k(-a).
struct ModeSolution {
    int k = 0;
    double amplitude = 0.0;
    double decay = 0.0; // forcing rate a
    std::vector<double> t;
    std::vector<double> z;
    double fitted_rate = 0.0; // decay rate fitted from ln |z| on the tail
};

struct ModeSolveOptions {
    std::size_t grid_points = 1601;
    double tail_fraction = 0.4; // trailing fraction of the grid used for the rate fit
};

// k >= 2 case. Throws ResonanceError when |P_k(-a)| < 1e-8.
ModeSolution solve_mode_ode(int k, double amplitude, double a, double t0, double t1,
                            const ModeSolveOptions& opts = {});

// k = 1 case: root set {-3, -1, 0, 2}; the canonical bounded solution keeps
// only the decaying modes e^{-3t} and e^{-t}. Forcing must decay faster than
// e^{-t} (NonIntegrableForcingError otherwise).
ModeSolution solve_mode_ode_k1(double amplitude, double a, double t0, double t1,
                               const ModeSolveOptions& opts = {});

struct TailSum {
    double sum = 0.0;   // sum_{k=2}^{k_max} k (2k+1) e^{-k delta}
    double ratio = 0.0; // sum / e^{-2 delta}; tends to 10 as delta grows
};

TailSum tail_sum(double delta, int k_max);

struct RayleighQuotients {
    double grad = 0.0;  // sum lambda_k c^2 / sum c^2   (>= 2)
    double bilap = 0.0; // sum lambda_k^2 c^2 / sum c^2 (>= 4)
};

// Spectral Rayleigh quotients of an expansion orthogonal to the constant
// mode; keys are (k, j) with k >= 1 and 1 <= j <= 2k+1.
RayleighQuotients poincare_check(const std::map<std::pair<int, int>, double>& coefficients);

} // namespace bilap::modes
