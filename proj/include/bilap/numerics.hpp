#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace bilap::numerics {

// Closed radius interval used for fit and residual windows.
struct Window {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double x) const { return x >= lo && x <= hi; }
    double log_width() const;
    // Sub-interval covering the geometric middle half, e.g. [1, 10000] -> [10, 1000].
    Window geometric_middle_half() const;
    Window intersect(const Window& other) const;
};

// Finite-difference weights on arbitrarily spaced nodes (Fornberg's recursion).
// Returns weights[m][j] such that f^(m)(z) ~= sum_j weights[m][j] * f(nodes[j])
// for every derivative order m = 0..max_order. Exact for polynomials of degree
// <= nodes.size() - 1, which is what makes the stencil annihilation checks in
// the residual operators exact to rounding.
std::vector<std::vector<double>> fd_weights(double z, std::span<const double> nodes,
                                            int max_order);

// Local cubic (4-point Lagrange) interpolation on a strictly increasing grid.
// Evaluation outside [xs.front(), xs.back()] is refused.
class CubicInterpolant {
public:
    CubicInterpolant(std::vector<double> xs, std::vector<double> ys);

    double operator()(double x) const;
    double x_min() const { return xs_.front(); }
    double x_max() const { return xs_.back(); }

private:
    std::vector<double> xs_;
    std::vector<double> ys_;
};

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms_residual = 0.0;

    double at(double x) const { return slope * x + intercept; }
};

// Third and fourth derivatives of scattered data, evaluated at the source
// points: each evaluation uses a locally uniform stencil (spacing a fixed
// multiple of the local sample spacing) filled by cubic interpolation.
// Uniform symmetric stencils keep known error constants and annihilate
// polynomials up to the stencil degree exactly.
struct HighDerivatives {
    std::vector<double> x;
    std::vector<double> value; // source value at x
    std::vector<double> d3;
    std::vector<double> d4;
};

HighDerivatives high_derivatives(std::span<const double> xs, std::span<const double> ys,
                                 const Window& window, double spacing_factor = 4.0,
                                 int half_width = 3);

// Ordinary least squares line through (x_i, y_i).
LineFit ols_line(std::span<const double> xs, std::span<const double> ys);

// n points from a to b inclusive, geometrically spaced. Requires 0 < a < b, n >= 2.
std::vector<double> log_space(double a, double b, std::size_t n);

double rms(std::span<const double> v);

} // namespace bilap::numerics
