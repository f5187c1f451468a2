#include "bilap/numerics.hpp"

#include "bilap/errors.hpp"

#include <algorithm>
#include <cmath>

namespace bilap::numerics {

double Window::log_width() const {
    if (lo <= 0.0 || hi <= lo) return 0.0;
    return std::log(hi / lo);
}

Window Window::geometric_middle_half() const {
    const double ratio = hi / lo;
    return {lo * std::pow(ratio, 0.25), lo * std::pow(ratio, 0.75)};
}

Window Window::intersect(const Window& other) const {
    return {std::max(lo, other.lo), std::min(hi, other.hi)};
}

std::vector<std::vector<double>> fd_weights(double z, std::span<const double> nodes,
                                            int max_order) {
    const int n = static_cast<int>(nodes.size());
    if (n < max_order + 1)
        throw PreconditionError("fd_weights: need more nodes than the derivative order");

    // Fornberg (1988), Math. Comp. 51:699. c[j][m] accumulates the weight of
    // node j for derivative order m.
    std::vector<std::vector<double>> c(n, std::vector<double>(max_order + 1, 0.0));
    double c1 = 1.0;
    double c4 = nodes[0] - z;
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, max_order);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = nodes[i] - z;
        for (int j = 0; j < i; ++j) {
            const double c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int m = mn; m >= 1; --m)
                    c[i][m] = c1 * (m * c[i - 1][m - 1] - c5 * c[i - 1][m]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int m = mn; m >= 1; --m)
                c[j][m] = (c4 * c[j][m] - m * c[j][m - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }

    // Transpose to weights[m][j] for stencil application.
    std::vector<std::vector<double>> w(max_order + 1, std::vector<double>(n, 0.0));
    for (int j = 0; j < n; ++j)
        for (int m = 0; m <= max_order; ++m)
            w[m][j] = c[j][m];
    return w;
}

CubicInterpolant::CubicInterpolant(std::vector<double> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
    if (xs_.size() != ys_.size() || xs_.size() < 2)
        throw PreconditionError("interpolant needs at least two matching samples");
    for (std::size_t i = 1; i < xs_.size(); ++i)
        if (!(xs_[i] > xs_[i - 1]))
            throw PreconditionError("interpolant abscissae must be strictly increasing");
}

double CubicInterpolant::operator()(double x) const {
    if (x < xs_.front() || x > xs_.back())
        throw PreconditionError("interpolation point outside the sampled range");

    const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    std::size_t hi = static_cast<std::size_t>(it - xs_.begin());
    if (hi == 0) hi = 1;
    if (hi >= xs_.size()) hi = xs_.size() - 1;

    // 4-point neighborhood: two nodes each side when available.
    std::size_t first = (hi >= 2) ? hi - 2 : 0;
    std::size_t count = std::min<std::size_t>(4, xs_.size());
    if (first + count > xs_.size()) first = xs_.size() - count;

    double result = 0.0;
    for (std::size_t i = first; i < first + count; ++i) {
        double term = ys_[i];
        for (std::size_t j = first; j < first + count; ++j) {
            if (j == i) continue;
            term *= (x - xs_[j]) / (xs_[i] - xs_[j]);
        }
        result += term;
    }
    return result;
}

LineFit ols_line(std::span<const double> xs, std::span<const double> ys) {
    const std::size_t n = xs.size();
    if (n != ys.size() || n < 2)
        throw PreconditionError("ols_line needs at least two matching points");

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);

    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = xs[i] - mx;
        sxx += dx * dx;
        sxy += dx * (ys[i] - my);
    }
    if (sxx == 0.0) throw PreconditionError("ols_line: abscissae are all identical");

    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = ys[i] - fit.at(xs[i]);
        ss += d * d;
    }
    fit.rms_residual = std::sqrt(ss / static_cast<double>(n));
    return fit;
}

HighDerivatives high_derivatives(std::span<const double> xs, std::span<const double> ys,
                                 const Window& window, double spacing_factor, int half_width) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw PreconditionError("high_derivatives needs matching samples");
    if (spacing_factor < 1.0 || half_width < 2)
        throw PreconditionError("stencil must be wider than the local sample spacing");

    const CubicInterpolant interp(std::vector<double>(xs.begin(), xs.end()),
                                  std::vector<double>(ys.begin(), ys.end()));

    HighDerivatives out;
    std::vector<double> nodes(2 * half_width + 1), values(2 * half_width + 1);
    for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
        if (!window.contains(xs[i])) continue;
        const double h_local = std::max(xs[i + 1] - xs[i], xs[i] - xs[i - 1]);
        const double step = spacing_factor * h_local;
        const double lo = xs[i] - half_width * step;
        const double hi = xs[i] + half_width * step;
        if (lo < xs.front() || hi > xs.back()) continue;

        for (int j = -half_width; j <= half_width; ++j) {
            nodes[j + half_width] = xs[i] + j * step;
            values[j + half_width] = (j == 0) ? ys[i] : interp(nodes[j + half_width]);
        }
        const auto w = fd_weights(xs[i], nodes, 4);
        double d3 = 0.0, d4 = 0.0;
        for (std::size_t j = 0; j < nodes.size(); ++j) {
            d3 += w[3][j] * values[j];
            d4 += w[4][j] * values[j];
        }
        out.x.push_back(xs[i]);
        out.value.push_back(ys[i]);
        out.d3.push_back(d3);
        out.d4.push_back(d4);
    }
    return out;
}

std::vector<double> log_space(double a, double b, std::size_t n) {
    if (!(a > 0.0) || !(b > a) || n < 2)
        throw PreconditionError("log_space requires 0 < a < b and n >= 2");
    std::vector<double> out(n);
    const double la = std::log(a), lb = std::log(b);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = std::exp(la + (lb - la) * static_cast<double>(i) / static_cast<double>(n - 1));
    out.front() = a;
    out.back() = b;
    return out;
}

double rms(std::span<const double> v) {
    if (v.empty()) return 0.0;
    double ss = 0.0;
    for (double x : v) ss += x * x;
    return std::sqrt(ss / static_cast<double>(v.size()));
}

} // namespace bilap::numerics
