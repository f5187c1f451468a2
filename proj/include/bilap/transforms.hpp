#pragma once

#include "bilap/numerics.hpp"
#include "bilap/radial_ode.hpp"

#include <utility>
#include <vector>

namespace bilap::transforms {

// Kelvin transform of a radial trace: s = 1/r, vbar(s) = u(r)/r - L.
// Samples stay in trace order, so s is strictly decreasing.
struct KelvinTrace {
    struct Sample {
        double s = 0.0;
        double vbar = 0.0;
    };
    std::vector<Sample> samples;
    double L = 0.0;
    double q = 0.0;
};

// Emden-Fowler change of variables: t = -ln s, zbar(t) = vbar(s).
// Samples in increasing t.
struct EmdenTrace {
    struct Sample {
        double t = 0.0;
        double zbar = 0.0;
    };
    std::vector<Sample> samples;
    double L = 0.0;
    double q = 0.0;
};

// Pointwise map onto inverted-radius coordinates; only samples with r >= 1
// (s <= 1) are admitted. Requires a trace that reached its target radius.
KelvinTrace kelvin(const ode::SolutionTrace& trace, double L);

struct AvgOdeResidualOptions {
    bool with_source = true;     // include the s^(q-7) (vbar + L)^-q term
    double spacing_factor = 4.0; // stencil spacing over local sample spacing
    int half_width = 4;
    numerics::Window window{0, 0}; // window in s; {0,0} = full usable range
};

// Residual of the transformed radial-average equation
//   vbar'''' + 4 vbar'''/s + s^(q-7) (vbar + L)^-q = 0
// evaluated from the samples alone: locally uniform stencils filled by cubic
// interpolation, exact on polynomials in s. The kernel members {1, s, s^2}
// with the source removed give zero residual to rounding.
ode::ResidualProfile residual_avg_ode(const KelvinTrace& ktrace,
                                      const AvgOdeResidualOptions& opts = {});

EmdenTrace emden(const KelvinTrace& ktrace);

// xi(r) = u(r)/r - L, the radial deviation from linear growth. Identical to
// the Kelvin values under s = 1/r.
std::vector<std::pair<double, double>> extract_xi(const ode::SolutionTrace& trace, double L);

} // namespace bilap::transforms
