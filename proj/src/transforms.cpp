#include "bilap/transforms.hpp"

#include "bilap/errors.hpp"

#include <algorithm>
#include <cmath>

namespace bilap::transforms {

KelvinTrace kelvin(const ode::SolutionTrace& trace, double L) {
    if (!(L > 0.0)) throw NonPositiveLError();

    KelvinTrace kt;
    kt.L = L;
    kt.q = trace.q;
    for (const auto& sample : trace.samples) {
        if (sample.r < 1.0) continue;
        kt.samples.push_back({1.0 / sample.r, sample.u / sample.r - L});
    }
    return kt;
}

ode::ResidualProfile residual_avg_ode(const KelvinTrace& ktrace,
                                      const AvgOdeResidualOptions& opts) {
    if (ktrace.samples.size() < 9) throw TooFewSamplesError(ktrace.samples.size(), 9);

    // Samples arrive with s decreasing; differentiate on ascending s.
    std::vector<double> ss(ktrace.samples.size()), vs(ktrace.samples.size());
    for (std::size_t i = 0; i < ktrace.samples.size(); ++i) {
        const auto& smp = ktrace.samples[ktrace.samples.size() - 1 - i];
        ss[i] = smp.s;
        vs[i] = smp.vbar;
    }
    for (std::size_t i = 1; i < ss.size(); ++i)
        if (!(ss[i] > ss[i - 1]))
            throw PreconditionError("Kelvin samples must have strictly monotone s");

    numerics::Window window{opts.window.lo > 0.0 ? opts.window.lo : ss.front(),
                            opts.window.hi > 0.0 ? opts.window.hi : ss.back()};
    if (!(window.hi > window.lo)) throw PreconditionError("residual window is empty");

    const auto derivatives =
        numerics::high_derivatives(ss, vs, window, opts.spacing_factor, opts.half_width);

    ode::ResidualProfile profile;
    for (std::size_t i = 0; i < derivatives.x.size(); ++i) {
        const double s = derivatives.x[i];
        const double t1 = derivatives.d4[i];
        const double t2 = 4.0 * derivatives.d3[i] / s;
        double t3 = 0.0;
        if (opts.with_source) {
            const double base = derivatives.value[i] + ktrace.L;
            if (!(base > 0.0))
                throw NumericalError("vbar + L must stay positive to evaluate the source");
            t3 = std::pow(s, ktrace.q - 7.0) * std::pow(base, -ktrace.q);
        }
        ode::ResidualPoint p;
        p.x = s;
        p.residual = t1 + t2 + t3;
        p.scale = std::max({std::fabs(t1), std::fabs(t2), std::fabs(t3)});
        profile.points.push_back(p);
    }
    if (profile.points.empty())
        throw NumericalError("no stencil fits inside the sampled range");
    profile.finalize();
    return profile;
}

EmdenTrace emden(const KelvinTrace& ktrace) {
    EmdenTrace et;
    et.L = ktrace.L;
    et.q = ktrace.q;
    // Kelvin order is s decreasing, so t = -ln s come out increasing.
    for (const auto& smp : ktrace.samples) {
        if (!(smp.s > 0.0) || smp.s > 1.0) throw SOutOfRangeError(smp.s);
        et.samples.push_back({-std::log(smp.s), smp.vbar});
        if (et.samples.size() > 1 &&
            !(et.samples.back().t > et.samples[et.samples.size() - 2].t))
            throw PreconditionError("Kelvin samples must have strictly decreasing s");
    }
    return et;
}

std::vector<std::pair<double, double>> extract_xi(const ode::SolutionTrace& trace, double L) {
    if (!(L > 0.0)) throw NonPositiveLError();
    std::vector<std::pair<double, double>> xi;
    xi.reserve(trace.samples.size());
    for (const auto& sample : trace.samples)
        xi.emplace_back(sample.r, sample.u / sample.r - L);
    return xi;
}

} // namespace bilap::transforms
