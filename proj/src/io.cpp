#include "bilap/io.hpp"

#include <cstdio>
#include <ostream>

namespace bilap::io {

namespace {

void write_meta_lines(std::ostream& os, const Metadata& meta) {
    os << "# tool=" << kToolName << " version=" << kToolVersion << "\n";
    for (const auto& [key, value] : meta) os << "# " << key << "=" << value << "\n";
}

} // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_trace_csv(std::ostream& os, const ode::SolutionTrace& trace, const Metadata& meta) {
    Metadata m = meta;
    m["q"] = format_double(trace.q);
    m["beta"] = format_double(trace.beta);
    m["termination"] = ode::to_string(trace.termination);
    m["r_stop"] = format_double(trace.r_stop);
    write_meta_lines(os, m);
    os << "r,u,du,v,dv\n";
    for (const auto& s : trace.samples)
        os << format_double(s.r) << ',' << format_double(s.u) << ',' << format_double(s.du)
           << ',' << format_double(s.v) << ',' << format_double(s.dv) << '\n';
}

void write_kelvin_csv(std::ostream& os, const transforms::KelvinTrace& ktrace,
                      const Metadata& meta) {
    Metadata m = meta;
    m["q"] = format_double(ktrace.q);
    m["L"] = format_double(ktrace.L);
    write_meta_lines(os, m);
    os << "s,vbar\n";
    for (const auto& s : ktrace.samples)
        os << format_double(s.s) << ',' << format_double(s.vbar) << '\n';
}

void write_emden_csv(std::ostream& os, const transforms::EmdenTrace& etrace,
                     const Metadata& meta) {
    Metadata m = meta;
    m["q"] = format_double(etrace.q);
    m["L"] = format_double(etrace.L);
    write_meta_lines(os, m);
    os << "t,zbar\n";
    for (const auto& s : etrace.samples)
        os << format_double(s.t) << ',' << format_double(s.zbar) << '\n';
}

void write_mode_solution_csv(std::ostream& os, const modes::ModeSolution& sol,
                             const Metadata& meta) {
    Metadata m = meta;
    m["k"] = std::to_string(sol.k);
    m["amplitude"] = format_double(sol.amplitude);
    m["a"] = format_double(sol.decay);
    m["fitted_rate"] = format_double(sol.fitted_rate);
    write_meta_lines(os, m);
    os << "t,z\n";
    for (std::size_t i = 0; i < sol.t.size(); ++i)
        os << format_double(sol.t[i]) << ',' << format_double(sol.z[i]) << '\n';
}

nlohmann::json meta_json(const Metadata& extra) {
    nlohmann::json j;
    j["tool"] = kToolName;
    j["version"] = kToolVersion;
    for (const auto& [key, value] : extra) j[key] = value;
    return j;
}

nlohmann::json outcome_json(const shooting::ShootingOutcome& outcome) {
    nlohmann::json j;
    j["kind"] = shooting::to_string(outcome.kind);
    j["beta"] = outcome.beta;
    j["q"] = outcome.q;
    j[outcome.is_global() ? "r_reached" : "r_ext"] = outcome.radius;
    if (outcome.underflow) j["underflow"] = true;
    return j;
}

nlohmann::json certificate_json(const shooting::ThresholdCertificate& cert) {
    nlohmann::json j;
    j["q"] = cert.q;
    j["beta_lo"] = cert.beta_lo;
    j["beta_hi"] = cert.beta_hi;
    j["width"] = cert.width();
    j["beta_star"] = cert.midpoint();
    j["r_target"] = cert.r_target;
    j["tol"] = cert.tol;
    j["bisection_steps"] = cert.bisection_steps;
    j["outcomes"] = nlohmann::json::array({outcome_json(cert.outcome_lo),
                                           outcome_json(cert.outcome_hi)});
    return j;
}

nlohmann::json regime_report_json(const asymptotics::RegimeReport& report) {
    nlohmann::json j;
    j["label"] = asymptotics::to_string(report.label);
    j["q"] = report.q;
    j["beta_lo"] = report.beta_lo;
    j["beta_hi"] = report.beta_hi;
    j["r_target"] = report.r_target;
    j["p"] = report.p;
    j["p_spread"] = report.p_spread;
    j["growth_rms"] = report.growth_rms;
    j["growth_window"] = {report.growth_window.lo, report.growth_window.hi};
    if (report.L_hat) {
        j["L_hat"] = *report.L_hat;
        j["L_spread"] = report.L_spread;
    }
    if (report.sigma) {
        j["sigma"] = *report.sigma;
        j["sigma_spread"] = report.sigma_spread;
        j["remainder_window"] = {report.remainder_window.lo, report.remainder_window.hi};
    }
    if (report.q4_log_preferred) j["q4_log_preferred"] = *report.q4_log_preferred;
    if (report.q3) {
        j["q3_slope"] = report.q3->slope;
        j["q3_rel_residual"] = report.q3->rel_residual;
        j["q3_power_rel_residual"] = report.q3->power_rel_residual;
        j["q3_rlogr_preferred"] = report.q3->rlogr_preferred;
    }
    if (report.minimal_agreement.hi > 0.0)
        j["minimal_window"] = {report.minimal_agreement.lo, report.minimal_agreement.hi};
    return j;
}

nlohmann::json spectrum_json(const modes::ModeSpectrum& spectrum) {
    nlohmann::json j;
    j["k"] = spectrum.k;
    j["lambda"] = spectrum.eigen.lambda;
    j["multiplicity"] = spectrum.eigen.multiplicity;
    j["roots_mu"] = spectrum.roots_mu;
    j["roots_mu_tilde"] = spectrum.roots_mu_tilde;
    return j;
}

} // namespace bilap::io
