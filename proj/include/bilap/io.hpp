#pragma once

#include "bilap/asymptotics.hpp"
#include "bilap/modes.hpp"
#include "bilap/radial_ode.hpp"
#include "bilap/shooting.hpp"
#include "bilap/transforms.hpp"

#include <json.hpp>

#include <iosfwd>
#include <map>
#include <string>

namespace bilap::io {

inline constexpr const char* kToolName = "bilap";
inline constexpr const char* kToolVersion = "0.1.0";

// Reproducibility metadata carried by every output: tool version plus the
// parameters of the run (q, beta, tolerances, ...).
using Metadata = std::map<std::string, std::string>;

std::string format_double(double v); // >= 16 significant digits

// CSV exports. Metadata goes into leading '# key=value' lines; the header row
// and columns follow each format's contract.
void write_trace_csv(std::ostream& os, const ode::SolutionTrace& trace,
                     const Metadata& meta = {});
void write_kelvin_csv(std::ostream& os, const transforms::KelvinTrace& ktrace,
                      const Metadata& meta = {});
void write_emden_csv(std::ostream& os, const transforms::EmdenTrace& etrace,
                     const Metadata& meta = {});
void write_mode_solution_csv(std::ostream& os, const modes::ModeSolution& sol,
                             const Metadata& meta = {});

nlohmann::json meta_json(const Metadata& extra = {});
nlohmann::json outcome_json(const shooting::ShootingOutcome& outcome);
nlohmann::json certificate_json(const shooting::ThresholdCertificate& cert);
nlohmann::json regime_report_json(const asymptotics::RegimeReport& report);
nlohmann::json spectrum_json(const modes::ModeSpectrum& spectrum);

} // namespace bilap::io
