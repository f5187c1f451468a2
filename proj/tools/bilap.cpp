// Command-line driver for the radial biharmonic shooting laboratory.
//
// Subcommands: shoot, beta-star, classify-regime, verify-transform, modes,
// sweep. Exit codes: 0 ok, 2 usage or precondition violation, 3 numerical
// failure. Every JSON output carries {"meta", "params", "result"}; re-running
// a subcommand with --from-json <output> reproduces the run bit for bit.

#include "bilap/asymptotics.hpp"
#include "bilap/errors.hpp"
#include "bilap/io.hpp"
#include "bilap/modes.hpp"
#include "bilap/radial_ode.hpp"
#include "bilap/shooting.hpp"
#include "bilap/transforms.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;
namespace ode = bilap::ode;
namespace shooting = bilap::shooting;
namespace transforms = bilap::transforms;
namespace asymptotics = bilap::asymptotics;
namespace modes = bilap::modes;
namespace io = bilap::io;

json load_params_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw bilap::PreconditionError("cannot open " + path);
    json j = json::parse(in);
    if (!j.contains("params")) throw bilap::PreconditionError(path + " has no params object");
    return j["params"];
}

// CLI flags win over --from-json values, which win over defaults.
template <typename T>
void apply_param(const CLI::App* cmd, const std::string& flag, const json& params,
                 const char* key, T& value) {
    if (cmd->count(flag) > 0) return;
    if (params.contains(key)) value = params[key].get<T>();
}

void emit(const json& out, const std::string& path) {
    if (path.empty()) {
        std::cout << out.dump(2) << "\n";
    } else {
        std::ofstream os(path);
        if (!os) throw bilap::PreconditionError("cannot write " + path);
        os << out.dump(2) << "\n";
    }
}

void write_file(const std::string& path, const std::function<void(std::ostream&)>& writer) {
    std::ofstream os(path);
    if (!os) throw bilap::PreconditionError("cannot write " + path);
    writer(os);
}

struct ControlArgs {
    double r_target = 1e3;
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double r0 = 0.0;
    double u_floor = 1e-8;
    std::int64_t max_steps = 10'000'000;

    void attach(CLI::App* cmd) {
        cmd->add_option("--r-target", r_target, "integration horizon")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--rel-tol", rel_tol, "relative step tolerance")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--abs-tol", abs_tol, "absolute step tolerance")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--r0", r0, "series start radius (0 = auto)");
        cmd->add_option("--u-floor", u_floor, "extinction threshold")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--max-steps", max_steps, "step budget");
    }

    void apply_json(const CLI::App* cmd, const json& p) {
        apply_param(cmd, "--r-target", p, "r_target", r_target);
        apply_param(cmd, "--rel-tol", p, "rel_tol", rel_tol);
        apply_param(cmd, "--abs-tol", p, "abs_tol", abs_tol);
        apply_param(cmd, "--r0", p, "r0", r0);
        apply_param(cmd, "--u-floor", p, "u_floor", u_floor);
        apply_param(cmd, "--max-steps", p, "max_steps", max_steps);
    }

    ode::IntegratorControls controls() const {
        ode::IntegratorControls c;
        c.r_target = r_target;
        c.rel_tol = rel_tol;
        c.abs_tol = abs_tol;
        c.r0 = r0;
        c.u_floor = u_floor;
        c.max_steps = max_steps;
        return c;
    }

    json params_json() const {
        return {{"r_target", r_target}, {"rel_tol", rel_tol},   {"abs_tol", abs_tol},
                {"r0", r0},             {"u_floor", u_floor},   {"max_steps", max_steps}};
    }
};

// --- shoot ------------------------------------------------------------

struct ShootArgs {
    double q = 2.0;
    double beta = 0.0;
    ControlArgs ctl;
    std::string trace_csv;
    std::string out;
    std::string from_json;
};

int run_shoot(const ShootArgs& a) {
    const ode::IntegratorControls controls = a.ctl.controls();
    const ode::SolutionTrace trace = ode::integrate(a.beta, a.q, controls);
    const shooting::ShootingOutcome outcome = shooting::classify(trace);

    if (!a.trace_csv.empty()) {
        io::Metadata meta{{"r_target", io::format_double(controls.r_target)},
                          {"rel_tol", io::format_double(controls.rel_tol)},
                          {"abs_tol", io::format_double(controls.abs_tol)},
                          {"u_floor", io::format_double(controls.u_floor)}};
        write_file(a.trace_csv,
                   [&](std::ostream& os) { io::write_trace_csv(os, trace, meta); });
    }

    json out;
    out["meta"] = io::meta_json();
    json params = a.ctl.params_json();
    params["q"] = a.q;
    params["beta"] = a.beta;
    out["params"] = params;
    json result = io::outcome_json(outcome);
    result["samples"] = trace.samples.size();
    out["result"] = result;
    emit(out, a.out);
    return 0;
}

// --- beta-star --------------------------------------------------------

struct BetaStarArgs {
    double q = 2.0;
    double tol = 1e-6;
    double lo = 0.0;
    double hi = 0.0; // 0 = geometric auto-bracket
    ControlArgs ctl;
    std::string out;
    std::string from_json;
};

int run_beta_star(const BetaStarArgs& a) {
    const ode::IntegratorControls controls = a.ctl.controls();
    std::pair<double, double> bracket{a.lo, a.hi};
    if (a.lo == 0.0 && a.hi == 0.0)
        bracket = shooting::auto_bracket(a.q, controls);
    else if (!(a.hi > a.lo))
        throw bilap::InvalidBracketError("bracket endpoints out of order");
    const shooting::ThresholdCertificate cert =
        shooting::find_beta_star(a.q, bracket, a.tol, controls);

    json out;
    out["meta"] = io::meta_json();
    json params = a.ctl.params_json();
    params["q"] = a.q;
    params["tol"] = a.tol;
    params["lo"] = a.lo;
    params["hi"] = a.hi;
    out["params"] = params;
    out["result"] = io::certificate_json(cert);
    emit(out, a.out);
    return 0;
}

// --- classify-regime ---------------------------------------------------

struct RegimeArgs {
    double q = 2.0;
    bool minimal = false;
    double beta = 0.0;
    double cert_tol = 1e-9;
    double r_target = 0.0; // 0 = per-regime default
    double rel_tol = 0.0;  // 0 = per-regime default
    double abs_tol = 0.0;
    double window_lo = 0.0;
    double window_hi = 0.0;
    std::string out;
    std::string from_json;
};

int run_regime(const RegimeArgs& a) {
    asymptotics::RegimeReport report;
    std::optional<double> transform_residual;
    if (a.minimal) {
        asymptotics::MinimalAnalysisOptions opts;
        opts.certificate_tol = a.cert_tol;
        if (a.r_target > 0.0) opts.r_target = a.r_target;
        if (a.rel_tol > 0.0) opts.rel_tol = a.rel_tol;
        if (a.abs_tol > 0.0) opts.abs_tol = a.abs_tol;
        if (a.window_hi > 0.0) {
            opts.growth_window = {a.window_lo, a.window_hi};
            opts.remainder_window = {a.window_lo, a.window_hi};
        }
        report = asymptotics::analyze_minimal(a.q, opts);
        if (report.L_hat) {
            // close the loop: the fitted L must satisfy the transformed
            // equation on the tail of the surviving endpoint
            const auto trace =
                ode::integrate(report.beta_hi, a.q, opts.controls(a.q));
            const auto kt = transforms::kelvin(trace, *report.L_hat);
            transforms::AvgOdeResidualOptions ropts;
            ropts.window = {1.05 / trace.r_last(), 0.1};
            transform_residual = transforms::residual_avg_ode(kt, ropts).max_relative;
        }
    } else {
        if (!(a.beta > 0.0))
            throw bilap::PreconditionError("either --minimal or a positive --beta is required");
        ode::IntegratorControls controls;
        controls.r_target = a.r_target > 0.0 ? a.r_target : 1e4;
        if (a.rel_tol > 0.0) controls.rel_tol = a.rel_tol;
        if (a.abs_tol > 0.0) controls.abs_tol = a.abs_tol;
        bilap::numerics::Window window{a.window_lo, a.window_hi};
        report = asymptotics::analyze_nonminimal(a.q, a.beta, controls, window);
    }

    json out;
    out["meta"] = io::meta_json();
    out["params"] = {{"q", a.q},           {"minimal", a.minimal},   {"beta", a.beta},
                     {"cert_tol", a.cert_tol}, {"r_target", a.r_target}, {"rel_tol", a.rel_tol},
                     {"abs_tol", a.abs_tol},   {"window_lo", a.window_lo},
                     {"window_hi", a.window_hi}};
    json result = io::regime_report_json(report);
    if (transform_residual) result["transform_residual"] = *transform_residual;
    out["result"] = result;
    emit(out, a.out);
    return 0;
}

// --- verify-transform ---------------------------------------------------

struct VerifyArgs {
    double q = 2.0;
    bool minimal = false;
    double beta = 0.0;
    double L = 0.0; // 0 = estimate for minimal q > 3, else 1.0
    double r_target = 1e4;
    double cert_tol = 1e-9;
    std::string vbar_csv;
    std::string zbar_csv;
    std::string out;
    std::string from_json;
};

int run_verify_transform(const VerifyArgs& a) {
    // fourth-derivative residuals want a dense source grid
    ode::IntegratorControls controls;
    controls.r_target = a.r_target;
    controls.rel_tol = 1e-12;
    controls.abs_tol = 1e-14;

    double beta = a.beta;
    double L = a.L;
    bilap::numerics::Window fit_window{0.0, 0.0};
    if (a.minimal) {
        const auto bracket = shooting::auto_bracket(a.q, controls);
        const auto cert = shooting::find_beta_star(a.q, bracket, a.cert_tol, controls);
        beta = cert.beta_hi;
        if (L <= 0.0 && a.q > 3.0) {
            const ode::SolutionTrace t = ode::integrate(beta, a.q, controls);
            asymptotics::MinimalAnalysisOptions mopts;
            fit_window = mopts.default_remainder_window(a.q)
                             .intersect({t.r_first(), t.r_last()});
            L = asymptotics::estimate_L(t, fit_window);
        }
    } else if (!(beta > 0.0)) {
        throw bilap::PreconditionError("either --minimal or a positive --beta is required");
    }
    if (L <= 0.0) L = 1.0; // the averaged equation holds for any constant L

    const ode::SolutionTrace trace = ode::integrate(beta, a.q, controls);
    if (trace.termination != ode::Termination::ReachedTarget)
        throw bilap::NotGlobalError(beta);

    const transforms::KelvinTrace ktrace = transforms::kelvin(trace, L);
    transforms::AvgOdeResidualOptions ropts;
    // near-threshold checks concern s -> 0; keep away from r < 10
    if (a.minimal) ropts.window = {1.05 / trace.r_last(), 0.1};
    const ode::ResidualProfile profile = transforms::residual_avg_ode(ktrace, ropts);
    const transforms::EmdenTrace etrace = transforms::emden(ktrace);

    if (!a.vbar_csv.empty())
        write_file(a.vbar_csv, [&](std::ostream& os) { io::write_kelvin_csv(os, ktrace); });
    if (!a.zbar_csv.empty())
        write_file(a.zbar_csv, [&](std::ostream& os) { io::write_emden_csv(os, etrace); });

    json out;
    out["meta"] = io::meta_json();
    out["params"] = {{"q", a.q},        {"minimal", a.minimal}, {"beta", a.beta},
                     {"L", a.L},        {"r_target", a.r_target},
                     {"cert_tol", a.cert_tol}};
    json result;
    result["beta_used"] = beta;
    result["L_used"] = L;
    result["max_relative_residual"] = profile.max_relative;
    result["residual_points"] = profile.points.size();
    if (!profile.points.empty()) {
        result["s_lo"] = profile.points.front().x;
        result["s_hi"] = profile.points.back().x;
    }
    out["result"] = result;
    emit(out, a.out);
    return 0;
}

// --- modes ---------------------------------------------------------------

struct ModesArgs {
    std::string k_range = "1..10";
    bool solve = false;
    double amplitude = 0.0;
    double a = 0.0;
    double t0 = 0.0;
    double t1 = 0.0; // 0 = auto from the expected rate
    std::string csv;
    std::string out;
    std::string from_json;
};

std::pair<int, int> parse_k_range(const std::string& text) {
    const auto dots = text.find("..");
    try {
        if (dots == std::string::npos) {
            const int k = std::stoi(text);
            return {k, k};
        }
        return {std::stoi(text.substr(0, dots)), std::stoi(text.substr(dots + 2))};
    } catch (const std::exception&) {
        throw bilap::PreconditionError("cannot parse k range '" + text + "'");
    }
}

int run_modes(const ModesArgs& a) {
    const auto [k_min, k_max] = parse_k_range(a.k_range);
    if (k_min < 1 || k_max < k_min)
        throw bilap::PreconditionError("k range must satisfy 1 <= k_min <= k_max");

    json out;
    out["meta"] = io::meta_json();
    out["params"] = {{"k", a.k_range},       {"solve", a.solve}, {"amplitude", a.amplitude},
                     {"a", a.a},            {"t0", a.t0},       {"t1", a.t1}};

    if (a.solve) {
        const int k = k_min;
        double t1 = a.t1;
        if (t1 <= a.t0) {
            const double slowest =
                a.amplitude != 0.0 ? std::min<double>(k, a.a) : static_cast<double>(std::max(k, 1));
            t1 = a.t0 + 30.0 / std::max(0.25, slowest);
        }
        modes::ModeSolution sol;
        if (k == 1)
            sol = modes::solve_mode_ode_k1(a.amplitude, a.a, a.t0, t1);
        else
            sol = modes::solve_mode_ode(k, a.amplitude, a.a, a.t0, t1);
        if (!a.csv.empty())
            write_file(a.csv,
                       [&](std::ostream& os) { io::write_mode_solution_csv(os, sol); });
        out["result"] = {{"k", sol.k},
                         {"fitted_rate", sol.fitted_rate},
                         {"t0", a.t0},
                         {"t1", t1},
                         {"grid_points", sol.t.size()}};
    } else {
        json table = json::array();
        for (int k = k_min; k <= k_max; ++k)
            table.push_back(io::spectrum_json(modes::make_spectrum(k)));
        out["result"] = {{"spectra", table}};
    }
    emit(out, a.out);
    return 0;
}

// --- sweep -----------------------------------------------------------------

struct SweepArgs {
    std::vector<double> qs;
    std::vector<double> betas;
    bool minimal = false;
    bool fit = false;
    unsigned jobs = 0;
    ControlArgs ctl;
    std::string out_csv;
    std::string out;
};

struct SweepRow {
    double q = 0.0;
    double beta = 0.0;
    std::string label;
    std::optional<double> p, L_hat, sigma;
    bilap::numerics::Window window{0, 0};
};

SweepRow sweep_cell(double q, double beta, const SweepArgs& a) {
    SweepRow row;
    row.q = q;
    row.beta = beta;
    const ode::IntegratorControls controls = a.ctl.controls();
    const shooting::ShootingOutcome outcome = shooting::classify(beta, q, controls);
    if (!outcome.is_global()) {
        row.label = "Extinct";
        return row;
    }
    if (a.fit) {
        const asymptotics::RegimeReport rep = asymptotics::analyze_nonminimal(q, beta, controls);
        row.label = asymptotics::to_string(rep.label);
        row.p = rep.p;
        row.window = rep.growth_window;
    } else {
        row.label = "Global";
    }
    return row;
}

int run_sweep(const SweepArgs& a) {
    if (a.qs.empty()) throw bilap::PreconditionError("sweep needs at least one --q");
    if (a.betas.empty() && !a.minimal)
        throw bilap::PreconditionError("sweep needs --beta values or --minimal");

    struct Cell {
        double q, beta;
        bool minimal;
    };
    std::vector<Cell> cells;
    for (double q : a.qs) {
        if (a.minimal) cells.push_back({q, 0.0, true});
        for (double b : a.betas) cells.push_back({q, b, false});
    }

    const unsigned jobs = a.jobs > 0 ? a.jobs : std::max(1u, std::thread::hardware_concurrency());
    std::vector<SweepRow> rows(cells.size());
    for (std::size_t base = 0; base < cells.size(); base += jobs) {
        std::vector<std::future<SweepRow>> batch;
        const std::size_t end = std::min(cells.size(), base + jobs);
        for (std::size_t i = base; i < end; ++i) {
            batch.push_back(std::async(std::launch::async, [&, i]() -> SweepRow {
                const Cell& c = cells[i];
                try {
                    if (!c.minimal) return sweep_cell(c.q, c.beta, a);
                    asymptotics::MinimalAnalysisOptions opts;
                    const asymptotics::RegimeReport rep =
                        asymptotics::analyze_minimal(c.q, opts);
                    SweepRow row;
                    row.q = c.q;
                    row.beta = 0.5 * (rep.beta_lo + rep.beta_hi);
                    row.label = asymptotics::to_string(rep.label);
                    row.p = rep.p;
                    row.L_hat = rep.L_hat;
                    row.sigma = rep.sigma;
                    row.window = rep.growth_window;
                    return row;
                } catch (const std::exception&) {
                    // one pathological cell must not sink the whole sweep
                    SweepRow row;
                    row.q = c.q;
                    row.beta = c.beta;
                    row.label = "Error";
                    return row;
                }
            }));
        }
        for (std::size_t i = base; i < end; ++i) rows[i] = batch[i - base].get();
    }

    std::ostringstream csv;
    csv << "q,beta,label,p,L_hat,sigma,window_lo,window_hi\n";
    auto opt_str = [](const std::optional<double>& v) {
        return v ? io::format_double(*v) : std::string();
    };
    for (const SweepRow& row : rows) {
        csv << io::format_double(row.q) << ',' << io::format_double(row.beta) << ','
            << row.label << ',' << opt_str(row.p) << ',' << opt_str(row.L_hat) << ','
            << opt_str(row.sigma) << ','
            << (row.window.hi > 0 ? io::format_double(row.window.lo) : std::string()) << ','
            << (row.window.hi > 0 ? io::format_double(row.window.hi) : std::string()) << '\n';
    }

    if (a.out_csv.empty()) {
        std::cout << csv.str();
    } else {
        write_file(a.out_csv, [&](std::ostream& os) { os << csv.str(); });
        json out;
        out["meta"] = io::meta_json();
        out["result"] = {{"rows", rows.size()}, {"csv", a.out_csv}};
        emit(out, a.out);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for radial solutions of Lap^2 u = -u^-q in R^3"};
    app.require_subcommand(1);
    app.set_config("--config", "", "flat key=value configuration file");

    ShootArgs shoot;
    auto* cmd_shoot = app.add_subcommand("shoot", "integrate one shot and classify it");
    cmd_shoot->add_option("--q", shoot.q, "negative-exponent power")
        ->check(CLI::PositiveNumber);
    cmd_shoot->add_option("--beta", shoot.beta, "initial Laplacian");
    shoot.ctl.attach(cmd_shoot);
    cmd_shoot->add_option("--trace-csv", shoot.trace_csv, "write the trace as CSV");
    cmd_shoot->add_option("--out", shoot.out, "write the outcome JSON here");
    cmd_shoot->add_option("--from-json", shoot.from_json, "reuse params from a previous output");

    BetaStarArgs bstar;
    auto* cmd_bstar = app.add_subcommand("beta-star", "bisect for the threshold parameter");
    cmd_bstar->add_option("--q", bstar.q)->check(CLI::PositiveNumber);
    cmd_bstar->add_option("--tol", bstar.tol, "bracket width target")
        ->check(CLI::PositiveNumber);
    cmd_bstar->add_option("--lo", bstar.lo, "extinct bracket endpoint");
    cmd_bstar->add_option("--hi", bstar.hi, "global bracket endpoint (0 = search)");
    bstar.ctl.attach(cmd_bstar);
    cmd_bstar->add_option("--out", bstar.out);
    cmd_bstar->add_option("--from-json", bstar.from_json);

    RegimeArgs regime;
    auto* cmd_regime = app.add_subcommand("classify-regime", "fit growth and remainder rates");
    cmd_regime->add_option("--q", regime.q)->check(CLI::PositiveNumber);
    cmd_regime->add_flag("--minimal", regime.minimal, "analyze the threshold solution");
    cmd_regime->add_option("--beta", regime.beta, "explicit beta above threshold");
    cmd_regime->add_option("--cert-tol", regime.cert_tol)->check(CLI::PositiveNumber);
    cmd_regime->add_option("--r-target", regime.r_target);
    cmd_regime->add_option("--rel-tol", regime.rel_tol);
    cmd_regime->add_option("--abs-tol", regime.abs_tol);
    cmd_regime->add_option("--window-lo", regime.window_lo);
    cmd_regime->add_option("--window-hi", regime.window_hi);
    cmd_regime->add_option("--out", regime.out);
    cmd_regime->add_option("--from-json", regime.from_json);

    VerifyArgs verify;
    auto* cmd_verify =
        app.add_subcommand("verify-transform", "check the inverted-coordinates equation");
    cmd_verify->add_option("--q", verify.q)->check(CLI::PositiveNumber);
    cmd_verify->add_flag("--minimal", verify.minimal);
    cmd_verify->add_option("--beta", verify.beta);
    cmd_verify->add_option("--L", verify.L, "linear coefficient (0 = estimate or 1)");
    cmd_verify->add_option("--r-target", verify.r_target)->check(CLI::PositiveNumber);
    cmd_verify->add_option("--cert-tol", verify.cert_tol)->check(CLI::PositiveNumber);
    cmd_verify->add_option("--vbar-csv", verify.vbar_csv);
    cmd_verify->add_option("--zbar-csv", verify.zbar_csv);
    cmd_verify->add_option("--out", verify.out);
    cmd_verify->add_option("--from-json", verify.from_json);

    ModesArgs modes_args;
    auto* cmd_modes = app.add_subcommand("modes", "spectral tables and mode decay");
    cmd_modes->add_option("--k", modes_args.k_range, "harmonic index or range a..b");
    cmd_modes->add_flag("--solve", modes_args.solve, "solve the mode equation");
    cmd_modes->add_option("--A", modes_args.amplitude, "forcing amplitude");
    cmd_modes->add_option("--a", modes_args.a, "forcing decay rate");
    cmd_modes->add_option("--t0", modes_args.t0);
    cmd_modes->add_option("--T", modes_args.t1, "grid end (0 = auto)");
    cmd_modes->add_option("--csv", modes_args.csv, "write t,z samples");
    cmd_modes->add_option("--out", modes_args.out);
    cmd_modes->add_option("--from-json", modes_args.from_json);

    SweepArgs sweep;
    auto* cmd_sweep = app.add_subcommand("sweep", "fan out classification over a grid");
    cmd_sweep->add_option("--q", sweep.qs, "q values")->delimiter(',');
    cmd_sweep->add_option("--beta", sweep.betas, "beta values")->delimiter(',');
    cmd_sweep->add_flag("--minimal", sweep.minimal, "include the threshold row per q");
    cmd_sweep->add_flag("--fit", sweep.fit, "fit growth exponents of global runs");
    cmd_sweep->add_option("--jobs", sweep.jobs, "parallel workers");
    sweep.ctl.attach(cmd_sweep);
    cmd_sweep->add_option("--out-csv", sweep.out_csv);
    cmd_sweep->add_option("--out", sweep.out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (cmd_shoot->parsed()) {
            if (!shoot.from_json.empty()) {
                const json p = load_params_file(shoot.from_json);
                apply_param(cmd_shoot, "--q", p, "q", shoot.q);
                apply_param(cmd_shoot, "--beta", p, "beta", shoot.beta);
                shoot.ctl.apply_json(cmd_shoot, p);
            }
            return run_shoot(shoot);
        }
        if (cmd_bstar->parsed()) {
            if (!bstar.from_json.empty()) {
                const json p = load_params_file(bstar.from_json);
                apply_param(cmd_bstar, "--q", p, "q", bstar.q);
                apply_param(cmd_bstar, "--tol", p, "tol", bstar.tol);
                apply_param(cmd_bstar, "--lo", p, "lo", bstar.lo);
                apply_param(cmd_bstar, "--hi", p, "hi", bstar.hi);
                bstar.ctl.apply_json(cmd_bstar, p);
            }
            return run_beta_star(bstar);
        }
        if (cmd_regime->parsed()) {
            if (!regime.from_json.empty()) {
                const json p = load_params_file(regime.from_json);
                apply_param(cmd_regime, "--q", p, "q", regime.q);
                apply_param(cmd_regime, "--minimal", p, "minimal", regime.minimal);
                apply_param(cmd_regime, "--beta", p, "beta", regime.beta);
                apply_param(cmd_regime, "--cert-tol", p, "cert_tol", regime.cert_tol);
                apply_param(cmd_regime, "--r-target", p, "r_target", regime.r_target);
                apply_param(cmd_regime, "--rel-tol", p, "rel_tol", regime.rel_tol);
                apply_param(cmd_regime, "--abs-tol", p, "abs_tol", regime.abs_tol);
                apply_param(cmd_regime, "--window-lo", p, "window_lo", regime.window_lo);
                apply_param(cmd_regime, "--window-hi", p, "window_hi", regime.window_hi);
            }
            return run_regime(regime);
        }
        if (cmd_verify->parsed()) {
            if (!verify.from_json.empty()) {
                const json p = load_params_file(verify.from_json);
                apply_param(cmd_verify, "--q", p, "q", verify.q);
                apply_param(cmd_verify, "--minimal", p, "minimal", verify.minimal);
                apply_param(cmd_verify, "--beta", p, "beta", verify.beta);
                apply_param(cmd_verify, "--L", p, "L", verify.L);
                apply_param(cmd_verify, "--r-target", p, "r_target", verify.r_target);
                apply_param(cmd_verify, "--cert-tol", p, "cert_tol", verify.cert_tol);
            }
            return run_verify_transform(verify);
        }
        if (cmd_modes->parsed()) {
            if (!modes_args.from_json.empty()) {
                const json p = load_params_file(modes_args.from_json);
                apply_param(cmd_modes, "--k", p, "k", modes_args.k_range);
                apply_param(cmd_modes, "--solve", p, "solve", modes_args.solve);
                apply_param(cmd_modes, "--A", p, "amplitude", modes_args.amplitude);
                apply_param(cmd_modes, "--a", p, "a", modes_args.a);
                apply_param(cmd_modes, "--t0", p, "t0", modes_args.t0);
                apply_param(cmd_modes, "--T", p, "t1", modes_args.t1);
            }
            return run_modes(modes_args);
        }
        if (cmd_sweep->parsed()) return run_sweep(sweep);
    } catch (const bilap::PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const bilap::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
