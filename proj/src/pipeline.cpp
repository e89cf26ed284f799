// pipeline.cpp: Subcommand runners behind the command-line front end

#include "nonmarkov/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json.hpp"

#include "nonmarkov/laplace.hpp"
#include "nonmarkov/wigner.hpp"

namespace nonmarkov::cli {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

constexpr double kCatTolerance = 1e-3;
constexpr double kSingleExcitationTolerance = 1e-4;
constexpr double kTraceTolerance = 1e-8;
constexpr std::size_t kSingleExcitationLevels = 6;

// Round to 12 significant digits; the shortest round-trip form json emits.
json num(double x) {
    if (!std::isfinite(x)) return nullptr;
    return std::stod(format_number(x));
}

json num(const std::optional<double>& x) { return x ? num(*x) : json(nullptr); }

json cplx_json(std::complex<double> z) { return json::array({num(z.real()), num(z.imag())}); }

std::ofstream open_out(const fs::path& path) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
    return out;
}

void write_text(const fs::path& dir, const fs::path& rel, const std::string& body, RunOutcome& outcome) {
    auto out = open_out(dir / rel);
    out << body;
    if (!out) throw Error(ErrorKind::Io, "write failed for " + (dir / rel).string());
    outcome.files.push_back(rel);
}

void write_json(const fs::path& dir, const fs::path& rel, const json& body, RunOutcome& outcome) {
    write_text(dir, rel, body.dump(2) + "\n", outcome);
}

wigner::CatState cat_of(const Scenario& sc) { return wigner::CatState(sc.alpha); }

json grid_json(const wigner::FrameGrid& g) {
    return {{"x_min", num(g.x_min)}, {"x_max", num(g.x_max)}, {"nx", g.nx},
            {"y_min", num(g.y_min)}, {"y_max", num(g.y_max)}, {"ny", g.ny}};
}

bool at_resonance(const spectral::Waveguide& w, double omega_c) {
    return std::abs(omega_c - w.omega0) <= 1e-12 * std::max(1.0, std::abs(w.omega0));
}

json pole_report_json(const Scenario& sc, const laplace::PoleReport& report) {
    json poles = json::array();
    for (const auto& p : report.bound_poles) {
        poles.push_back({{"omega", num(p.omega)}, {"residue", num(p.residue)}, {"marginal", p.marginal}});
    }
    json out{{"omega_c", num(sc.omega_c)},
             {"bound_poles", poles},
             {"count", report.count()},
             {"band", {{"lower", num(report.omega_e)}, {"upper", num(report.omega_max)}}},
             {"critical_coupling", num(report.critical_coupling)},
             {"residue_sum", num(report.residue_sum())},
             {"continuum_weight", num(report.continuum_weight)},
             {"sum_rule_residual", num(report.sum_rule_residual())},
             {"steady_envelope", nullptr}};
    if (const auto* w = sc.model.waveguide(); w && at_resonance(*w, sc.omega_c) && w->eta > std::numbers::sqrt2) {
        const auto env = laplace::steady_envelope(w->eta, w->xi0);
        out["steady_envelope"] = {{"amplitude", num(env.amplitude)}, {"frequency", num(env.frequency)}};
    }
    return out;
}

RunOutcome run_solve(const Scenario& sc, const fs::path& dir) {
    const auto sol = solve(sc);
    const auto cat = cat_of(sc);
    std::ostringstream os;
    os << "t,re_u,im_u,abs_u,v,omega_prime,gamma,gamma_tilde,F\n";
    const auto& c = sol.coefficients;
    for (std::size_t k = 0; k < sol.u.size(); k += sc.stride) {
        const auto u = sol.u[k];
        const double v = sol.v[k];
        os << format_number(sol.u.grid.time(k)) << ',' << format_number(u.real()) << ','
           << format_number(u.imag()) << ',' << format_number(std::abs(u)) << ',' << format_number(v) << ','
           << format_number(c.omega_prime[k]) << ',' << format_number(c.gamma[k]) << ','
           << format_number(c.gamma_tilde[k]) << ',' << format_number(wigner::fringe_visibility(cat, u, v)) << '\n';
    }
    RunOutcome outcome;
    write_text(dir, "trajectory.csv", os.str(), outcome);
    return outcome;
}

RunOutcome run_poles(const Scenario& sc, const fs::path& dir) {
    const auto report = laplace::find_bound_poles(sc.model, sc.omega_c);
    RunOutcome outcome;
    write_json(dir, "poles.json", pole_report_json(sc, report), outcome);
    return outcome;
}

RunOutcome run_wigner(const Scenario& sc, const fs::path& dir) {
    const auto times = frame_schedule(sc);
    auto problem = sc.problem();
    problem.grid = greenfn::TimeGrid::covering(std::max(times.back(), sc.dt), sc.dt);
    const auto kernels = greenfn::make_kernels(problem);
    const auto u = greenfn::solve_u(problem, kernels);
    const auto v = greenfn::solve_v(problem, kernels, u);
    const auto cat = cat_of(sc);

    // One grid for the whole sequence so frames compare directly.
    std::vector<wigner::WignerParams> params;
    std::vector<std::size_t> index;
    double r = 0.0;
    for (const double t : times) {
        const auto k = problem.grid.index_of(t);
        index.push_back(k);
        params.push_back(wigner::WignerParams::from(u[k], v[k]));
        r = std::max(r, wigner::FrameGrid::standard(cat, params.back(), sc.frame_points).x_max);
    }
    const wigner::FrameGrid grid{-r, r, sc.frame_points, -r, r, sc.frame_points};

    RunOutcome outcome;
    json frames = json::array();
    for (std::size_t f = 0; f < times.size(); ++f) {
        const double t = problem.grid.time(index[f]);
        const auto frame = wigner::render_frame(cat, params[f], grid, t);
        char name[32];
        std::snprintf(name, sizeof name, "frame_%04zu.txt", f);
        const fs::path rel = fs::path("frames") / name;

        std::ostringstream os;
        os << "# t=" << format_number(t) << " x_min=" << format_number(grid.x_min) << " x_max=" << format_number(grid.x_max)
           << " nx=" << grid.nx << " y_min=" << format_number(grid.y_min) << " y_max=" << format_number(grid.y_max)
           << " ny=" << grid.ny << '\n';
        for (Eigen::Index j = 0; j < frame.values.rows(); ++j) {
            for (Eigen::Index i = 0; i < frame.values.cols(); ++i) {
                if (i) os << ' ';
                os << format_number(frame.values(j, i));
            }
            os << '\n';
        }
        write_text(dir, rel, os.str(), outcome);

        const auto peaks = wigner::peak_visibility(frame);
        const auto uk = u[index[f]];
        frames.push_back({{"index", f},
                          {"t", num(t)},
                          {"file", rel.generic_string()},
                          {"u", cplx_json(uk)},
                          {"v", num(v[index[f]])},
                          {"Omega", num(params[f].Omega)},
                          {"fringe_visibility", num(wigner::fringe_visibility(cat, uk, v[index[f]]))},
                          {"peak_visibility", num(peaks.visibility)},
                          {"plus_peak", cplx_json(peaks.plus_peak)},
                          {"minus_peak", cplx_json(peaks.minus_peak)},
                          {"integral", num(frame.integral())}});
    }
    const json manifest{{"alpha", cplx_json(sc.alpha)}, {"grid", grid_json(grid)}, {"frames", frames}};
    write_json(dir, "wigner_manifest.json", manifest, outcome);
    return outcome;
}

RunOutcome run_oracle_check(const Scenario& sc, const fs::path& dir) {
    const auto sol = solve(sc);
    const auto& coeffs = sol.coefficients;
    const auto& grid = sol.u.grid;
    const std::size_t end = coeffs.certified_end();
    const auto cat = cat_of(sc);

    // Cat state: Fock oracle against the closed-form Wigner function.
    std::vector<std::size_t> steps;
    json skipped = json::array();
    for (const double t : frame_schedule(sc)) {
        const auto k = grid.index_of(t);
        if (k <= end) {
            if (steps.empty() || steps.back() != k) steps.push_back(k);
        } else {
            skipped.push_back(num(t));
        }
    }
    const auto state = wigner::CoherentSuperposition::cat(cat);
    const auto rho0 = master::FockDensityMatrix::superposition(state.alphas, state.coeffs, sc.n_max);
    const auto snaps = master::propagate_fock(rho0, coeffs, steps);
    json cat_times = json::array();
    double cat_worst = 0.0;
    double drift_worst = 0.0;
    for (const auto& s : snaps) {
        const auto params = wigner::WignerParams::from(sol.u[s.step], sol.v[s.step]);
        const auto fg = wigner::FrameGrid::standard(cat, params, sc.frame_points);
        std::vector<std::complex<double>> pts;
        pts.reserve(fg.nx * fg.ny);
        for (std::size_t j = 0; j < fg.ny; ++j) {
            for (std::size_t i = 0; i < fg.nx; ++i) pts.push_back(fg.point(i, j));
        }
        const auto oracle = master::wigner_from_density(s.rho, pts);
        double worst = 0.0;
        for (std::size_t p = 0; p < pts.size(); ++p) {
            worst = std::max(worst, std::abs(oracle[p] - wigner::cat_wigner_eval(cat, params, pts[p])));
        }
        cat_worst = std::max(cat_worst, worst);
        drift_worst = std::max(drift_worst, s.trace_drift);
        cat_times.push_back({{"t", num(s.t)}, {"sup_norm", num(worst)}, {"trace_drift", num(s.trace_drift)}});
    }

    json checks = json::array();
    bool passed = true;
    const bool cat_ok = cat_worst < kCatTolerance;
    passed = passed && cat_ok;
    checks.push_back({{"name", "cat_wigner"},
                      {"tolerance", num(kCatTolerance)},
                      {"sup_norm", num(cat_worst)},
                      {"times", cat_times},
                      {"skipped_times", skipped},
                      {"grid_points", sc.frame_points},
                      {"passed", cat_ok}});

    // Zero temperature: one excitation only ever decays, so ⟨1|ρ|1⟩ = |u|².
    if (!sc.bath.thermal()) {
        std::vector<std::size_t> all(end + 1);
        for (std::size_t k = 0; k <= end; ++k) all[k] = k;
        const auto rho1 = master::FockDensityMatrix::fock(1, kSingleExcitationLevels);
        const auto traj = master::propagate_fock(rho1, coeffs, all);
        double worst = 0.0;
        for (const auto& s : traj) {
            worst = std::max(worst, std::abs(s.rho.population(1) - std::norm(sol.u[s.step])));
            drift_worst = std::max(drift_worst, s.trace_drift);
        }
        const bool ok = worst < kSingleExcitationTolerance;
        passed = passed && ok;
        checks.push_back({{"name", "single_excitation"},
                          {"tolerance", num(kSingleExcitationTolerance)},
                          {"max_deviation", num(worst)},
                          {"window_end", num(grid.time(end))},
                          {"passed", ok}});
    } else {
        checks.push_back({{"name", "single_excitation"}, {"skipped", "requires theta = 0"}});
    }

    const bool drift_ok = drift_worst < kTraceTolerance;
    passed = passed && drift_ok;
    checks.push_back({{"name", "trace_drift"},
                      {"tolerance", num(kTraceTolerance)},
                      {"max_drift", num(drift_worst)},
                      {"passed", drift_ok}});

    const json report{{"certified_window", {{"t_begin", num(grid.time(0))}, {"t_end", num(grid.time(end))}}},
                      {"n_max", sc.n_max},
                      {"checks", checks},
                      {"passed", passed}};
    RunOutcome outcome;
    write_json(dir, "oracle_check.json", report, outcome);
    outcome.exit_code = passed ? 0 : 1;
    return outcome;
}

std::string field(const std::optional<double>& x) { return x ? format_number(*x) : std::string(); }

RunOutcome run_sweep(const Scenario& sc, const fs::path& dir) {
    const auto* base = sc.model.waveguide();
    if (!base) throw Error(ErrorKind::Domain, "sweep varies eta and needs a waveguide model");
    if (sc.sweep_etas.empty()) throw Error(ErrorKind::Parse, "sweep.eta: required for sweep");
    std::ostringstream os;
    os << "eta,n_poles,residue_sum,continuum_weight,sum_rule_residual,critical_coupling,envelope_amplitude,"
          "envelope_frequency\n";
    for (const double eta : sc.sweep_etas) {
        spectral::Waveguide w = *base;
        w.eta = eta;
        const spectral::SpectralModel model(w);
        const auto report = laplace::find_bound_poles(model, sc.omega_c);
        std::optional<double> amp, freq;
        if (at_resonance(w, sc.omega_c) && eta > std::numbers::sqrt2) {
            const auto env = laplace::steady_envelope(eta, w.xi0);
            amp = env.amplitude;
            freq = env.frequency;
        }
        os << format_number(eta) << ',' << report.count() << ',' << format_number(report.residue_sum()) << ','
           << format_number(report.continuum_weight) << ',' << format_number(report.sum_rule_residual()) << ','
           << field(report.critical_coupling) << ',' << field(amp) << ',' << field(freq) << '\n';
    }
    RunOutcome outcome;
    write_text(dir, "sweep.csv", os.str(), outcome);
    return outcome;
}

} // namespace

std::optional<Subcommand> parse_subcommand(std::string_view name) {
    if (name == "solve") return Subcommand::Solve;
    if (name == "poles") return Subcommand::Poles;
    if (name == "wigner") return Subcommand::Wigner;
    if (name == "oracle-check") return Subcommand::OracleCheck;
    if (name == "sweep") return Subcommand::Sweep;
    return std::nullopt;
}

std::string_view to_string(Subcommand command) noexcept {
    switch (command) {
    case Subcommand::Solve: return "solve";
    case Subcommand::Poles: return "poles";
    case Subcommand::Wigner: return "wigner";
    case Subcommand::OracleCheck: return "oracle-check";
    case Subcommand::Sweep: return "sweep";
    }
    return "unknown";
}

Solution solve(const Scenario& sc) {
    auto problem = sc.problem();
    auto kernels = greenfn::make_kernels(problem);
    auto u = greenfn::solve_u(problem, kernels);
    auto v = greenfn::solve_v(problem, kernels, u);
    auto coeffs = master::coefficients(problem, kernels, u, v);
    return {std::move(problem), std::move(kernels), std::move(u), std::move(v), std::move(coeffs)};
}

std::vector<double> frame_schedule(const Scenario& sc) {
    if (!sc.frame_times.empty()) return sc.frame_times;
    std::vector<double> t(5);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = sc.horizon * static_cast<double>(i) / 4.0;
    return t;
}

RunOutcome run(Subcommand command, const Scenario& sc, const fs::path& dir) {
    RunOutcome outcome;
    switch (command) {
    case Subcommand::Solve: outcome = run_solve(sc, dir); break;
    case Subcommand::Poles: outcome = run_poles(sc, dir); break;
    case Subcommand::Wigner: outcome = run_wigner(sc, dir); break;
    case Subcommand::OracleCheck: outcome = run_oracle_check(sc, dir); break;
    case Subcommand::Sweep: outcome = run_sweep(sc, dir); break;
    }
    write_text(dir, "scenario.echo.ini", echo_scenario(sc), outcome);
    return outcome;
}

std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string error_json(std::string_view kind, std::string_view message) {
    const json body{{"error", {{"kind", std::string(kind)}, {"message", std::string(message)}}}};
    return body.dump();
}

} // namespace nonmarkov::cli
