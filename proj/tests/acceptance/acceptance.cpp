// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any failure.
//
// Units: ξ₀ = 1, ω₀ = 10 (band [8, 12]).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "nonmarkov/error.hpp"
#include "nonmarkov/greenfn.hpp"
#include "nonmarkov/laplace.hpp"
#include "nonmarkov/master.hpp"
#include "nonmarkov/spectral.hpp"
#include "nonmarkov/wigner.hpp"

using namespace nonmarkov;
using cplx = std::complex<double>;
using spectral::BathSpec;
using spectral::SpectralModel;
using spectral::Waveguide;

namespace {

constexpr double kOmega0 = 10.0;

// Lines are collected and printed in criterion order at the end.
std::map<int, std::string> lines;
int failures = 0;

void report(int id, bool ok, const std::string& detail) {
    lines[id] = std::string(ok ? "PASS" : "FAIL") + "  " + detail;
    if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

SpectralModel waveguide(double eta) { return SpectralModel(Waveguide{eta, kOmega0, 1.0}); }

struct Run {
    greenfn::EvolutionProblem problem;
    spectral::KernelTable kernels;
    greenfn::GreenTrajectory u;
    greenfn::FluctuationTrajectory v;
};

Run evolve(double eta, BathSpec bath, double horizon, double dt) {
    greenfn::EvolutionProblem p{kOmega0, waveguide(eta), bath, greenfn::TimeGrid::covering(horizon, dt)};
    auto k = greenfn::make_kernels(p);
    auto u = greenfn::solve_u(p, k);
    auto v = greenfn::solve_v(p, k, u);
    return {std::move(p), std::move(k), std::move(u), std::move(v)};
}

// Least-squares slope of y against x.
double slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

template <class F>
void guarded(int id, F&& body) {
    try {
        body();
    } catch (const Error& e) {
        report(id, false, fmt("error %s: %s", std::string(to_string(e.kind())).c_str(), e.what()));
    }
}

void criterion_1() {
    const auto lo = laplace::find_bound_poles(waveguide(1.40), kOmega0).count();
    const auto hi = laplace::find_bound_poles(waveguide(1.42), kOmega0).count();
    const double eta_c = laplace::critical_coupling(kOmega0, kOmega0, 1.0);
    report(1, lo == 0 && hi == 2 && eta_c == std::sqrt(2.0),
           fmt("poles(1.40)=%zu poles(1.42)=%zu eta_c=%.17g (want 0, 2, sqrt 2)", lo, hi, eta_c));
}

void criterion_2() {
    const auto r = laplace::find_bound_poles(waveguide(2.0), kOmega0);
    // Ω − ω₀ = ±η²/sqrt(η² − 1), Z = (η² − 2)/(2(η² − 1)), A = (η² − 2)/(η² − 1)
    const double split = 4.0 / std::sqrt(3.0);
    const double A = laplace::steady_envelope(2.0).amplitude;
    bool ok = r.count() == 2;
    double worst_w = 0.0, worst_z = 0.0;
    if (ok) {
        worst_w = std::max(std::abs(r.bound_poles[0].omega - (kOmega0 - split)), std::abs(r.bound_poles[1].omega - (kOmega0 + split)));
        worst_z = std::max(std::abs(r.bound_poles[0].residue - 1.0 / 3.0), std::abs(r.bound_poles[1].residue - 1.0 / 3.0));
    }
    const double sum_err = std::abs(r.residue_sum() - 2.0 / 3.0);
    const double a_err = std::abs(A - 2.0 / 3.0);
    ok = ok && worst_w < 1e-8 && worst_z < 1e-8 && sum_err < 1e-8 && a_err < 1e-8;
    report(2, ok, fmt("|dOmega|=%.2e |dZ|=%.2e |sumZ-2/3|=%.2e |A(2)-2/3|=%.2e (tol 1e-8)", worst_w, worst_z, sum_err, a_err));
}

void criterion_3() {
    double worst = 0.0;
    std::string detail;
    for (double eta : {0.5, 1.0, 2.0, 4.0}) {
        const double res = laplace::find_bound_poles(waveguide(eta), kOmega0).sum_rule_residual();
        worst = std::max(worst, std::abs(res));
        detail += fmt("eta=%g:%.1e ", eta, res);
    }
    report(3, worst < 1e-6, detail + "(tol 1e-6)");
}

void criterion_4() {
    const auto grid = greenfn::TimeGrid::covering(20.0, 1e-3);
    double worst = 0.0;
    std::string detail;
    for (double eta : {0.5, 4.0}) {
        const greenfn::EvolutionProblem p{kOmega0, waveguide(eta), BathSpec{}, grid};
        const auto u = greenfn::solve_u(p);
        const auto r = laplace::reconstruct_u(p.model, kOmega0, grid);
        double err = 0.0;
        for (std::size_t k = 0; k < u.size(); ++k) err = std::max(err, std::abs(u[k] - r[k]));
        worst = std::max(worst, err);
        detail += fmt("eta=%g: %.2e ", eta, err);
    }
    report(4, worst < 1e-3, detail + "(tol 1e-3)");
}

// η = 0.2: criteria 5, 7 (weak part) and 8 share one long run.
void weak_coupling(bool& f7_weak_ok, std::string& f7_weak_detail) {
    const double eta = 0.2;
    const auto run = evolve(eta, BathSpec::from_occupation(kOmega0, 0.5), 200.0, 1e-2);
    const auto& grid = run.problem.grid;

    // 5: log|u| and unwrapped phase of u·e^{iω₀t} fitted on t ∈ [10, 60]
    std::vector<double> t, logu, phase;
    double unwrapped = 0.0;
    cplx prev = 1.0;
    for (std::size_t k = 0; k < run.u.size(); ++k) {
        const double tk = grid.time(k);
        const cplx slow = run.u[k] * std::polar(1.0, kOmega0 * tk);
        if (k > 0) unwrapped += std::arg(slow / prev);
        prev = slow;
        if (tk >= 10.0 && tk <= 60.0) {
            t.push_back(tk);
            logu.push_back(std::log(std::abs(run.u[k])));
            phase.push_back(unwrapped);
        }
    }
    const double rate = -slope(t, logu);
    const double shift = -slope(t, phase);
    const double golden = eta * eta;
    const bool ok5 = std::abs(rate / golden - 1.0) < 0.05 && std::abs(shift) < 0.05 * golden;
    report(5, ok5, fmt("rate=%.6f (want %.6f, 5%%) shift=%.2e (|shift| < 5%% of rate)", rate, golden, shift));

    // 7 (weak): zero temperature visibility uses v = 0
    const wigner::CatState cat(1.0);
    const double F_end = wigner::fringe_visibility(cat, run.u.u.back(), 0.0);
    f7_weak_ok = std::abs(F_end / std::exp(-2.0) - 1.0) < 0.01;
    f7_weak_detail = fmt("eta=0.2 F(200)=%.6f vs e^-2=%.6f (1%%)", F_end, std::exp(-2.0));

    // 8: v at t_f = 5/(2η²ξ₀), then the end-state Wigner function
    const double tf = 5.0 / (2.0 * eta * eta);
    const double v_tf = run.v[grid.index_of(tf)];
    const auto params = wigner::WignerParams::from(run.u.u.back(), run.v.v.back());
    const auto fg = wigner::FrameGrid::standard(cat, params);
    double sup = 0.0;
    for (std::size_t j = 0; j < fg.ny; ++j) {
        for (std::size_t i = 0; i < fg.nx; ++i) {
            const cplx z = fg.point(i, j);
            sup = std::max(sup, std::abs(wigner::cat_wigner_eval(cat, params, z) - wigner::thermal_wigner(0.5, z)));
        }
    }
    const bool ok8 = std::abs(v_tf / 0.5 - 1.0) < 0.02 && sup < 1e-3;
    report(8, ok8, fmt("v(%.1f)=%.6f (0.5 +/- 2%%) Wigner sup-norm vs thermal at t=200: %.2e (tol 1e-3)", tf, v_tf, sup));
}

void strong_coupling(bool f7_weak_ok, const std::string& f7_weak_detail) {
    const double eta = 4.0;
    const auto run = evolve(eta, BathSpec{}, 20.0, 1e-3);
    const auto& grid = run.problem.grid;
    const auto env = laplace::steady_envelope(eta);

    // 6: local maxima of |u| for tξ₀ > 10
    std::vector<double> tmax, vmax;
    for (std::size_t k = 1; k + 1 < run.u.size(); ++k) {
        const double a = std::abs(run.u[k - 1]), b = std::abs(run.u[k]), c = std::abs(run.u[k + 1]);
        if (grid.time(k) > 10.0 && b > a && b >= c) {
            tmax.push_back(grid.time(k));
            vmax.push_back(b);
        }
    }
    double worst_peak = 0.0;
    for (double m : vmax) worst_peak = std::max(worst_peak, std::abs(m / (14.0 / 15.0) - 1.0));
    const double expected_period = std::numbers::pi * std::sqrt(15.0) / 16.0;
    double period = 0.0;
    if (tmax.size() >= 2) period = (tmax.back() - tmax.front()) / static_cast<double>(tmax.size() - 1);
    const bool ok6 = tmax.size() >= 2 && worst_peak < 0.02 && std::abs(period / expected_period - 1.0) < 0.01;
    report(6, ok6, fmt("%zu maxima, worst |max/(14/15)-1|=%.4f (2%%), period=%.6f vs %.6f (1%%)", tmax.size(), worst_peak,
                       period, expected_period));

    // 7 (strong)
    const wigner::CatState cat(1.0);
    double worst_F = 0.0;
    for (std::size_t k = 0; k < run.u.size(); ++k) {
        const double t = grid.time(k);
        if (t <= 10.0) continue;
        const double c = std::cos(env.frequency * t);
        const double ref = std::exp(-2.0 * (1.0 - env.amplitude * env.amplitude * c * c));
        worst_F = std::max(worst_F, std::abs(wigner::fringe_visibility(cat, run.u[k], run.v[k]) / ref - 1.0));
    }
    const bool ok7 = worst_F < 0.02 && f7_weak_ok;
    report(7, ok7, fmt("eta=4 worst |F/F_env-1| on t>10: %.4f (2%%); ", worst_F) + f7_weak_detail);
}

void criterion_9() {
    const auto run = evolve(0.5, BathSpec::from_occupation(kOmega0, 0.5), 5.0, 1e-3);
    const auto coeffs = master::coefficients(run.problem, run.kernels, run.u, run.v);
    const wigner::CatState cat(1.0);
    const auto state = wigner::CoherentSuperposition::cat(cat);
    const auto rho0 = master::FockDensityMatrix::superposition(state.alphas, state.coeffs, 25);
    std::vector<std::size_t> steps;
    for (double t : {0.0, 2.0, 5.0}) steps.push_back(run.problem.grid.index_of(t));
    const auto snaps = master::propagate_fock(rho0, coeffs, steps);
    double sup = 0.0, drift = 0.0;
    std::string detail;
    for (const auto& s : snaps) {
        const auto params = wigner::WignerParams::from(run.u[s.step], run.v[s.step]);
        const auto fg = wigner::FrameGrid::standard(cat, params);
        std::vector<cplx> pts;
        for (std::size_t j = 0; j < fg.ny; ++j) {
            for (std::size_t i = 0; i < fg.nx; ++i) pts.push_back(fg.point(i, j));
        }
        const auto oracle = master::wigner_from_density(s.rho, pts);
        double err = 0.0;
        for (std::size_t p = 0; p < pts.size(); ++p) err = std::max(err, std::abs(oracle[p] - wigner::cat_wigner_eval(cat, params, pts[p])));
        sup = std::max(sup, err);
        drift = std::max(drift, s.trace_drift);
        detail += fmt("t=%g:%.2e ", s.t, err);
    }
    report(9, sup < 1e-3 && drift < 1e-8, detail + fmt("(tol 1e-3) trace drift %.2e (tol 1e-8)", drift));
}

void criterion_10() {
    double worst = 0.0;
    std::string detail;
    for (double eta : {0.5, 4.0}) {
        const auto run = evolve(eta, BathSpec{}, 20.0, 1e-3);
        const auto coeffs = master::coefficients(run.problem, run.kernels, run.u, run.v);
        const std::size_t end = coeffs.certified_end();
        std::vector<std::size_t> steps(end + 1);
        for (std::size_t k = 0; k <= end; ++k) steps[k] = k;
        const auto snaps = master::propagate_fock(master::FockDensityMatrix::fock(1, 10), coeffs, steps);
        double err = 0.0;
        for (const auto& s : snaps) err = std::max(err, std::abs(s.rho.population(1) - std::norm(run.u[s.step])));
        worst = std::max(worst, err);
        detail += fmt("eta=%g window [0, %.3f]: %.2e ", eta, run.problem.grid.time(end), err);
    }
    report(10, worst < 1e-4, detail + "(tol 1e-4)");
}

struct FrameStats {
    double worst_norm{0.0};
    double worst_track{0.0};  // peak displacement in grid cells
    std::vector<double> t;
    std::vector<double> radius;
    std::vector<double> cell;     // grid spacing of each frame, the resolution of `radius`
    std::vector<double> envelope; // |u(t)|·|α|
};

FrameStats frame_sequence(double eta) {
    const auto run = evolve(eta, BathSpec{}, 20.0, 1e-3);
    const wigner::CatState cat(1.0);
    FrameStats st;
    for (int f = 0; f <= 80; ++f) {
        const double t = 0.25 * f;
        const auto k = run.problem.grid.index_of(t);
        const auto params = wigner::WignerParams::from(run.u[k], run.v[k]);
        const auto fg = wigner::FrameGrid::standard(cat, params);
        const auto frame = wigner::render_frame(cat, params, fg, t);
        const auto pk = wigner::peak_visibility(frame);
        const cplx ua = run.u[k] * cat.alpha;
        st.worst_norm = std::max(st.worst_norm, std::abs(frame.integral() - 1.0));
        for (auto [found, want] : {std::pair{pk.plus_peak, ua}, std::pair{pk.minus_peak, -ua}}) {
            st.worst_track = std::max({st.worst_track, std::abs(found.real() - want.real()) / fg.dx(),
                                       std::abs(found.imag() - want.imag()) / fg.dy()});
        }
        st.t.push_back(t);
        st.radius.push_back(std::abs(pk.plus_peak));
        st.cell.push_back(std::max(fg.dx(), fg.dy()));
        st.envelope.push_back(std::abs(ua));
    }
    return st;
}

void criterion_11() {
    const auto strong = frame_sequence(4.0);
    const auto weak = frame_sequence(0.5);

    // strong: peak radius swings in and out over the late frames
    int turns = 0;
    double lo = 1.0, hi = 0.0;
    for (std::size_t i = 1; i + 1 < strong.radius.size(); ++i) {
        if (strong.t[i] < 5.0) continue;
        lo = std::min(lo, strong.radius[i]);
        hi = std::max(hi, strong.radius[i]);
        const double a = strong.radius[i - 1], b = strong.radius[i], c = strong.radius[i + 1];
        if ((b > a && b >= c) || (b < a && b <= c)) ++turns;
    }
    const bool oscillates = turns >= 4 && hi - lo > 0.5;

    // weak: monotone decay after the initial transient. Peaks sit on grid nodes, so a rise
    // counts only beyond one cell, the same resolution the tracking check allows; the
    // envelope they track must itself decrease strictly.
    const double transient = 1.0;
    std::size_t violations = 0, envelope_rises = 0;
    for (std::size_t i = 1; i < weak.radius.size(); ++i) {
        if (weak.t[i - 1] < transient) continue;
        const double cell = std::max(weak.cell[i], weak.cell[i - 1]);
        if (weak.radius[i] > weak.radius[i - 1] + cell) ++violations;
        if (!(weak.envelope[i] < weak.envelope[i - 1])) ++envelope_rises;
    }
    const double norm = std::max(strong.worst_norm, weak.worst_norm);
    const double track = std::max(strong.worst_track, weak.worst_track);
    const bool ok = norm < 1e-3 && track <= 1.0 && oscillates && violations == 0 && envelope_rises == 0;
    report(11, ok, fmt("max|integral-1|=%.2e (1e-3) peak offset %.2f cells (<=1) strong: %d turns, radius %.3f..%.3f; "
                       "weak: %zu rises > 1 cell, %zu envelope rises after t=%g",
                       norm, track, turns, lo, hi, violations, envelope_rises, transient));
}

} // namespace

int main() {
    guarded(1, criterion_1);
    guarded(2, criterion_2);
    guarded(3, criterion_3);
    guarded(4, criterion_4);
    bool f7_weak_ok = false;
    std::string f7_weak_detail = "weak-coupling run failed";
    guarded(5, [&] { weak_coupling(f7_weak_ok, f7_weak_detail); });
    guarded(6, [&] { strong_coupling(f7_weak_ok, f7_weak_detail); });
    guarded(9, criterion_9);
    guarded(10, criterion_10);
    guarded(11, criterion_11);
    for (int id = 1; id <= 11; ++id) {
        const auto it = lines.find(id);
        std::printf("criterion %2d %s\n", id, it == lines.end() ? "FAIL  not evaluated" : it->second.c_str());
        if (it == lines.end()) ++failures;
    }
    std::printf("%s: %d failing criteria\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
    return failures == 0 ? 0 : 1;
}
