// spectral.cpp: Reservoir spectral densities, thermal occupation and bath kernels

#include "nonmarkov/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "nonmarkov/error.hpp"
#include "nonmarkov/quadrature.hpp"

namespace nonmarkov::spectral {

namespace {

// Largest phase change of e^{-iωτ} accepted across one 20-point panel.
constexpr double kPanelPhase = 3.0;

[[noreturn]] void domain_error(const std::string& what) { throw Error(ErrorKind::Domain, what); }

bool finite(double x) { return std::isfinite(x); }

std::size_t oscillation_panels(double width, double tau_max) {
    return static_cast<std::size_t>(std::ceil(width * tau_max / kPanelPhase));
}

SpectralNodes waveguide_nodes(const Waveguide& p, double tau_max, unsigned refinement) {
    // ω = ω₀ + 2ξ₀ cos φ removes the square-root edge behaviour
    const std::size_t panels =
        std::max<std::size_t>(4, oscillation_panels(2.0 * p.xi0 * std::numbers::pi, tau_max)) << refinement;
    const quad::Rule rule = quad::composite_gauss_legendre(0.0, std::numbers::pi, panels);
    SpectralNodes out;
    out.omega.resize(rule.size());
    out.weight.resize(rule.size());
    out.J.resize(rule.size());
    const double eta2 = p.eta * p.eta;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const double phi = rule.node[i];
        const double s = std::sin(phi);
        out.omega[i] = p.omega0 + 2.0 * p.xi0 * std::cos(phi);
        out.weight[i] = 2.0 * p.xi0 * s * rule.weight[i];
        out.J[i] = eta2 * 2.0 * p.xi0 * s;
    }
    return out;
}

SpectralNodes rule_nodes(const quad::Rule& rule, const SpectralModel& model) {
    SpectralNodes out;
    out.omega = rule.node;
    out.weight = rule.weight;
    out.J.resize(rule.size());
    for (std::size_t i = 0; i < rule.size(); ++i) out.J[i] = model.J(rule.node[i]);
    return out;
}

SpectralNodes ohmic_nodes(const SpectralModel& model, const OhmicFamily& p, double tau_max,
                          unsigned refinement) {
    const double upper = p.omega_cut * (std::max(p.exponent, 1.0) + 60.0);
    std::vector<double> breaks{0.0};
    // geometric grading towards ω = 0 for the ω^p (or ω^(p-1) with n̄) endpoint
    for (int j = 30; j >= 1; --j) breaks.push_back(p.omega_cut * std::ldexp(1.0, -j));
    double width = p.omega_cut;
    if (tau_max > 0.0) width = std::min(width, kPanelPhase / tau_max);
    const auto uniform = static_cast<std::size_t>(std::ceil((upper - p.omega_cut) / width));
    for (std::size_t k = 0; k <= uniform; ++k) {
        breaks.push_back(p.omega_cut + (upper - p.omega_cut) * static_cast<double>(k) / static_cast<double>(uniform));
    }
    std::vector<double> refined;
    const std::size_t split = std::size_t{1} << refinement;
    for (std::size_t b = 1; b < breaks.size(); ++b) {
        for (std::size_t s = 0; s < split; ++s) {
            refined.push_back(breaks[b - 1] + (breaks[b] - breaks[b - 1]) * static_cast<double>(s) / static_cast<double>(split));
        }
    }
    refined.push_back(breaks.back());
    return rule_nodes(quad::composite_gauss_legendre(refined), model);
}

SpectralNodes tabulated_nodes(const SpectralModel& model, const Tabulated& p, double tau_max,
                              unsigned refinement) {
    std::vector<double> breaks{p.omega.front()};
    const std::size_t split = std::size_t{1} << refinement;
    for (std::size_t i = 1; i < p.omega.size(); ++i) {
        const double lo = p.omega[i - 1];
        const double hi = p.omega[i];
        const std::size_t pieces = std::max<std::size_t>(1, oscillation_panels(hi - lo, tau_max)) * split;
        for (std::size_t s = 1; s <= pieces; ++s) {
            breaks.push_back(s == pieces ? hi : lo + (hi - lo) * static_cast<double>(s) / static_cast<double>(pieces));
        }
    }
    return rule_nodes(quad::composite_gauss_legendre(breaks), model);
}

} // namespace

SpectralModel::SpectralModel(Waveguide params) : params_(params) {
    if (!finite(params.eta) || params.eta < 0.0) domain_error("waveguide eta must be finite and >= 0");
    if (!finite(params.omega0)) domain_error("waveguide omega0 must be finite");
    if (!finite(params.xi0) || params.xi0 <= 0.0) domain_error("waveguide xi0 must be finite and > 0");
}

SpectralModel::SpectralModel(OhmicFamily params) : params_(params) {
    if (!finite(params.kappa) || params.kappa < 0.0) domain_error("ohmic kappa must be finite and >= 0");
    if (!finite(params.omega_cut) || params.omega_cut <= 0.0) domain_error("ohmic omega_cut must be > 0");
    if (!finite(params.exponent) || params.exponent <= 0.0) domain_error("ohmic exponent must be > 0");
}

SpectralModel::SpectralModel(Tabulated params) : params_(std::move(params)) {
    const auto& t = std::get<Tabulated>(params_);
    if (t.omega.size() != t.J.size()) domain_error("tabulated omega and J columns differ in length");
    if (t.omega.size() < 2) domain_error("tabulated spectral density needs at least two samples");
    for (std::size_t i = 0; i < t.omega.size(); ++i) {
        if (!finite(t.omega[i]) || !finite(t.J[i])) domain_error("tabulated samples must be finite");
        if (t.omega[i] < 0.0) domain_error("tabulated frequencies must be >= 0");
        if (t.J[i] < 0.0) domain_error("tabulated J must be >= 0");
        if (i > 0 && !(t.omega[i] > t.omega[i - 1])) domain_error("tabulated frequencies must be strictly increasing");
    }
}

SpectralModel SpectralModel::load_tabulated(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open spectral table " + path.string());
    Tabulated table;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::replace_if(line.begin(), line.end(), [](char c) { return c == ',' || c == ';' || c == '\t'; }, ' ');
        std::istringstream row(line);
        double w = 0.0;
        double j = 0.0;
        if (!(row >> w)) continue;
        if (!(row >> j)) {
            throw Error(ErrorKind::Parse, path.string() + ":" + std::to_string(lineno) + ": expected two columns");
        }
        table.omega.push_back(w);
        table.J.push_back(j);
    }
    return SpectralModel(std::move(table));
}

ModelKind SpectralModel::kind() const {
    switch (params_.index()) {
    case 0: return ModelKind::Waveguide;
    case 1: return ModelKind::OhmicFamily;
    default: return ModelKind::Tabulated;
    }
}

double SpectralModel::J(double omega) const {
    if (const auto* w = waveguide()) {
        const double d = omega - w->omega0;
        const double edge = 2.0 * w->xi0;
        if (!(std::abs(d) < edge)) return 0.0;
        return w->eta * w->eta * std::sqrt((edge - d) * (edge + d));
    }
    if (const auto* o = ohmic()) {
        if (!(omega > 0.0)) return 0.0;
        const double x = omega / o->omega_cut;
        return 2.0 * std::numbers::pi * o->kappa * omega * std::pow(x, o->exponent - 1.0) * std::exp(-x);
    }
    const auto& t = *tabulated();
    if (omega < t.omega.front() || omega > t.omega.back()) return 0.0;
    const auto hi = std::upper_bound(t.omega.begin(), t.omega.end(), omega);
    if (hi == t.omega.end()) return t.J.back();
    const auto i = static_cast<std::size_t>(hi - t.omega.begin());
    const double f = (omega - t.omega[i - 1]) / (t.omega[i] - t.omega[i - 1]);
    return t.J[i - 1] + f * (t.J[i] - t.J[i - 1]);
}

Support SpectralModel::support() const {
    if (const auto* w = waveguide()) return {w->omega0 - 2.0 * w->xi0, w->omega0 + 2.0 * w->xi0};
    if (ohmic()) return {0.0, std::numeric_limits<double>::infinity()};
    const auto& t = *tabulated();
    return {t.omega.front(), t.omega.back()};
}

double SpectralModel::scale() const {
    if (const auto* w = waveguide()) return w->xi0;
    if (const auto* o = ohmic()) return o->omega_cut;
    const auto& t = *tabulated();
    return 0.25 * (t.omega.back() - t.omega.front());
}

bool SpectralModel::vanishes() const {
    if (const auto* w = waveguide()) return w->eta == 0.0;
    if (const auto* o = ohmic()) return o->kappa == 0.0;
    const auto& t = *tabulated();
    return std::all_of(t.J.begin(), t.J.end(), [](double j) { return j == 0.0; });
}

SpectralNodes SpectralModel::nodes(double tau_max, unsigned refinement) const {
    tau_max = std::abs(tau_max);
    if (const auto* w = waveguide()) return waveguide_nodes(*w, tau_max, refinement);
    if (const auto* o = ohmic()) return ohmic_nodes(*this, *o, tau_max, refinement);
    return tabulated_nodes(*this, *tabulated(), tau_max, refinement);
}

BathSpec::BathSpec(double theta_value) : theta(theta_value) {
    if (!finite(theta) || theta < 0.0) domain_error("bath theta must be finite and >= 0");
}

BathSpec BathSpec::from_occupation(double omega, double nbar) {
    if (!(nbar >= 0.0) || !finite(nbar)) domain_error("occupation must be finite and >= 0");
    if (nbar == 0.0) return BathSpec{};
    if (!(omega > 0.0)) domain_error("occupation reference frequency must be > 0");
    return BathSpec(omega / std::log1p(1.0 / nbar));
}

double eval_J(const SpectralModel& model, double omega) { return model.J(omega); }

double eval_nbar(const BathSpec& bath, double omega) {
    if (bath.theta == 0.0) return 0.0;
    if (!(omega > 0.0)) {
        std::ostringstream os;
        os << "thermal occupation diverges at omega=" << omega << " for theta=" << bath.theta;
        throw Error(ErrorKind::Domain, os.str());
    }
    return 1.0 / std::expm1(omega / bath.theta);
}

std::complex<double> eval_g(const SpectralModel& model, double tau) {
    return weighted_kernel(model, tau, [](double) { return 1.0; });
}

std::complex<double> eval_gtilde(const SpectralModel& model, const BathSpec& bath, double tau) {
    if (!bath.thermal()) return {0.0, 0.0};
    return weighted_kernel(model, tau, [&](double w) { return eval_nbar(bath, w); });
}

KernelTable tabulate_kernels(const SpectralModel& model, const BathSpec& bath,
                             double omega_ref, double dt, std::size_t steps) {
    if (!(dt > 0.0)) domain_error("kernel table step must be > 0");
    KernelTable table;
    table.dt = dt;
    table.omega_ref = omega_ref;
    table.thermal = bath.thermal();
    table.g.assign(steps + 1, {0.0, 0.0});
    table.gtilde.assign(steps + 1, {0.0, 0.0});
    if (model.vanishes()) return table;

    const double tau_max = dt * static_cast<double>(steps);
    auto nbar = [&](double w) { return eval_nbar(bath, w); };
    auto unit = [](double) { return 1.0; };

    // refine until the longest lag agrees between consecutive levels
    SpectralNodes nodes = model.nodes(tau_max, 0);
    std::complex<double> prev = detail::sum_kernel(nodes, tau_max, unit).value;
    bool converged = false;
    for (unsigned level = 1; level <= 6 && !converged; ++level) {
        SpectralNodes finer = model.nodes(tau_max, level);
        const auto [cur, l1] = detail::sum_kernel(finer, tau_max, unit);
        converged = std::abs(cur - prev) <= 1e-12 * l1;
        if (converged && table.thermal) {
            converged = std::abs(detail::sum_kernel(finer, tau_max, nbar).value -
                                 detail::sum_kernel(nodes, tau_max, nbar).value) <=
                        1e-12 * detail::sum_kernel(finer, 0.0, nbar).l1;
        }
        nodes = std::move(finer);
        prev = cur;
    }
    if (!converged) {
        std::ostringstream os;
        os << "kernel tabulation did not converge at tau=" << tau_max;
        throw Error(ErrorKind::Numerical, os.str());
    }

    const std::size_t m = nodes.size();
    std::vector<double> cg(m), cgt(m), detuning(m);
    const double norm = 1.0 / (2.0 * std::numbers::pi);
    for (std::size_t i = 0; i < m; ++i) {
        cg[i] = nodes.weight[i] * nodes.J[i] * norm;
        cgt[i] = (table.thermal && nodes.J[i] != 0.0) ? cg[i] * eval_nbar(bath, nodes.omega[i]) : 0.0;
        detuning[i] = nodes.omega[i] - omega_ref;
    }
    table.g = quad::exponential_sums(detuning, cg, dt, steps);
    if (table.thermal) table.gtilde = quad::exponential_sums(detuning, cgt, dt, steps);
    return table;
}

} // namespace nonmarkov::spectral
