// laplace.cpp: Laplace-domain structure of the retarded Green function

#include "nonmarkov/laplace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <utility>

#include "nonmarkov/error.hpp"
#include "nonmarkov/quadrature.hpp"

namespace nonmarkov::laplace {

namespace {

using cplx = std::complex<double>;
using spectral::SpectralModel;

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kRootTolerance = 1e-12;

// Finite stand-in for +inf when integrating over a half-line support.
double upper_limit(const SpectralModel& model) {
    const auto sup = model.support();
    if (sup.bounded()) return sup.upper;
    const auto* o = model.ohmic();
    return o->omega_cut * (std::max(o->exponent, 1.0) + 60.0);
}

// Breakpoints where J has kinks (table nodes) so adaptive panels align with them.
std::vector<double> breakpoints(const SpectralModel& model, double lo, double hi) {
    std::vector<double> out{lo};
    if (const auto* t = model.tabulated()) {
        for (double w : t->omega) {
            if (w > lo && w < hi) out.push_back(w);
        }
    }
    out.push_back(hi);
    return out;
}

// Extra cuts at anchor ± first·4^k, so that an integrand varying on the scale of
// the distance to a nearby singularity is resolved at every scale out to the far end.
void add_graded_cuts(std::vector<double>& cuts, double anchor, double first, double lo, double hi) {
    if (!(first > 0.0)) return;
    for (double d = first; d < hi - lo; d *= 4.0) {
        if (anchor + d > lo && anchor + d < hi) cuts.push_back(anchor + d);
        if (anchor - d > lo && anchor - d < hi) cuts.push_back(anchor - d);
    }
    std::sort(cuts.begin(), cuts.end());
}

double integrate_pieces(const SpectralModel& model, double lo, double hi,
                        const std::function<double(double)>& f, double anchor = 0.0, double first = 0.0) {
    if (!(hi > lo)) return 0.0;
    auto cuts = breakpoints(model, lo, hi);
    add_graded_cuts(cuts, anchor, first, lo, hi);
    double acc = 0.0;
    for (std::size_t i = 1; i < cuts.size(); ++i) acc += quad::integrate(f, cuts[i - 1], cuts[i], 1e-13, 1e-11);
    return acc;
}

double waveguide_delta(const spectral::Waveguide& w, double omega) {
    const double y = omega - w.omega0;
    const double edge = 2.0 * w.xi0;
    const double half_eta2 = 0.5 * w.eta * w.eta;
    if (std::abs(y) <= edge) return half_eta2 * y;
    // y ∓ sqrt(y² − 4ξ₀²) rewritten without cancellation
    const double root = std::sqrt((std::abs(y) - edge) * (std::abs(y) + edge));
    const double mag = half_eta2 * edge * edge / (std::abs(y) + root);
    return y > 0.0 ? mag : -mag;
}

// Piecewise-linear J integrates exactly: on each segment write J(w) = c + s·(w − ω), which gives
// c·ln|(ω−a)/(ω−b)| − s·(b−a). Regrouped per node k the log coefficient is
// (s_k − s_{k−1})(ω − w_k) inside the table, so ω sitting on a node costs nothing.
struct TableTerms {
    const spectral::Tabulated& t;
    double slope(std::size_t i) const { return (t.J[i + 1] - t.J[i]) / (t.omega[i + 1] - t.omega[i]); }
    // coefficient of ln|ω − w_k| and its ω-derivative
    std::pair<double, double> node(std::size_t k, double omega) const {
        const std::size_t last = t.omega.size() - 1;
        const double x = omega - t.omega[k];
        if (k == 0) return {t.J[0] + slope(0) * x, slope(0)};
        if (k == last) return {-(t.J[last] + slope(last - 1) * x), -slope(last - 1)};
        const double ds = slope(k) - slope(k - 1);
        return {ds * x, ds};
    }
};

double table_delta(const spectral::Tabulated& t, double omega) {
    const TableTerms terms{t};
    double acc = -(t.J.back() - t.J.front());
    for (std::size_t k = 0; k < t.omega.size(); ++k) {
        const double c = terms.node(k, omega).first;
        if (c != 0.0) acc += c * std::log(std::abs(omega - t.omega[k]));
    }
    return acc / kTwoPi;
}

double table_delta_prime(const spectral::Tabulated& t, double omega) {
    const TableTerms terms{t};
    double acc = 0.0;
    for (std::size_t k = 0; k < t.omega.size(); ++k) {
        const auto [c, dc] = terms.node(k, omega);
        const double x = omega - t.omega[k];
        acc += dc * std::log(std::abs(x)) + c / x;
    }
    return acc / kTwoPi;
}

double pole_function(const SpectralModel& model, double omega_c, double Omega) {
    return Omega - omega_c - delta(model, Omega);
}

// Continuum spectral measure dω/2π · J/[(ω−ω_c−Δ)² + (J/2)²] on quadrature nodes.
struct ContinuumRule {
    std::vector<double> omega;
    std::vector<double> mass;

    double total() const {
        double acc = 0.0;
        for (double m : mass) acc += m;
        return acc;
    }
    cplx at(double t) const {
        cplx acc = 0.0;
        for (std::size_t i = 0; i < omega.size(); ++i) acc += mass[i] * std::polar(1.0, -omega[i] * t);
        return acc;
    }
};

ContinuumRule continuum_rule_at(const SpectralModel& model, double omega_c, double tau_max, unsigned level) {
    const auto nodes = model.nodes(tau_max, level);
    ContinuumRule rule;
    rule.omega.reserve(nodes.size());
    rule.mass.reserve(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double J = nodes.J[i];
        if (J == 0.0) continue;
        const double d = nodes.omega[i] - omega_c - delta(model, nodes.omega[i]);
        rule.omega.push_back(nodes.omega[i]);
        rule.mass.push_back(nodes.weight[i] * J / (kTwoPi * (d * d + 0.25 * J * J)));
    }
    return rule;
}

ContinuumRule continuum_rule(const SpectralModel& model, double omega_c, double tau_max) {
    ContinuumRule prev = continuum_rule_at(model, omega_c, tau_max, 0);
    for (unsigned level = 1; level <= 10; ++level) {
        ContinuumRule cur = continuum_rule_at(model, omega_c, tau_max, level);
        const bool weight_ok = std::abs(cur.total() - prev.total()) <= 1e-11;
        const bool tail_ok = tau_max == 0.0 || std::abs(cur.at(tau_max) - prev.at(tau_max)) <= 1e-11;
        if (weight_ok && tail_ok) return cur;
        prev = std::move(cur);
    }
    std::ostringstream os;
    os << "continuum integral did not converge (omega_c=" << omega_c << ", t_max=" << tau_max
       << ", last weight " << prev.total() << ")";
    throw Error(ErrorKind::Numerical, os.str());
}

} // namespace

double PoleReport::residue_sum() const {
    double acc = 0.0;
    for (const auto& p : bound_poles) {
        if (!p.marginal) acc += p.residue;
    }
    return acc;
}

double PoleReport::sum_rule_residual() const { return residue_sum() + continuum_weight - 1.0; }

std::size_t PoleReport::count() const {
    return static_cast<std::size_t>(std::count_if(bound_poles.begin(), bound_poles.end(),
                                                  [](const BoundPole& p) { return !p.marginal; }));
}

std::complex<double> sigma(const SpectralModel& model, std::complex<double> s) {
    const auto sup = model.support();
    if (s.real() == 0.0 && sup.contains(-s.imag()) && !model.vanishes()) {
        std::ostringstream os;
        os << "sigma(s) is discontinuous on the branch cut at s=" << s
           << "; use delta(omega) and eval_J(omega)/2 for the one-sided limits";
        throw Error(ErrorKind::Branch, os.str());
    }
    if (model.vanishes()) return {0.0, 0.0};
    if (const auto* w = model.waveguide()) {
        const cplx z = s + cplx(0.0, w->omega0);
        const double c = 4.0 * w->xi0 * w->xi0;
        // sqrt(z² + 4ξ₀²) on the sheet that behaves like z at infinity; the cut of
        // sqrt(1 + c/z²) is exactly the band segment of the imaginary axis
        const cplx root = z * std::sqrt(1.0 + c / (z * z));
        return cplx(0.0, 0.5) * w->eta * w->eta * (-c / (z + root));
    }
    const cplx is = cplx(0.0, 1.0) * s;
    auto f = [&](double w) { return model.J(w) / (is - w); };
    const double hi = upper_limit(model);
    std::vector<double> cuts = breakpoints(model, sup.lower, hi);
    if (is.real() > sup.lower && is.real() < hi) {
        cuts.push_back(is.real());
        std::sort(cuts.begin(), cuts.end());
    }
    // distance from is to the real axis or to the nearest end of the support sets the finest scale
    const double gap = std::max({std::abs(is.imag()), sup.lower - is.real(), is.real() - hi});
    add_graded_cuts(cuts, is.real(), gap, sup.lower, hi);
    cplx acc = 0.0;
    for (std::size_t i = 1; i < cuts.size(); ++i) {
        if (cuts[i] > cuts[i - 1]) acc += quad::integrate_complex(f, cuts[i - 1], cuts[i], 1e-13, 1e-11);
    }
    return acc / kTwoPi;
}

double delta(const SpectralModel& model, double omega) {
    if (model.vanishes()) return 0.0;
    if (const auto* w = model.waveguide()) return waveguide_delta(*w, omega);
    if (const auto* t = model.tabulated()) return table_delta(*t, omega);
    return delta_quadrature(model, omega);
}

double delta_quadrature(const SpectralModel& model, double omega) {
    if (model.vanishes()) return 0.0;
    const auto sup = model.support();
    const double lo = sup.lower;
    const double hi = upper_limit(model);
    auto plain = [&](double w) { return model.J(w) / (omega - w); };
    if (!(omega > lo && omega < hi)) {
        return integrate_pieces(model, lo, hi, plain, omega, std::max(lo - omega, omega - hi)) / kTwoPi;
    }

    // excise [ω−h, ω+h] symmetrically; the folded integrand is regular at x = 0
    const double h = std::min(omega - lo, hi - omega);
    auto folded = [&](double x) { return (model.J(omega - x) - model.J(omega + x)) / x; };
    double acc = 0.0;
    std::vector<double> cuts{0.0};
    if (const auto* t = model.tabulated()) {
        for (double w : t->omega) {
            const double x = std::abs(w - omega);
            if (x > 0.0 && x < h) cuts.push_back(x);
        }
        std::sort(cuts.begin(), cuts.end());
    }
    cuts.push_back(h);
    for (std::size_t i = 1; i < cuts.size(); ++i) {
        if (cuts[i] > cuts[i - 1]) acc += quad::integrate(folded, cuts[i - 1], cuts[i], 1e-13, 1e-11);
    }
    acc += integrate_pieces(model, lo, omega - h, plain, omega, 2.0 * h);
    acc += integrate_pieces(model, omega + h, hi, plain, omega, 2.0 * h);
    return acc / kTwoPi;
}

double delta_prime(const SpectralModel& model, double omega) {
    if (model.vanishes()) return 0.0;
    const auto sup = model.support();
    if (sup.contains(omega)) {
        std::ostringstream os;
        os << "delta_prime requested at omega=" << omega << " inside the support";
        throw Error(ErrorKind::Domain, os.str());
    }
    if (const auto* w = model.waveguide()) {
        const double y = std::abs(omega - w->omega0);
        const double edge = 2.0 * w->xi0;
        return 0.5 * w->eta * w->eta * (1.0 - y / std::sqrt((y - edge) * (y + edge)));
    }
    if (const auto* t = model.tabulated()) return table_delta_prime(*t, omega);
    auto f = [&](double v) {
        const double d = omega - v;
        return -model.J(v) / (d * d);
    };
    const double hi = upper_limit(model);
    return integrate_pieces(model, sup.lower, hi, f, omega, std::max(sup.lower - omega, omega - hi)) / kTwoPi;
}

double residue_at(const SpectralModel& model, double omega_c, double Omega) {
    (void)omega_c;  // Z depends on ω_c only through the location of Ω
    const double Z = 1.0 / (1.0 - delta_prime(model, Omega));
    if (!(Z > 0.0 && Z <= 1.0)) {
        std::ostringstream os;
        os << "bound-state residue " << Z << " at Omega=" << Omega << " is outside (0, 1]";
        throw Error(ErrorKind::Consistency, os.str());
    }
    return Z;
}

double critical_coupling(double omega_c, double omega0, double xi0) {
    const double d = std::abs(omega_c - omega0) / xi0;
    if (d >= 2.0) return 0.0;
    return std::sqrt(2.0 - d);
}

double continuum_weight(const SpectralModel& model, double omega_c) {
    if (model.vanishes()) return 0.0;
    return continuum_rule(model, omega_c, 0.0).total();
}

PoleReport find_bound_poles(const SpectralModel& model, double omega_c) {
    PoleReport report;
    const auto sup = model.support();
    report.omega_e = sup.lower;
    report.omega_max = sup.upper;
    if (const auto* w = model.waveguide()) report.critical_coupling = critical_coupling(omega_c, w->omega0, w->xi0);

    if (model.vanishes()) {
        report.bound_poles.push_back({omega_c, 1.0, false});
        return report;
    }

    const double scale = model.scale();
    const double edge_offset = model.waveguide() ? 0.0 : 1e-10 * scale;
    auto f = [&](double x) { return pole_function(model, omega_c, x); };

    auto bisect = [&](double lo, double hi) {
        // f increasing on each exterior interval (1 − Δ' > 1)
        while (hi - lo > kRootTolerance * scale) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            (f(mid) < 0.0 ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    };
    auto attach = [&](double Omega, double edge) {
        BoundPole pole{Omega, 0.0, std::abs(Omega - edge) <= kMarginalDistance * scale};
        try {
            pole.residue = residue_at(model, omega_c, Omega);
        } catch (const Error&) {
            if (!pole.marginal) throw;
        }
        report.bound_poles.push_back(pole);
    };

    // below the support
    {
        const double hi = sup.lower - edge_offset;
        if (f(hi) > 0.0) {
            double step = scale;
            double lo = hi - step;
            for (int i = 0; i < 200 && f(lo) >= 0.0; ++i) {
                step *= 2.0;
                lo = hi - step;
            }
            attach(bisect(lo, hi), sup.lower);
        }
    }
    // above the support
    if (sup.bounded()) {
        const double lo = sup.upper + edge_offset;
        if (f(lo) < 0.0) {
            double step = scale;
            double hi = lo + step;
            for (int i = 0; i < 200 && f(hi) <= 0.0; ++i) {
                step *= 2.0;
                hi = lo + step;
            }
            attach(bisect(lo, hi), sup.upper);
        }
    }

    report.continuum_weight = continuum_weight(model, omega_c);
    return report;
}

greenfn::GreenTrajectory reconstruct_u(const SpectralModel& model, double omega_c,
                                       const greenfn::TimeGrid& grid, const PoleReport& poles) {
    greenfn::GreenTrajectory out{grid, std::vector<cplx>(grid.samples(), 0.0)};
    const double horizon = grid.horizon() - grid.t0;
    ContinuumRule rule;
    if (!model.vanishes()) rule = continuum_rule(model, omega_c, horizon);

    std::vector<double> freq = rule.omega;
    std::vector<double> amp = rule.mass;
    for (const auto& p : poles.bound_poles) {
        if (p.marginal) continue;
        freq.push_back(p.omega);
        amp.push_back(p.residue);
    }
    const std::vector<cplx> series = quad::exponential_sums(freq, amp, grid.dt, grid.n);
    std::copy(series.begin(), series.end(), out.u.begin());
    return out;
}

greenfn::GreenTrajectory reconstruct_u(const SpectralModel& model, double omega_c,
                                       const greenfn::TimeGrid& grid) {
    return reconstruct_u(model, omega_c, grid, find_bound_poles(model, omega_c));
}

MarkovLimit markov_limit(const SpectralModel& model, double omega_c) {
    if (!model.support().contains(omega_c)) {
        std::ostringstream os;
        os << "omega_c=" << omega_c << " lies outside the support of J; there is no Markovian decay channel";
        throw Error(ErrorKind::Domain, os.str());
    }
    return {omega_c + delta(model, omega_c), 0.5 * model.J(omega_c)};
}

SteadyEnvelope steady_envelope(double eta, double xi0) {
    if (!(eta > std::numbers::sqrt2)) {
        std::ostringstream os;
        os << "steady envelope needs eta > sqrt(2) (got " << eta << "); no bound states at resonance";
        throw Error(ErrorKind::Domain, os.str());
    }
    const double e2 = eta * eta;
    return {(e2 - 2.0) / (e2 - 1.0), e2 * xi0 / std::sqrt(e2 - 1.0)};
}

} // namespace nonmarkov::laplace
