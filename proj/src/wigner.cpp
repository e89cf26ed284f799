// wigner.cpp: Phase-space observables for superpositions of coherent states

#include "nonmarkov/wigner.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "nonmarkov/error.hpp"

namespace nonmarkov::wigner {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

} // namespace

CatState::CatState(std::complex<double> alpha_value)
    : alpha(alpha_value), norm(1.0 / std::sqrt(4.0 * std::cosh(std::norm(alpha_value)))) {}

WignerParams WignerParams::from(std::complex<double> u, double v) {
    if (!(v >= -1e-6) || !std::isfinite(v)) {
        std::ostringstream os;
        os << "fluctuation v=" << v << " must be >= 0";
        throw Error(ErrorKind::Domain, os.str());
    }
    return {u, 2.0 / (1.0 + 2.0 * std::max(v, 0.0))};
}

std::complex<double> propagator_eval(const WignerParams& p, std::complex<double> z,
                                     std::complex<double> alpha0, std::complex<double> alpha0p_conj) {
    const double W = p.Omega;
    const cplx exponent = -W * std::norm(z) + W * std::conj(z) * p.u * alpha0 +
                          W * alpha0p_conj * std::conj(p.u) * z +
                          alpha0p_conj * (1.0 - W * std::norm(p.u)) * alpha0;
    return (W / kPi) * std::exp(exponent);
}

CoherentSuperposition CoherentSuperposition::cat(const CatState& cat) {
    return {{cat.alpha, -cat.alpha}, {cat.norm, cat.norm}};
}

double CoherentSuperposition::norm_squared() const {
    cplx acc = 0.0;
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        for (std::size_t j = 0; j < alphas.size(); ++j) {
            acc += std::conj(coeffs[i]) * coeffs[j] * std::exp(std::conj(alphas[i]) * alphas[j]);
        }
    }
    return acc.real();
}

double superposition_wigner_eval(const CoherentSuperposition& state, const WignerParams& params,
                                 std::complex<double> z) {
    cplx acc = 0.0;
    for (std::size_t i = 0; i < state.alphas.size(); ++i) {
        for (std::size_t j = 0; j < state.alphas.size(); ++j) {
            acc += state.coeffs[i] * std::conj(state.coeffs[j]) *
                   propagator_eval(params, z, state.alphas[i], std::conj(state.alphas[j]));
        }
    }
    return acc.real();
}

CatComponents cat_wigner_components(const CatState& cat, const WignerParams& params, std::complex<double> z) {
    const double a2 = std::norm(cat.alpha);
    const double W = params.Omega;
    const cplx ua = params.u * cat.alpha;
    // N² e^{±|α|²} without overflow
    const double damp = std::exp(-2.0 * a2);
    const double peak_pref = 0.5 / (1.0 + damp) * W / kPi;
    const double fringe_pref = damp / (1.0 + damp) * W / kPi;
    CatComponents c;
    c.plus = peak_pref * std::exp(-W * std::norm(z - ua));
    c.minus = peak_pref * std::exp(-W * std::norm(z + ua));
    c.interference = fringe_pref * std::exp(-W * std::conj(z - ua) * (z + ua)).real();
    return c;
}

double cat_wigner_eval(const CatState& cat, const WignerParams& params, std::complex<double> z) {
    return cat_wigner_components(cat, params, z).total();
}

double fringe_visibility(const CatState& cat, std::complex<double> u, double v) {
    return std::exp(-2.0 * std::norm(cat.alpha) * (1.0 - std::norm(u) / (1.0 + 2.0 * v)));
}

double thermal_wigner(double nbar, std::complex<double> z) {
    if (!(nbar >= 0.0)) throw Error(ErrorKind::Domain, "thermal occupation must be >= 0");
    const double width = 1.0 + 2.0 * nbar;
    return (2.0 / kPi) / width * std::exp(-2.0 * std::norm(z) / width);
}

FrameGrid FrameGrid::standard(const CatState& cat, const WignerParams& params, std::size_t points) {
    const double r = std::abs(params.u * cat.alpha) + 4.0 / std::sqrt(params.Omega);
    return {-r, r, points, -r, r, points};
}

bool FrameGrid::contains(std::complex<double> z) const {
    return z.real() >= x_min && z.real() <= x_max && z.imag() >= y_min && z.imag() <= y_max;
}

double WignerFrame::integral() const { return values.sum() * grid.dx() * grid.dy(); }

WignerFrame render_frame(const CatState& cat, const WignerParams& params, const FrameGrid& grid, double t) {
    if (grid.nx < 2 || grid.ny < 2 || !(grid.x_max > grid.x_min) || !(grid.y_max > grid.y_min)) {
        throw Error(ErrorKind::Extent, "frame grid needs at least 2x2 points and positive extents");
    }
    const cplx ua = params.u * cat.alpha;
    if (!grid.contains(ua) || !grid.contains(-ua)) {
        std::ostringstream os;
        os << "cat peaks at +/-" << ua << " fall outside the frame grid";
        throw Error(ErrorKind::Extent, os.str());
    }
    const auto ny = static_cast<Eigen::Index>(grid.ny);
    const auto nx = static_cast<Eigen::Index>(grid.nx);
    WignerFrame frame{t, grid, Eigen::MatrixXd(ny, nx), Eigen::MatrixXd(ny, nx), Eigen::MatrixXd(ny, nx),
                      Eigen::MatrixXd(ny, nx)};
    for (Eigen::Index j = 0; j < ny; ++j) {
        for (Eigen::Index i = 0; i < nx; ++i) {
            const auto c = cat_wigner_components(cat, params, grid.point(static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
            frame.plus(j, i) = c.plus;
            frame.minus(j, i) = c.minus;
            frame.interference(j, i) = c.interference;
            frame.values(j, i) = c.total();
        }
    }
    return frame;
}

PeakReading peak_visibility(const WignerFrame& frame) {
    Eigen::Index pj = 0, pi = 0, mj = 0, mi = 0;
    const double p = frame.plus.maxCoeff(&pj, &pi);
    const double m = frame.minus.maxCoeff(&mj, &mi);
    const double fringe = frame.interference.cwiseAbs().maxCoeff();
    PeakReading r;
    r.visibility = 0.5 * fringe / std::sqrt(p * m);
    r.plus_peak = frame.grid.point(static_cast<std::size_t>(pi), static_cast<std::size_t>(pj));
    r.minus_peak = frame.grid.point(static_cast<std::size_t>(mi), static_cast<std::size_t>(mj));
    return r;
}

} // namespace nonmarkov::wigner
