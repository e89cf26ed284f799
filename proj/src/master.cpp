// master.cpp: Exact master-equation coefficients and a truncated Fock-space propagator

#include "nonmarkov/master.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "nonmarkov/error.hpp"

namespace nonmarkov::master {

namespace {

using cplx = std::complex<double>;
using Eigen::Index;
using Eigen::MatrixXcd;

constexpr double kTraceDriftLimit = 1e-6;
constexpr std::size_t kTailWidth = 5;
constexpr double kTailLimit = 1e-8;

Eigen::VectorXcd coherent_amplitudes(cplx alpha, std::size_t n_max) {
    Eigen::VectorXcd psi(static_cast<Index>(n_max + 1));
    cplx term = 1.0;
    for (std::size_t n = 0; n <= n_max; ++n) {
        if (n > 0) term *= alpha / std::sqrt(static_cast<double>(n));
        psi(static_cast<Index>(n)) = term;
    }
    return psi;
}

} // namespace

std::optional<std::size_t> CoefficientTrajectory::first_singular(std::size_t begin, std::size_t end) const {
    for (std::size_t k = begin; k <= end && k < singular.size(); ++k) {
        if (singular[k]) return k;
    }
    return std::nullopt;
}

std::size_t CoefficientTrajectory::certified_end() const {
    const auto first = first_singular(0, singular.size() - 1);
    if (!first) return singular.size() - 1;
    return *first == 0 ? 0 : *first - 1;
}

CoefficientTrajectory coefficients(const greenfn::EvolutionProblem& problem,
                                   const spectral::KernelTable& kernels,
                                   const greenfn::GreenTrajectory& u,
                                   const greenfn::FluctuationTrajectory& v) {
    if (u.size() != v.size()) throw Error(ErrorKind::Domain, "u and v trajectories differ in length");
    const auto d = greenfn::derivatives(problem, kernels, u);
    const std::size_t n = u.size();
    CoefficientTrajectory out;
    out.grid = u.grid;
    out.omega_c = problem.omega_c;
    out.omega_prime.resize(n);
    out.gamma.resize(n);
    out.gamma_tilde.resize(n);
    out.singular.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const cplx ratio = d.udot[k] / u.u[k];
        out.omega_prime[k] = -ratio.imag();
        out.gamma[k] = -ratio.real();
        out.gamma_tilde[k] = d.vdot[k] - 2.0 * v.v[k] * ratio.real();
        out.singular[k] = std::abs(u.u[k]) < kSingularThreshold;
    }
    return out;
}

FockDensityMatrix::FockDensityMatrix(Eigen::MatrixXcd rho) : rho_(std::move(rho)) {
    if (rho_.rows() == 0 || rho_.rows() != rho_.cols()) {
        throw Error(ErrorKind::Domain, "density matrix must be square and non-empty");
    }
}

FockDensityMatrix FockDensityMatrix::fock(std::size_t n, std::size_t n_max) {
    if (n > n_max) throw Error(ErrorKind::Domain, "Fock level exceeds truncation");
    MatrixXcd rho = MatrixXcd::Zero(static_cast<Index>(n_max + 1), static_cast<Index>(n_max + 1));
    rho(static_cast<Index>(n), static_cast<Index>(n)) = 1.0;
    return FockDensityMatrix(std::move(rho));
}

FockDensityMatrix FockDensityMatrix::coherent(std::complex<double> alpha, std::size_t n_max) {
    const Eigen::VectorXcd psi = coherent_amplitudes(alpha, n_max).normalized();
    return FockDensityMatrix(psi * psi.adjoint());
}

FockDensityMatrix FockDensityMatrix::superposition(std::span<const std::complex<double>> alphas,
                                                   std::span<const std::complex<double>> coeffs,
                                                   std::size_t n_max) {
    if (alphas.size() != coeffs.size() || alphas.empty()) {
        throw Error(ErrorKind::Domain, "superposition needs matching, non-empty amplitude and coefficient lists");
    }
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Index>(n_max + 1));
    for (std::size_t i = 0; i < alphas.size(); ++i) psi += coeffs[i] * coherent_amplitudes(alphas[i], n_max);
    psi.normalize();
    return FockDensityMatrix(psi * psi.adjoint());
}

double FockDensityMatrix::purity() const { return (rho_ * rho_).trace().real(); }

double FockDensityMatrix::hermiticity_error() const { return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff(); }

double FockDensityMatrix::min_eigenvalue() const {
    const MatrixXcd herm = 0.5 * (rho_ + rho_.adjoint());
    Eigen::SelfAdjointEigenSolver<MatrixXcd> solver(herm, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

double FockDensityMatrix::tail_population() const {
    const std::size_t nm = n_max();
    double acc = 0.0;
    for (std::size_t n = nm >= kTailWidth ? nm - kTailWidth + 1 : 0; n <= nm; ++n) acc += population(n);
    return acc;
}

Eigen::MatrixXcd annihilation(std::size_t n_max) {
    MatrixXcd a = MatrixXcd::Zero(static_cast<Index>(n_max + 1), static_cast<Index>(n_max + 1));
    for (std::size_t n = 1; n <= n_max; ++n) {
        a(static_cast<Index>(n - 1), static_cast<Index>(n)) = std::sqrt(static_cast<double>(n));
    }
    return a;
}

Eigen::MatrixXcd master_rhs(const Eigen::MatrixXcd& rho, double omega_prime, double gamma, double gamma_tilde) {
    const Index N = rho.rows();
    MatrixXcd out(N, N);
    const cplx minus_i_w(0.0, -omega_prime);
    for (Index n = 0; n < N; ++n) {
        // truncated a a† = diag(1, ..., N−1, 0); the anticommutator form keeps
        // both trace and Hermiticity exact in the truncated basis
        const double aad_n = n + 1 < N ? static_cast<double>(n + 1) : 0.0;
        for (Index m = 0; m < N; ++m) {
            const double aad_m = m + 1 < N ? static_cast<double>(m + 1) : 0.0;
            const cplx r = rho(m, n);
            const cplx a_rho_ad = (m + 1 < N && n + 1 < N)
                                      ? std::sqrt(static_cast<double>((m + 1) * (n + 1))) * rho(m + 1, n + 1)
                                      : cplx(0.0);
            const cplx ad_rho_a = (m > 0 && n > 0) ? std::sqrt(static_cast<double>(m * n)) * rho(m - 1, n - 1)
                                                   : cplx(0.0);
            const double dm = static_cast<double>(m);
            const double dn = static_cast<double>(n);
            out(m, n) = minus_i_w * (dm - dn) * r + gamma * (2.0 * a_rho_ad - (dm + dn) * r) +
                        gamma_tilde * (a_rho_ad + ad_rho_a - 0.5 * (dm + dn + aad_m + aad_n) * r);
        }
    }
    return out;
}

std::vector<FockSnapshot> propagate_fock(const FockDensityMatrix& rho0, const CoefficientTrajectory& coeffs,
                                         std::span<const std::size_t> snapshot_steps) {
    std::vector<FockSnapshot> out;
    if (snapshot_steps.empty()) return out;
    const std::size_t last = snapshot_steps.back();
    if (last >= coeffs.size()) throw Error(ErrorKind::Domain, "snapshot step beyond the coefficient grid");
    for (std::size_t i = 1; i < snapshot_steps.size(); ++i) {
        if (snapshot_steps[i] < snapshot_steps[i - 1]) throw Error(ErrorKind::Domain, "snapshot steps must be ascending");
    }
    if (const auto bad = coeffs.first_singular(0, last)) {
        std::ostringstream os;
        os << "master-equation coefficients are singular at t=" << coeffs.grid.time(*bad)
           << " (|u| < " << kSingularThreshold << "); shorten the propagation window";
        throw Error(ErrorKind::SingularWindow, os.str());
    }

    const double dt = coeffs.grid.dt;
    const double omega_ref = coeffs.omega_c;
    const Index N = rho0.matrix().rows();
    // interaction picture at ω_ref; the dissipators are phase covariant
    auto back_to_lab = [&](const MatrixXcd& rho_i, double t) {
        MatrixXcd lab(N, N);
        for (Index n = 0; n < N; ++n) {
            for (Index m = 0; m < N; ++m) lab(m, n) = rho_i(m, n) * std::polar(1.0, -omega_ref * t * static_cast<double>(m - n));
        }
        return lab;
    };

    MatrixXcd rho = rho0.matrix();
    double drift = 0.0;
    std::size_t next = 0;
    auto emit = [&](std::size_t k) {
        while (next < snapshot_steps.size() && snapshot_steps[next] == k) {
            const double t = coeffs.grid.time(k) - coeffs.grid.t0;
            out.push_back({k, coeffs.grid.time(k), FockDensityMatrix(back_to_lab(rho, t)), drift});
            ++next;
        }
    };
    emit(0);
    const double trace0 = rho.trace().real();
    for (std::size_t k = 0; k < last; ++k) {
        const double w0 = coeffs.omega_prime[k] - omega_ref;
        const double w1 = coeffs.omega_prime[k + 1] - omega_ref;
        const double g0 = coeffs.gamma[k], g1 = coeffs.gamma[k + 1];
        const double gt0 = coeffs.gamma_tilde[k], gt1 = coeffs.gamma_tilde[k + 1];
        const double wm = 0.5 * (w0 + w1), gm = 0.5 * (g0 + g1), gtm = 0.5 * (gt0 + gt1);

        const MatrixXcd k1 = master_rhs(rho, w0, g0, gt0);
        const MatrixXcd k2 = master_rhs(rho + 0.5 * dt * k1, wm, gm, gtm);
        const MatrixXcd k3 = master_rhs(rho + 0.5 * dt * k2, wm, gm, gtm);
        const MatrixXcd k4 = master_rhs(rho + dt * k3, w1, g1, gt1);
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        drift = std::max(drift, std::abs(rho.trace().real() - trace0));
        if (drift > kTraceDriftLimit) {
            std::ostringstream os;
            os << "trace drift " << drift << " at t=" << coeffs.grid.time(k + 1) << " exceeds " << kTraceDriftLimit
               << "; reduce dt";
            throw Error(ErrorKind::StepSize, os.str());
        }
        emit(k + 1);
    }
    return out;
}

std::vector<double> wigner_from_density(const FockDensityMatrix& rho, std::span<const std::complex<double>> points) {
    const double tail = rho.tail_population();
    if (tail > kTailLimit) {
        std::ostringstream os;
        os << "population " << tail << " in the top " << kTailWidth << " Fock levels exceeds " << kTailLimit
           << "; increase n_max";
        throw Error(ErrorKind::Truncation, os.str());
    }
    const Index N = rho.matrix().rows();
    const auto& r = rho.matrix();
    std::vector<double> lgam(static_cast<std::size_t>(N));
    for (Index n = 0; n < N; ++n) lgam[static_cast<std::size_t>(n)] = std::lgamma(static_cast<double>(n) + 1.0);

    std::vector<double> out;
    out.reserve(points.size());
    std::vector<double> lag(static_cast<std::size_t>(N));
    for (const cplx z : points) {
        const double x = 4.0 * std::norm(z);
        const double gauss = (2.0 / std::numbers::pi) * std::exp(-0.5 * x);
        const cplx two_zc = 2.0 * std::conj(z);
        double acc = 0.0;
        cplx zpow = 1.0;  // (2z*)^d
        for (Index d = 0; d < N; ++d) {
            const Index count = N - d;
            // generalized Laguerre L_n^{(d)}(x), n = 0..count−1
            lag[0] = 1.0;
            if (count > 1) lag[1] = 1.0 + static_cast<double>(d) - x;
            for (Index k = 1; k + 1 < count; ++k) {
                const auto kk = static_cast<double>(k);
                lag[static_cast<std::size_t>(k + 1)] =
                    ((2.0 * kk + 1.0 + static_cast<double>(d) - x) * lag[static_cast<std::size_t>(k)] -
                     (kk + static_cast<double>(d)) * lag[static_cast<std::size_t>(k - 1)]) / (kk + 1.0);
            }
            for (Index n = 0; n < count; ++n) {
                const Index m = n + d;
                const double norm = std::exp(0.5 * (lgam[static_cast<std::size_t>(n)] - lgam[static_cast<std::size_t>(m)]));
                const double sign = (n % 2 == 0) ? 1.0 : -1.0;
                const cplx w = sign * norm * zpow * lag[static_cast<std::size_t>(n)];
                acc += (d == 0) ? (r(n, n) * w).real() : 2.0 * (r(m, n) * w).real();
            }
            zpow *= two_zc;
        }
        out.push_back(gauss * acc);
    }
    return out;
}

double wigner_from_density(const FockDensityMatrix& rho, std::complex<double> z) {
    return wigner_from_density(rho, std::span<const std::complex<double>>(&z, 1)).front();
}

} // namespace nonmarkov::master
