// master.hpp: Exact master-equation coefficients and a truncated Fock-space propagator
//
// dρ/dt = −i[ω'(t) a†a, ρ] + γ(t)(2aρa† − ρa†a − a†aρ)
//         + γ̃(t)(aρa† + a†ρa − a†aρ − ρaa†)
//
// (the γ̃ term is evaluated as a†ρa + aρa† − ½{aa†, ρ} − ½{a†a, ρ}, identical
// for bosons and exactly trace and Hermiticity preserving once truncated)
// with ω' = −Im(u̇/u), γ = −Re(u̇/u), γ̃ = v̇ − 2v Re(u̇/u). The propagator is a
// validation oracle for the closed-form phase-space results; it is only
// meaningful on windows where u(t) stays away from zero.

#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "nonmarkov/greenfn.hpp"

namespace nonmarkov::master {

/// |u| below this marks a coefficient sample as singular.
inline constexpr double kSingularThreshold = 0.05;

struct CoefficientTrajectory {
    greenfn::TimeGrid grid;
    double omega_c{0.0};
    std::vector<double> omega_prime;
    std::vector<double> gamma;
    std::vector<double> gamma_tilde;
    std::vector<bool> singular;

    std::size_t size() const { return gamma.size(); }
    /// First flagged index in [begin, end], if any.
    std::optional<std::size_t> first_singular(std::size_t begin, std::size_t end) const;
    /// Last index of the certified window starting at 0 (one before the first flag).
    std::size_t certified_end() const;
};

CoefficientTrajectory coefficients(const greenfn::EvolutionProblem& problem,
                                   const spectral::KernelTable& kernels,
                                   const greenfn::GreenTrajectory& u,
                                   const greenfn::FluctuationTrajectory& v);

/// Density matrix on Fock states |0⟩..|n_max⟩.
class FockDensityMatrix {
public:
    explicit FockDensityMatrix(Eigen::MatrixXcd rho);

    static FockDensityMatrix fock(std::size_t n, std::size_t n_max);
    /// Normalized coherent state truncated at n_max (renormalized after truncation).
    static FockDensityMatrix coherent(std::complex<double> alpha, std::size_t n_max);
    /// Σ_ij c_i c_j* |α_i⟩⟨α_j| with unnormalized |α⟩ = e^{αa†}|0⟩, renormalized to unit trace.
    static FockDensityMatrix superposition(std::span<const std::complex<double>> alphas,
                                           std::span<const std::complex<double>> coeffs,
                                           std::size_t n_max);

    const Eigen::MatrixXcd& matrix() const { return rho_; }
    Eigen::MatrixXcd& matrix() { return rho_; }
    std::size_t n_max() const { return static_cast<std::size_t>(rho_.rows()) - 1; }
    std::size_t dimension() const { return static_cast<std::size_t>(rho_.rows()); }

    std::complex<double> trace() const { return rho_.trace(); }
    double population(std::size_t n) const { return rho_(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)).real(); }
    double purity() const;
    double hermiticity_error() const;
    double min_eigenvalue() const;
    /// Σ_{n > n_max − 5} ρ_nn.
    double tail_population() const;

private:
    Eigen::MatrixXcd rho_;
};

/// Truncated annihilation operator on |0⟩..|n_max⟩.
Eigen::MatrixXcd annihilation(std::size_t n_max);

/// Right-hand side of the master equation at fixed coefficients.
Eigen::MatrixXcd master_rhs(const Eigen::MatrixXcd& rho, double omega_prime, double gamma, double gamma_tilde);

struct FockSnapshot {
    std::size_t step{0};
    double t{0.0};
    FockDensityMatrix rho;
    double trace_drift{0.0};
};

/// Classical RK4 over the coefficient grid with linearly interpolated midpoint
/// coefficients; snapshots at the requested step indices (ascending). Throws
/// Error(SingularWindow) if the window reaches a flagged sample and
/// Error(StepSize) if |tr ρ − 1| exceeds 1e-6.
std::vector<FockSnapshot> propagate_fock(const FockDensityMatrix& rho0, const CoefficientTrajectory& coeffs,
                                         std::span<const std::size_t> snapshot_steps);

/// W(z) = (2/π) tr[ρ D(z) P D(z)†] (coherent state gives (2/π)e^{−2|z−α|²}).
/// Throws Error(Truncation) if populations above n_max − 5 exceed 1e-8.
std::vector<double> wigner_from_density(const FockDensityMatrix& rho, std::span<const std::complex<double>> points);
double wigner_from_density(const FockDensityMatrix& rho, std::complex<double> z);

} // namespace nonmarkov::master
