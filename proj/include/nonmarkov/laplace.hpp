// laplace.hpp: Laplace-domain structure of the retarded Green function
//
// ũ(s) = i / (is − ω_c − Σ(s)),  Σ(s) = ∫ dω/2π J(ω)/(is − ω).
// On the imaginary axis Σ(−iω ± 0⁺) = Δ(ω) ∓ iJ(ω)/2. Real poles s = −iΩ outside
// the support of J are bound states; they satisfy Ω − ω_c = Δ(Ω) and carry
// residue Z = 1/(1 − Δ'(Ω)). Everything else (branch-cut discontinuity plus
// the complex resonances reached through it) is collected in a single
// real-frequency continuum integral.

#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "nonmarkov/greenfn.hpp"
#include "nonmarkov/spectral.hpp"

namespace nonmarkov::laplace {

/// Relative distance from a band edge below which a root is reported as marginal.
inline constexpr double kMarginalDistance = 1e-9;

struct BoundPole {
    double omega{0.0};
    double residue{0.0};
    bool marginal{false};
};

struct PoleReport {
    std::vector<BoundPole> bound_poles;
    double omega_e{0.0};    // lower support edge (branch point)
    double omega_max{0.0};  // upper support edge, +inf for half-line models
    std::optional<double> critical_coupling;
    double continuum_weight{0.0};

    /// Σ Z_j over non-marginal poles.
    double residue_sum() const;
    /// residue_sum() + continuum_weight − 1.
    double sum_rule_residual() const;
    std::size_t count() const;
};

/// Σ(s). Closed form for the waveguide, quadrature otherwise. Throws
/// Error(Branch) for s on the cut (Re s = 0, −Im s inside the support).
std::complex<double> sigma(const spectral::SpectralModel& model, std::complex<double> s);

/// Lamb shift Δ(ω) = P∫ dω'/2π J(ω')/(ω − ω'). Closed form for the waveguide.
double delta(const spectral::SpectralModel& model, double omega);

/// Δ(ω) by symmetric-excision principal-value quadrature for any model.
double delta_quadrature(const spectral::SpectralModel& model, double omega);

/// Δ'(ω) for ω outside the support.
double delta_prime(const spectral::SpectralModel& model, double omega);

/// All bound-state roots of Ω − ω_c − Δ(Ω) = 0 outside the support, residues attached.
PoleReport find_bound_poles(const spectral::SpectralModel& model, double omega_c);

/// Z = 1/(1 − Δ'(Ω)). Throws Error(Consistency) if Z ∉ (0, 1).
double residue_at(const spectral::SpectralModel& model, double omega_c, double Omega);

/// η_c = sqrt(2 − |ω_c − ω₀|/ξ₀); 0 when |ω_c − ω₀| ≥ 2ξ₀.
double critical_coupling(double omega_c, double omega0, double xi0);

/// ∫ dω/2π J/[(ω − ω_c − Δ)² + (J/2)²] over the support.
double continuum_weight(const spectral::SpectralModel& model, double omega_c);

/// u(t) = Σ_j Z_j e^{−iΩ_j t} + ∫ dω/2π J e^{−iωt}/[(ω−ω_c−Δ)² + (J/2)²].
greenfn::GreenTrajectory reconstruct_u(const spectral::SpectralModel& model, double omega_c,
                                       const greenfn::TimeGrid& grid, const PoleReport& poles);
greenfn::GreenTrajectory reconstruct_u(const spectral::SpectralModel& model, double omega_c,
                                       const greenfn::TimeGrid& grid);

struct MarkovLimit {
    double shifted_frequency{0.0};  // ω_c + Δ(ω_c)
    double decay_rate{0.0};         // J(ω_c)/2
};

/// Throws Error(Domain) when ω_c is outside the support.
MarkovLimit markov_limit(const spectral::SpectralModel& model, double omega_c);

struct SteadyEnvelope {
    double amplitude{0.0};  // A(η) = (η² − 2)/(η² − 1)
    double frequency{0.0};  // ω(η) = η² ξ₀ / sqrt(η² − 1)
};

/// Late-time envelope u_st(t) = A e^{−iω₀t} cos(ω(η)t) at resonance ω_c = ω₀.
/// Throws Error(Domain) for η ≤ √2.
SteadyEnvelope steady_envelope(double eta, double xi0 = 1.0);

} // namespace nonmarkov::laplace
