// greenfn.hpp: Retarded Green function u(t) and thermal fluctuation v(t)
//
// u̇(t) + iω_c u(t) + ∫₀ᵗ g(t−τ) u(τ) dτ = 0,  u(0) = 1
// v(t) = ∫₀ᵗ dτ₁ ∫₀ᵗ dτ₂ u*(τ₁) g̃(τ₁−τ₂) u(τ₂)

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "nonmarkov/spectral.hpp"

namespace nonmarkov::greenfn {

inline constexpr double kSolverEpsilon = 1e-6;
inline constexpr double kDivergenceBound = 1e-3;

struct TimeGrid {
    double t0{0.0};
    double dt{1e-3};
    std::size_t n{20000};  // number of steps; samples are k = 0..n

    TimeGrid() = default;
    TimeGrid(double t0_value, double dt_value, std::size_t steps);

    /// dt = 1e-3/scale over a horizon of 20/scale.
    static TimeGrid standard(double scale = 1.0);
    /// Uniform grid covering [0, horizon] with step close to dt (horizon is hit exactly).
    static TimeGrid covering(double horizon, double dt);

    double time(std::size_t k) const { return t0 + dt * static_cast<double>(k); }
    double horizon() const { return time(n); }
    std::size_t samples() const { return n + 1; }
    /// Index of the sample nearest to time t (clamped to the grid).
    std::size_t index_of(double t) const;

    bool operator==(const TimeGrid&) const = default;
};

struct EvolutionProblem {
    double omega_c{0.0};
    spectral::SpectralModel model;
    spectral::BathSpec bath;
    TimeGrid grid;
};

struct GreenTrajectory {
    TimeGrid grid;
    std::vector<std::complex<double>> u;

    std::complex<double> operator[](std::size_t k) const { return u[k]; }
    std::size_t size() const { return u.size(); }
};

struct FluctuationTrajectory {
    TimeGrid grid;
    std::vector<double> v;

    double operator[](std::size_t k) const { return v[k]; }
    std::size_t size() const { return v.size(); }
};

/// Kernel tables on the problem grid, rotating at ω_c.
spectral::KernelTable make_kernels(const EvolutionProblem& problem);

/// Implicit trapezoidal scheme for the integro-differential equation (second order in dt).
/// Throws Error(SolverInstability) when |u| exceeds 1 + 1e-3.
GreenTrajectory solve_u(const EvolutionProblem& problem, const spectral::KernelTable& kernels);
GreenTrajectory solve_u(const EvolutionProblem& problem);

/// Trapezoidal double sum, updated incrementally by boundary strips.
/// Throws Error(Consistency) when the imaginary residue exceeds 1e-8.
FluctuationTrajectory solve_v(const EvolutionProblem& problem, const spectral::KernelTable& kernels,
                              const GreenTrajectory& u);

/// u̇(t_k) = −iω_c u(t_k) − ∫₀^{t_k} g(t_k−τ) u(τ) dτ from the stored samples.
std::complex<double> udot(const EvolutionProblem& problem, const spectral::KernelTable& kernels,
                          const GreenTrajectory& u, std::size_t k);

/// v̇(t_k) = 2 Re[u*(t_k) ∫₀^{t_k} g̃(t_k−τ) u(τ) dτ].
double vdot(const EvolutionProblem& problem, const spectral::KernelTable& kernels,
            const GreenTrajectory& u, std::size_t k);

struct Derivatives {
    std::vector<std::complex<double>> udot;
    std::vector<double> vdot;
};

/// udot and vdot at every grid sample (one O(n²) pass).
Derivatives derivatives(const EvolutionProblem& problem, const spectral::KernelTable& kernels,
                        const GreenTrajectory& u);

} // namespace nonmarkov::greenfn
