// spectral.hpp: Reservoir spectral densities, thermal occupation and bath kernels
//
// Units: hbar = k_B = 1. All frequencies share one unit (the waveguide hopping
// xi0 by convention) and times are measured in its inverse.

#pragma once

#include <complex>
#include <cstddef>
#include <filesystem>
#include <limits>
#include <variant>
#include <vector>

namespace nonmarkov::spectral {

enum class ModelKind { Waveguide, OhmicFamily, Tabulated };

/// Cavity side-coupled to a tight-binding waveguide: semicircular band
/// J(ω) = η²·sqrt(4ξ₀² − (ω−ω₀)²) on [ω₀−2ξ₀, ω₀+2ξ₀].
struct Waveguide {
    double eta{0.0};
    double omega0{0.0};
    double xi0{1.0};
    bool operator==(const Waveguide&) const = default;
};

/// J(ω) = 2π κ ω (ω/ω_cut)^(p−1) e^(−ω/ω_cut) on [0, ∞).
/// p = 1 Ohmic, p > 1 super-Ohmic, p < 1 sub-Ohmic.
struct OhmicFamily {
    double kappa{0.0};
    double omega_cut{1.0};
    double exponent{1.0};
    bool operator==(const OhmicFamily&) const = default;
};

/// Piecewise-linear J through the samples; zero outside [omega.front(), omega.back()].
struct Tabulated {
    std::vector<double> omega;
    std::vector<double> J;
    bool operator==(const Tabulated&) const = default;
};

struct Support {
    double lower{0.0};
    double upper{std::numeric_limits<double>::infinity()};

    bool bounded() const { return upper < std::numeric_limits<double>::infinity(); }
    bool contains(double omega) const { return omega >= lower && omega <= upper; }
    bool interior(double omega) const { return omega > lower && omega < upper; }
};

/// Quadrature nodes over the support with J sampled at each node:
/// ∫ f(ω) J(ω) dω ≈ Σ weight[i]·J[i]·f(omega[i]).
struct SpectralNodes {
    std::vector<double> omega;
    std::vector<double> weight;
    std::vector<double> J;

    std::size_t size() const { return omega.size(); }
};

class SpectralModel {
public:
    using Params = std::variant<Waveguide, OhmicFamily, Tabulated>;

    explicit SpectralModel(Waveguide params);
    explicit SpectralModel(OhmicFamily params);
    explicit SpectralModel(Tabulated params);

    /// Loads a two-column (ω, J) text file. Columns may be separated by
    /// whitespace, commas or semicolons; '#' starts a comment.
    static SpectralModel load_tabulated(const std::filesystem::path& path);

    ModelKind kind() const;
    const Params& params() const { return params_; }
    const Waveguide* waveguide() const { return std::get_if<Waveguide>(&params_); }
    const OhmicFamily* ohmic() const { return std::get_if<OhmicFamily>(&params_); }
    const Tabulated* tabulated() const { return std::get_if<Tabulated>(&params_); }

    double J(double omega) const;
    Support support() const;

    /// Natural frequency unit of the model (ξ₀, ω_cut, or a quarter of the table width).
    double scale() const;

    /// True when J vanishes identically.
    bool vanishes() const;

    /// Composite Gauss–Legendre nodes over the support. The panel layout resolves
    /// e^{−iωτ} for |τ| ≤ tau_max; each refinement level halves every panel.
    SpectralNodes nodes(double tau_max = 0.0, unsigned refinement = 0) const;

    bool operator==(const SpectralModel&) const = default;

private:
    Params params_;
};

/// Bath temperature θ = k_B T/ħ in the model's frequency unit; θ = 0 is zero temperature.
struct BathSpec {
    double theta{0.0};

    BathSpec() = default;
    explicit BathSpec(double theta_value);

    bool thermal() const { return theta > 0.0; }
    bool operator==(const BathSpec&) const = default;

    /// θ such that n̄(ω) = nbar.
    static BathSpec from_occupation(double omega, double nbar);
};

double eval_J(const SpectralModel& model, double omega);

/// Bose–Einstein occupation 1/(e^{ω/θ}−1). Zero at θ = 0. Throws Error(Domain) for ω ≤ 0 when θ > 0.
double eval_nbar(const BathSpec& bath, double omega);

/// g(τ) = ∫ dω/2π J(ω) e^{−iωτ}.
std::complex<double> eval_g(const SpectralModel& model, double tau);

/// g̃(τ) = ∫ dω/2π J(ω) n̄(ω) e^{−iωτ}.
std::complex<double> eval_gtilde(const SpectralModel& model, const BathSpec& bath, double tau);

/// ∫ dω/2π J(ω) w(ω) e^{−iωτ} for an arbitrary weight. Exposed for linearity checks.
template <typename Weight>
std::complex<double> weighted_kernel(const SpectralModel& model, double tau, Weight&& weight);

/// Kernels tabulated on τ_k = k·dt in a frame rotating at omega_ref:
/// g[k] = g(τ_k)·e^{iω_ref τ_k}, gtilde likewise. Negative lags follow from
/// conjugate symmetry.
struct KernelTable {
    double dt{0.0};
    double omega_ref{0.0};
    bool thermal{false};
    std::vector<std::complex<double>> g;
    std::vector<std::complex<double>> gtilde;

    std::size_t size() const { return g.size(); }
};

/// Tabulates both kernels for k = 0..steps. Refines the frequency rule until the
/// largest-lag sample is converged; throws Error(Numerical) otherwise.
KernelTable tabulate_kernels(const SpectralModel& model, const BathSpec& bath,
                             double omega_ref, double dt, std::size_t steps);

} // namespace nonmarkov::spectral

#include "nonmarkov/spectral_impl.hpp"
