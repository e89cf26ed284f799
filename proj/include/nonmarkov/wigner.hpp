// wigner.hpp: Phase-space observables for superpositions of coherent states
//
// Coherent states use the unnormalized convention |α⟩ = e^{αa†}|0⟩. For an
// initial state Σ_ij c_ij |α_i⟩⟨α_j| the Wigner function at time t is
// Σ_ij c_ij 𝔍(z, t | α_i, α_j*), with the Gaussian propagating function
//
//   𝔍 = (Ω/π) exp{−Ω|z|² + Ω z* u α₀ + Ω α₀'* u* z + α₀'*(1 − Ω|u|²)α₀},
//   Ω(t) = 2/(1 + 2v(t)).

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace nonmarkov::wigner {

/// N(|α⟩ + |−α⟩) with N = 1/sqrt(4 cosh|α|²).
struct CatState {
    std::complex<double> alpha{0.0, 0.0};
    double norm{0.5};

    explicit CatState(std::complex<double> alpha_value);
};

struct WignerParams {
    std::complex<double> u{1.0, 0.0};
    double Omega{2.0};

    /// Ω = 2/(1 + 2v). Throws Error(Domain) for v < −1e-6 (tiny negatives are clamped).
    static WignerParams from(std::complex<double> u, double v);
    double v() const { return 1.0 / Omega - 0.5; }
};

std::complex<double> propagator_eval(const WignerParams& params, std::complex<double> z,
                                     std::complex<double> alpha0, std::complex<double> alpha0p_conj);

/// Finite superposition Σ_i c_i |α_i⟩ (unnormalized coherent states).
struct CoherentSuperposition {
    std::vector<std::complex<double>> alphas;
    std::vector<std::complex<double>> coeffs;

    static CoherentSuperposition cat(const CatState& cat);
    /// ⟨ψ|ψ⟩ with ⟨α|β⟩ = e^{α*β}.
    double norm_squared() const;
};

/// Σ_ij c_i c_j* 𝔍(z | α_i, α_j*).
double superposition_wigner_eval(const CoherentSuperposition& state, const WignerParams& params,
                                 std::complex<double> z);

struct CatComponents {
    double plus{0.0};          // W_α
    double minus{0.0};         // W_−α
    double interference{0.0};  // W_I

    double total() const { return plus + minus + interference; }
};

CatComponents cat_wigner_components(const CatState& cat, const WignerParams& params, std::complex<double> z);
double cat_wigner_eval(const CatState& cat, const WignerParams& params, std::complex<double> z);

/// F = exp{−2|α|²(1 − |u|²/(1 + 2v))}.
double fringe_visibility(const CatState& cat, std::complex<double> u, double v);

/// (2/π)/(1 + 2n̄) · exp{−2|z|²/(1 + 2n̄)}.
double thermal_wigner(double nbar, std::complex<double> z);

struct FrameGrid {
    double x_min{-1.0};
    double x_max{1.0};
    std::size_t nx{201};
    double y_min{-1.0};
    double y_max{1.0};
    std::size_t ny{201};

    /// Square grid over ±(|uα| + 4/sqrt(Ω)).
    static FrameGrid standard(const CatState& cat, const WignerParams& params, std::size_t points = 201);

    double dx() const { return (x_max - x_min) / static_cast<double>(nx - 1); }
    double dy() const { return (y_max - y_min) / static_cast<double>(ny - 1); }
    double x(std::size_t i) const { return x_min + dx() * static_cast<double>(i); }
    double y(std::size_t j) const { return y_min + dy() * static_cast<double>(j); }
    std::complex<double> point(std::size_t i, std::size_t j) const { return {x(i), y(j)}; }
    bool contains(std::complex<double> z) const;

    bool operator==(const FrameGrid&) const = default;
};

/// W on a grid; row j is y(j), column i is x(i). Components are kept so the
/// peak-ratio visibility can be read off the frame.
struct WignerFrame {
    double t{0.0};
    FrameGrid grid;
    Eigen::MatrixXd values;
    Eigen::MatrixXd plus;
    Eigen::MatrixXd minus;
    Eigen::MatrixXd interference;

    /// Riemann sum Σ W ΔxΔy.
    double integral() const;
};

/// Throws Error(Extent) if either peak ±uα lies outside the grid.
WignerFrame render_frame(const CatState& cat, const WignerParams& params, const FrameGrid& grid, double t = 0.0);

struct PeakReading {
    double visibility{0.0};
    std::complex<double> plus_peak;   // grid location of max W_α
    std::complex<double> minus_peak;  // grid location of max W_−α
};

/// ½ max|W_I| / sqrt(max W_α · max W_−α) read from the sampled components.
PeakReading peak_visibility(const WignerFrame& frame);

} // namespace nonmarkov::wigner
