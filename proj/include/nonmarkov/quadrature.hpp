// quadrature.hpp: Gauss–Legendre panel rules and adaptive quadrature wrappers

#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace nonmarkov::quad {

/// Nodes and weights of a composite rule: ∫ f(x) dx ≈ Σ weight[i]·f(node[i]).
struct Rule {
    std::vector<double> node;
    std::vector<double> weight;

    std::size_t size() const { return node.size(); }
};

/// 20-point Gauss–Legendre on each of `panels` equal panels of [a, b].
Rule composite_gauss_legendre(double a, double b, std::size_t panels);

/// Same, but on explicit panel breakpoints (must be increasing).
Rule composite_gauss_legendre(const std::vector<double>& breakpoints);

/// Globally adaptive 7–15 Gauss–Kronrod on a finite interval (at most 4000 panels).
/// Throws Error(Numerical) when the error estimate stays above max(abs_tol, rel_tol·|I|).
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-13, double rel_tol = 1e-12);

std::complex<double> integrate_complex(const std::function<std::complex<double>(double)>& f,
                                       double a, double b,
                                       double abs_tol = 1e-13, double rel_tol = 1e-12);

/// F[k] = Σ_i amplitude[i]·e^{−i·frequency[i]·k·dt} for k = 0..steps. Phases
/// advance by recurrence and are reseeded exactly every 64 steps.
std::vector<std::complex<double>> exponential_sums(const std::vector<double>& frequency,
                                                   const std::vector<double>& amplitude,
                                                   double dt, std::size_t steps);

} // namespace nonmarkov::quad
