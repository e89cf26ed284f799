// spectral_impl.hpp: template definitions for spectral.hpp

#pragma once

#include <cmath>
#include <numbers>
#include <sstream>

#include "nonmarkov/error.hpp"

namespace nonmarkov::spectral {

namespace detail {

struct KernelSum {
    std::complex<double> value;
    double l1;
};

template <typename Weight>
KernelSum sum_kernel(const SpectralNodes& nodes, double tau, Weight& weight) {
    std::complex<double> acc{0.0, 0.0};
    double l1 = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes.J[i] == 0.0) continue;
        const double c = nodes.weight[i] * nodes.J[i] * weight(nodes.omega[i]);
        acc += c * std::polar(1.0, -nodes.omega[i] * tau);
        l1 += std::abs(c);
    }
    const double norm = 1.0 / (2.0 * std::numbers::pi);
    return {acc * norm, l1 * norm};
}

} // namespace detail

template <typename Weight>
std::complex<double> weighted_kernel(const SpectralModel& model, double tau, Weight&& weight) {
    if (model.vanishes()) return {0.0, 0.0};
    const double t = std::abs(tau);
    // conjugate symmetry is exact for real weights; evaluate at |τ|
    std::complex<double> previous = detail::sum_kernel(model.nodes(t, 0), t, weight).value;
    for (unsigned level = 1; level <= 6; ++level) {
        const auto [current, l1] = detail::sum_kernel(model.nodes(t, level), t, weight);
        if (std::abs(current - previous) <= 1e-13 * l1) {
            return tau < 0.0 ? std::conj(current) : current;
        }
        previous = current;
    }
    std::ostringstream os;
    os << "kernel quadrature at tau=" << tau << " did not converge (last value " << previous << ")";
    throw Error(ErrorKind::Numerical, os.str());
}

} // namespace nonmarkov::spectral
