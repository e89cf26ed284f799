// scenario.hpp: Scenario files for the command-line front end
//
// INI-style sections:
//
//   [model]   kind = waveguide | ohmic | tabulated
//             eta, omega0, xi0          (waveguide)
//             kappa, omega_cut, exponent (ohmic)
//             file                       (tabulated; relative to the scenario file)
//   [units]   frequency = xi0 | absolute (default xi0: frequencies in units of ξ₀,
//                                         times in units of 1/ξ₀)
//   [system]  omega_c                    (required)
//   [bath]    theta | nbar               (at most one; nbar is n̄ at ω₀, or at ω_c
//                                         for non-waveguide models; default theta = 0)
//   [grid]    dt = 1e-3, horizon = 20
//   [cat]     alpha = 1, alpha_im = 0, n_max = 25
//   [frames]  times = 0, 0.5 T0, 2 T0   (T0 = 2π/ω₀), points = 201
//   [sweep]   eta = 1.40, 1.42
//   [output]  dir = out, stride = 1

#pragma once

#include <complex>
#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "nonmarkov/greenfn.hpp"
#include "nonmarkov/spectral.hpp"

namespace nonmarkov::cli {

struct Scenario {
    spectral::SpectralModel model{spectral::Waveguide{}};
    std::filesystem::path table_file;  // tabulated models only
    double omega_c{0.0};
    spectral::BathSpec bath;
    double dt{1e-3};
    double horizon{20.0};
    std::complex<double> alpha{1.0, 0.0};
    std::size_t n_max{25};
    std::vector<double> frame_times;
    std::size_t frame_points{201};
    std::vector<double> sweep_etas;
    std::filesystem::path output_dir{"out"};
    std::size_t stride{1};

    greenfn::TimeGrid grid() const { return greenfn::TimeGrid::covering(horizon, dt); }
    greenfn::EvolutionProblem problem() const { return {omega_c, model, bath, grid()}; }
    /// 2π/ω₀ (waveguide) or 2π/ω_c.
    double period() const;

    bool operator==(const Scenario&) const = default;
};

/// Throws Error(Parse) naming the offending key.
Scenario parse_scenario(const std::filesystem::path& path);
Scenario parse_scenario_text(const std::string& text, const std::filesystem::path& base_dir = {});

/// Canonical scenario text in absolute units; parses back to an equal Scenario.
std::string echo_scenario(const Scenario& scenario);

} // namespace nonmarkov::cli
