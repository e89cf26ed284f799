// greenfn.cpp: Retarded Green function u(t) and thermal fluctuation v(t)
//
// Both solvers work in a frame rotating at the kernel table's reference
// frequency, ũ(t) = e^{iω_ref t} u(t), which removes the carrier oscillation
// from the time stepping without changing the equation.

#include "nonmarkov/greenfn.hpp"

#include <cmath>
#include <sstream>

#include "nonmarkov/error.hpp"

namespace nonmarkov::greenfn {

namespace {

using cplx = std::complex<double>;

void check_table(const TimeGrid& grid, const spectral::KernelTable& kernels) {
    if (kernels.size() < grid.samples() || std::abs(kernels.dt - grid.dt) > 1e-15 * grid.dt) {
        throw Error(ErrorKind::Domain, "kernel table does not match the time grid");
    }
}

std::vector<cplx> to_rotating(const GreenTrajectory& u, double omega_ref, std::size_t upto) {
    std::vector<cplx> out(upto + 1);
    for (std::size_t k = 0; k <= upto; ++k) {
        out[k] = u.u[k] * std::polar(1.0, omega_ref * (u.grid.time(k) - u.grid.t0));
    }
    return out;
}

// Trapezoidal ∫₀^{t_k} K(t_k−τ) x(τ) dτ on stored rotating-frame samples.
cplx memory(const std::vector<cplx>& kernel, const std::vector<cplx>& x, std::size_t k, double dt) {
    if (k == 0) return {0.0, 0.0};
    cplx acc = 0.5 * (kernel[k] * x[0] + kernel[0] * x[k]);
    for (std::size_t j = 1; j < k; ++j) acc += kernel[k - j] * x[j];
    return dt * acc;
}

} // namespace

TimeGrid::TimeGrid(double t0_value, double dt_value, std::size_t steps)
    : t0(t0_value), dt(dt_value), n(steps) {
    if (!std::isfinite(t0) || !std::isfinite(dt) || !(dt > 0.0)) {
        throw Error(ErrorKind::Domain, "time grid needs finite t0 and dt > 0");
    }
    if (n < 1) throw Error(ErrorKind::Domain, "time grid needs at least one step");
}

TimeGrid TimeGrid::standard(double scale) { return TimeGrid(0.0, 1e-3 / scale, 20000); }

TimeGrid TimeGrid::covering(double horizon, double dt) {
    if (!(horizon > 0.0) || !(dt > 0.0)) throw Error(ErrorKind::Domain, "grid horizon and dt must be > 0");
    const auto steps = static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9));
    return TimeGrid(0.0, horizon / static_cast<double>(steps), steps);
}

std::size_t TimeGrid::index_of(double t) const {
    const double k = std::round((t - t0) / dt);
    if (k <= 0.0) return 0;
    if (k >= static_cast<double>(n)) return n;
    return static_cast<std::size_t>(k);
}

spectral::KernelTable make_kernels(const EvolutionProblem& problem) {
    return spectral::tabulate_kernels(problem.model, problem.bath, problem.omega_c, problem.grid.dt,
                                      problem.grid.n);
}

GreenTrajectory solve_u(const EvolutionProblem& problem, const spectral::KernelTable& kernels) {
    const TimeGrid& grid = problem.grid;
    check_table(grid, kernels);
    const double dt = grid.dt;
    const auto& K = kernels.g;
    const cplx detuning_step(0.0, 0.5 * dt * (problem.omega_c - kernels.omega_ref));
    const cplx implicit = 1.0 + detuning_step + 0.25 * dt * dt * K[0];

    std::vector<cplx> x(grid.samples());
    x[0] = 1.0;
    cplx mem = 0.0;  // memory integral at t_k
    for (std::size_t k = 0; k < grid.n; ++k) {
        // memory at t_{k+1} without the implicit j = k+1 endpoint
        cplx partial = 0.5 * K[k + 1] * x[0];
        for (std::size_t j = 1; j <= k; ++j) partial += K[k + 1 - j] * x[j];
        partial *= dt;
        x[k + 1] = (x[k] * (1.0 - detuning_step) - 0.5 * dt * (mem + partial)) / implicit;
        mem = partial + 0.5 * dt * K[0] * x[k + 1];
        if (!(std::abs(x[k + 1]) <= 1.0 + kDivergenceBound)) {
            std::ostringstream os;
            os << "retarded Green function diverged at step " << k + 1 << " (t=" << grid.time(k + 1)
               << ", |u|=" << std::abs(x[k + 1]) << "); reduce dt";
            throw Error(ErrorKind::SolverInstability, os.str());
        }
    }

    GreenTrajectory out{grid, std::vector<cplx>(grid.samples())};
    out.u[0] = 1.0;
    for (std::size_t k = 1; k <= grid.n; ++k) {
        out.u[k] = x[k] * std::polar(1.0, -kernels.omega_ref * (grid.time(k) - grid.t0));
    }
    return out;
}

GreenTrajectory solve_u(const EvolutionProblem& problem) { return solve_u(problem, make_kernels(problem)); }

FluctuationTrajectory solve_v(const EvolutionProblem& problem, const spectral::KernelTable& kernels,
                              const GreenTrajectory& u) {
    const TimeGrid& grid = problem.grid;
    check_table(grid, kernels);
    if (u.size() != grid.samples()) throw Error(ErrorKind::Domain, "u trajectory does not match the time grid");
    FluctuationTrajectory out{grid, std::vector<double>(grid.samples(), 0.0)};
    if (!kernels.thermal) return out;

    const double dt = grid.dt;
    const double h = 0.5 * dt;
    const auto& G = kernels.gtilde;
    const std::vector<cplx> x = to_rotating(u, kernels.omega_ref, grid.n);

    // V = aᴴ G a with trapezoid-weighted samples a_j; stepping k -> k+1 adds
    // h·x_k at j = k and h·x_{k+1} at j = k+1.
    std::vector<cplx> a(grid.samples(), 0.0);
    cplx V = 0.0;
    for (std::size_t k = 0; k < grid.n; ++k) {
        const cplx dk = h * x[k];
        const cplx dk1 = h * x[k + 1];
        cplx row_k = 0.0;   // Σ_j G(k−j) a_j
        cplx row_k1 = 0.0;  // Σ_j G(k+1−j) a_j
        for (std::size_t j = 0; j <= k; ++j) {
            row_k += G[k - j] * a[j];
            row_k1 += G[k + 1 - j] * a[j];
        }
        const cplx cross = std::conj(dk) * row_k + std::conj(dk1) * row_k1;
        const cplx self = std::conj(dk) * G[0] * dk + std::conj(dk1) * G[0] * dk1 +
                          std::conj(dk) * std::conj(G[1]) * dk1 + std::conj(dk1) * G[1] * dk;
        V += cross + std::conj(cross) + self;
        a[k] += dk;
        a[k + 1] = dk1;
        if (std::abs(V.imag()) > 1e-8) {
            std::ostringstream os;
            os << "fluctuation v(t) acquired imaginary part " << V.imag() << " at step " << k + 1;
            throw Error(ErrorKind::Consistency, os.str());
        }
        out.v[k + 1] = V.real();
    }
    return out;
}

std::complex<double> udot(const EvolutionProblem& problem, const spectral::KernelTable& kernels,
                          const GreenTrajectory& u, std::size_t k) {
    check_table(problem.grid, kernels);
    const std::vector<cplx> x = to_rotating(u, kernels.omega_ref, k);
    const double t = u.grid.time(k) - u.grid.t0;
    const cplx mem = memory(kernels.g, x, k, problem.grid.dt) * std::polar(1.0, -kernels.omega_ref * t);
    return cplx(0.0, -problem.omega_c) * u.u[k] - mem;
}

double vdot(const EvolutionProblem& problem, const spectral::KernelTable& kernels,
            const GreenTrajectory& u, std::size_t k) {
    check_table(problem.grid, kernels);
    if (!kernels.thermal) return 0.0;
    const std::vector<cplx> x = to_rotating(u, kernels.omega_ref, k);
    return 2.0 * (std::conj(x[k]) * memory(kernels.gtilde, x, k, problem.grid.dt)).real();
}

Derivatives derivatives(const EvolutionProblem& problem, const spectral::KernelTable& kernels,
                        const GreenTrajectory& u) {
    check_table(problem.grid, kernels);
    const std::size_t n = u.size() - 1;
    const std::vector<cplx> x = to_rotating(u, kernels.omega_ref, n);
    Derivatives out{std::vector<cplx>(n + 1), std::vector<double>(n + 1, 0.0)};
    for (std::size_t k = 0; k <= n; ++k) {
        const double t = u.grid.time(k) - u.grid.t0;
        const cplx mem = memory(kernels.g, x, k, problem.grid.dt) * std::polar(1.0, -kernels.omega_ref * t);
        out.udot[k] = cplx(0.0, -problem.omega_c) * u.u[k] - mem;
        if (kernels.thermal) {
            out.vdot[k] = 2.0 * (std::conj(x[k]) * memory(kernels.gtilde, x, k, problem.grid.dt)).real();
        }
    }
    return out;
}

} // namespace nonmarkov::greenfn
