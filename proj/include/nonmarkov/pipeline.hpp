// pipeline.hpp: Subcommand runners behind the command-line front end
//
// Every runner writes its outputs plus scenario.echo.ini into the output
// directory. Numbers are printed with 12 significant digits so repeated runs
// are byte-identical.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nonmarkov/error.hpp"
#include "nonmarkov/greenfn.hpp"
#include "nonmarkov/master.hpp"
#include "nonmarkov/scenario.hpp"

namespace nonmarkov::cli {

enum class Subcommand { Solve, Poles, Wigner, OracleCheck, Sweep };

std::optional<Subcommand> parse_subcommand(std::string_view name);
std::string_view to_string(Subcommand command) noexcept;

/// u, v and master-equation coefficients on the scenario grid.
struct Solution {
    greenfn::EvolutionProblem problem;
    spectral::KernelTable kernels;
    greenfn::GreenTrajectory u;
    greenfn::FluctuationTrajectory v;
    master::CoefficientTrajectory coefficients;
};

Solution solve(const Scenario& scenario);

/// Frame times from the scenario, or five evenly spaced times over the horizon.
std::vector<double> frame_schedule(const Scenario& scenario);

struct RunOutcome {
    int exit_code{0};  // 0 ok, 1 oracle check failed
    std::vector<std::filesystem::path> files;  // relative to the output directory
};

/// Runs one subcommand. Module errors propagate as nonmarkov::Error.
RunOutcome run(Subcommand command, const Scenario& scenario, const std::filesystem::path& out_dir);

/// %.12g
std::string format_number(double x);

/// {"error": {"kind": ..., "message": ...}}
std::string error_json(std::string_view kind, std::string_view message);

} // namespace nonmarkov::cli
