// nonmarkov: scenario-driven front end
//
//   nonmarkov <solve|poles|wigner|oracle-check|sweep> --scenario <path> [--out <dir>]
//
// Exit codes: 0 ok, 1 oracle check failed, 2 error (JSON on stderr).

#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <utility>

#include "CLI11.hpp"

#include "nonmarkov/error.hpp"
#include "nonmarkov/pipeline.hpp"
#include "nonmarkov/scenario.hpp"

namespace nm = nonmarkov;

int main(int argc, char** argv) {
    CLI::App app{"Non-Markovian cavity dynamics in structured reservoirs"};
    app.require_subcommand(1, 1);
    std::string scenario_path;
    std::string out_dir;
    const std::pair<const char*, const char*> commands[] = {
        {"solve", "Integrate u(t), v(t) and the master-equation coefficients"},
        {"poles", "Bound-state poles, residues and the sum rule"},
        {"wigner", "Cat-state Wigner frames on a common grid"},
        {"oracle-check", "Compare closed forms against Fock-space propagation"},
        {"sweep", "Pole structure across a list of couplings"},
    };
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--scenario", scenario_path, "Scenario file")->required();
        sub->add_option("--out", out_dir, "Output directory (overrides output.dir)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << nm::cli::error_json("usage", e.what()) << '\n';
        return 2;
    }

    try {
        const auto command = nm::cli::parse_subcommand(app.get_subcommands().front()->get_name());
        const auto scenario = nm::cli::parse_scenario(scenario_path);
        const std::filesystem::path dir = out_dir.empty() ? scenario.output_dir : std::filesystem::path(out_dir);
        const auto outcome = nm::cli::run(*command, scenario, dir);
        for (const auto& f : outcome.files) std::cout << (dir / f).string() << '\n';
        return outcome.exit_code;
    } catch (const nm::Error& e) {
        std::cerr << nm::cli::error_json(nm::to_string(e.kind()), e.what()) << '\n';
    } catch (const std::exception& e) {
        std::cerr << nm::cli::error_json("internal", e.what()) << '\n';
    }
    return 2;
}
