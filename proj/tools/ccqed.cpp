// Command-line front end: ccqed <scenario> --config <path> [--out <path>] [--seed N]

#include "ccqed/errors.hpp"
#include "ccqed/scenario.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;

int report(const char* kind, std::string message, int code) {
    std::replace(message.begin(), message.end(), '\n', ' ');
    fmt::print(stderr, "error: {}: {}\n", kind, message);
    return code;
}

void write(const ccqed::OutputFile& file) {
    if (file.path.empty()) {
        std::cout << file.content;
        std::cout.flush();
        return;
    }
    std::ofstream out(file.path, std::ios::binary);
    if (!out) throw ccqed::ValidationError(fmt::format("cannot write output file '{}'", file.path));
    out << file.content;
    if (!out) throw ccqed::ValidationError(fmt::format("failed writing output file '{}'", file.path));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Steady-state entanglement of two atoms in coupled cavities"};
    std::string scenario_name;
    std::string config_path;
    std::string out_path;
    std::uint64_t seed = 0;
    app.add_option("scenario", scenario_name, "simulate | effective-vs-full | scaling | robustness | optimize")
        ->required();
    app.add_option("--config", config_path, "configuration file (key = value lines)")->required();
    auto* out_opt = app.add_option("--out", out_path, "output CSV path (default: config output_path or stdout)");
    auto* seed_opt = app.add_option("--seed", seed, "seed for the random initial state");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return report("usage", e.what(), kExitValidation);
    }

    try {
        const ccqed::Scenario scenario = ccqed::parse_scenario(scenario_name);
        const ccqed::ScenarioConfig config = ccqed::load_config(config_path);
        ccqed::RunOptions options;
        if (*out_opt) options.out = out_path;
        if (*seed_opt) options.seed = seed;
        const auto result = ccqed::run_scenario(scenario, config, options);
        for (const auto& note : result.notes) fmt::print(stderr, "{}\n", note);
        for (const auto& file : result.files) write(file);
    } catch (const ccqed::ValidationError& e) {
        return report("validation", e.what(), kExitValidation);
    } catch (const ccqed::NumericalError& e) {
        return report("numerical", e.what(), kExitNumerical);
    } catch (const std::exception& e) {
        return report("numerical", e.what(), kExitNumerical);
    }
    return 0;
}
