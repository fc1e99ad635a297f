#pragma once

#include "ccqed/config.hpp"
#include "ccqed/effective.hpp"
#include "ccqed/lindblad.hpp"
#include "ccqed/rates.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace ccqed {

/// Full-model populations of |00>, |S>, |T>, |11> from `amplitudes` (on
/// |00>, |01>, |10>, |11>, cavities empty). Every population must lie in
/// [-1e-6, 1 + 1e-6]; otherwise NumericalError.
Trajectory simulate_full(const SystemParams& p, const std::array<Complex, 4>& amplitudes, double t_end,
                         std::size_t output_points);

/// Same populations from the closed-form reduced model.
Trajectory simulate_effective(const SystemParams& p, const std::array<Complex, 4>& amplitudes, double t_end,
                              std::size_t output_points);

/// Largest 1 - (P_00 + P_S + P_T + P_11) over the trajectory: population
/// held in excited atomic levels or cavity photons.
double max_ground_leakage(const Trajectory& trajectory);

/// Leakage above which runs report a warning.
inline constexpr double kLeakageWarning = 5e-3;

struct Comparison {
    Trajectory full;
    Trajectory effective;
    double max_abs_diff = 0.0;  // over P_S
};

Comparison effective_vs_full(const SystemParams& p, const std::array<Complex, 4>& amplitudes, double t_end,
                             std::size_t output_points);

enum class RobustnessAxes { JAndDelta, DetuningAndCoupling };

/// Steady-state target population of the closed-form reduced model with two
/// parameters scaled by (1 + a), (1 + b) for a, b in -0.05..0.05 in steps of 0.01.
/// JAndDelta varies (J, delta); DetuningAndCoupling varies (Delta, g).
struct RobustnessGrid {
    std::vector<double> fractions;
    std::vector<std::vector<double>> fidelity;  // [first axis][second axis]
    double min_fidelity = 0.0;
};

RobustnessGrid robustness_grid(const SystemParams& p, Target target, RobustnessAxes axes);

/// Text formatting, 12 significant digits.
std::string format_number(double value);
std::string trajectory_csv(const Trajectory& trajectory);
std::string comparison_csv(const Comparison& comparison);
std::string scaling_csv(const ScalingResult& result);
std::string robustness_csv(const RobustnessGrid& grid, RobustnessAxes axes, Target target);
std::string optimize_csv(const OptimalSolution& solution);

struct RunOptions {
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
};

/// One output stream; an empty path means standard output.
struct OutputFile {
    std::string path;
    std::string content;
};

struct ScenarioResult {
    std::vector<OutputFile> files;
    std::vector<std::string> notes;  // warnings for standard error
};

/// Runs a scenario. Output goes to options.out, else the config's
/// output_path, else standard output. Robustness writes its (Delta, g) grid
/// to a second file named with a `_Delta_g` suffix.
///
/// Defaults: t_end = 3000, output_points = 201, C_list = 50,100,200,400,
/// kappa_over_gamma = 0.5 for scaling; the initial state is |00> unless
/// `initial = random` or a seed is given (default seed 1).
ScenarioResult run_scenario(Scenario scenario, const ScenarioConfig& config, const RunOptions& options = {});

}  // namespace ccqed
