#pragma once

#include "ccqed/model.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ccqed {

enum class Scenario { Simulate, EffectiveVsFull, Scaling, Robustness, Optimize };

enum class InitialState { Ground, Random };

Scenario parse_scenario(std::string_view name);
const char* to_string(Scenario scenario);

/// Parsed configuration. Unset optionals fall back to the defaults documented
/// in resolve_params() and the scenario runners.
struct ScenarioConfig {
    std::optional<Scenario> scenario;

    std::optional<double> g, kappa, gamma, C, kappa_over_gamma;
    std::optional<double> Omega, Omega_M, Delta, delta, J, theta_M;
    std::optional<int> n_max;
    std::optional<Target> target;

    std::optional<std::uint64_t> seed;
    std::optional<double> t_end;
    std::optional<std::size_t> output_points;
    std::optional<std::string> output_path;
    std::optional<InitialState> initial;
    std::vector<double> C_list;
};

/// Parses `key = value` lines. Blank lines and `#` comments (whole-line or
/// trailing) are ignored; keys are case-sensitive and unknown keys are
/// errors. theta_M accepts `0`, `pi` or a number in radians; target accepts
/// `S` or `T`; C_list is comma separated. Throws ValidationError with the
/// offending line number.
ScenarioConfig parse_config(std::string_view text);

/// Reads and parses a config file.
ScenarioConfig load_config(const std::string& path);

/// Target state: explicit `target`, else from theta_M (cos theta_M > 0 -> T,
/// otherwise S), else S.
Target resolve_target(const ScenarioConfig& config);

/// Dissipation from either (kappa, gamma) or (C, kappa_over_gamma); exactly
/// one pair must be given. Throws ValidationError otherwise.
std::pair<double, double> resolve_dissipation(const ScenarioConfig& config);

/// Full parameter set for a run.
///
/// Defaults: g = 1, Omega = g/20, Omega_M = 2 Omega/5, n_max = 2, theta_M from
/// the target. Delta and delta come from the optimal conditions when both are
/// absent: at the given J, or at the J-scan optimum when J is absent too.
/// Giving only one of Delta and delta is an error.
SystemParams resolve_params(const ScenarioConfig& config);

}  // namespace ccqed
