#include "ccqed/config.hpp"

#include "ccqed/errors.hpp"
#include "ccqed/rates.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

namespace ccqed {

namespace {

struct Scenarios {
    Scenario value;
    const char* name;
};

constexpr Scenarios kScenarios[] = {
    {Scenario::Simulate, "simulate"},     {Scenario::EffectiveVsFull, "effective-vs-full"},
    {Scenario::Scaling, "scaling"},       {Scenario::Robustness, "robustness"},
    {Scenario::Optimize, "optimize"},
};

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(std::size_t line, const std::string& message) {
    throw ValidationError(fmt::format("line {}: {}", line, message));
}

double parse_double(std::string_view text, std::size_t line, std::string_view key) {
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
        fail(line, fmt::format("{} expects a number, got '{}'", key, text));
    }
    return value;
}

template <typename Int>
Int parse_int(std::string_view text, std::size_t line, std::string_view key) {
    Int value{};
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || value < Int{0}) {
        fail(line, fmt::format("{} expects a non-negative integer, got '{}'", key, text));
    }
    return value;
}

using Setter = std::function<void(ScenarioConfig&, std::string_view, std::size_t)>;

Setter number(std::optional<double> ScenarioConfig::*field, const char* key) {
    return [field, key](ScenarioConfig& c, std::string_view v, std::size_t line) { c.*field = parse_double(v, line, key); };
}

const std::map<std::string, Setter, std::less<>>& setters() {
    static const std::map<std::string, Setter, std::less<>> table = {
        {"scenario",
         [](ScenarioConfig& c, std::string_view v, std::size_t line) {
             try {
                 c.scenario = parse_scenario(v);
             } catch (const ValidationError& e) {
                 fail(line, e.what());
             }
         }},
        {"g", number(&ScenarioConfig::g, "g")},
        {"kappa", number(&ScenarioConfig::kappa, "kappa")},
        {"gamma", number(&ScenarioConfig::gamma, "gamma")},
        {"C", number(&ScenarioConfig::C, "C")},
        {"kappa_over_gamma", number(&ScenarioConfig::kappa_over_gamma, "kappa_over_gamma")},
        {"Omega", number(&ScenarioConfig::Omega, "Omega")},
        {"Omega_M", number(&ScenarioConfig::Omega_M, "Omega_M")},
        {"Delta", number(&ScenarioConfig::Delta, "Delta")},
        {"delta", number(&ScenarioConfig::delta, "delta")},
        {"J", number(&ScenarioConfig::J, "J")},
        {"t_end", number(&ScenarioConfig::t_end, "t_end")},
        {"theta_M",
         [](ScenarioConfig& c, std::string_view v, std::size_t line) {
             if (v == "pi") {
                 c.theta_M = std::numbers::pi;
             } else {
                 c.theta_M = parse_double(v, line, "theta_M");
             }
         }},
        {"n_max", [](ScenarioConfig& c, std::string_view v,
                     std::size_t line) { c.n_max = parse_int<int>(v, line, "n_max"); }},
        {"seed", [](ScenarioConfig& c, std::string_view v,
                    std::size_t line) { c.seed = parse_int<std::uint64_t>(v, line, "seed"); }},
        {"output_points", [](ScenarioConfig& c, std::string_view v,
                             std::size_t line) { c.output_points = parse_int<std::size_t>(v, line, "output_points"); }},
        {"output_path", [](ScenarioConfig& c, std::string_view v, std::size_t) { c.output_path = std::string(v); }},
        {"target",
         [](ScenarioConfig& c, std::string_view v, std::size_t line) {
             if (v == "S") {
                 c.target = Target::S;
             } else if (v == "T") {
                 c.target = Target::T;
             } else {
                 fail(line, fmt::format("target must be S or T, got '{}'", v));
             }
         }},
        {"initial",
         [](ScenarioConfig& c, std::string_view v, std::size_t line) {
             if (v == "ground") {
                 c.initial = InitialState::Ground;
             } else if (v == "random") {
                 c.initial = InitialState::Random;
             } else {
                 fail(line, fmt::format("initial must be ground or random, got '{}'", v));
             }
         }},
        {"C_list",
         [](ScenarioConfig& c, std::string_view v, std::size_t line) {
             c.C_list.clear();
             while (!v.empty()) {
                 const auto comma = v.find(',');
                 const auto item = trim(v.substr(0, comma));
                 c.C_list.push_back(parse_double(item, line, "C_list"));
                 if (comma == std::string_view::npos) break;
                 v.remove_prefix(comma + 1);
             }
             if (c.C_list.empty()) fail(line, "C_list is empty");
         }},
    };
    return table;
}

}  // namespace

Scenario parse_scenario(std::string_view name) {
    for (const auto& s : kScenarios) {
        if (name == s.name) return s.value;
    }
    throw ValidationError(fmt::format(
        "unknown scenario '{}' (expected simulate, effective-vs-full, scaling, robustness or optimize)", name));
}

const char* to_string(Scenario scenario) {
    for (const auto& s : kScenarios) {
        if (s.value == scenario) return s.name;
    }
    return "unknown";
}

ScenarioConfig parse_config(std::string_view text) {
    ScenarioConfig config;
    std::map<std::string, std::size_t, std::less<>> seen;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto newline = text.find('\n');
        std::string_view line = text.substr(0, newline);
        text.remove_prefix(newline == std::string_view::npos ? text.size() : newline + 1);

        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) fail(line_no, fmt::format("expected 'key = value', got '{}'", line));
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key.empty()) fail(line_no, "missing key before '='");
        const auto it = setters().find(key);
        if (it == setters().end()) fail(line_no, fmt::format("unknown key '{}'", key));
        if (value.empty()) fail(line_no, fmt::format("missing value for '{}'", key));
        if (const auto prev = seen.find(key); prev != seen.end()) {
            fail(line_no, fmt::format("duplicate key '{}' (first set on line {})", key, prev->second));
        }
        seen.emplace(std::string(key), line_no);
        it->second(config, value, line_no);
    }
    return config;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError(fmt::format("cannot open config file '{}'", path));
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

Target resolve_target(const ScenarioConfig& config) {
    if (config.target) return *config.target;
    if (config.theta_M) return std::cos(*config.theta_M) > 0.0 ? Target::T : Target::S;
    return Target::S;
}

std::pair<double, double> resolve_dissipation(const ScenarioConfig& config) {
    const bool direct = config.kappa || config.gamma;
    const bool via_c = config.C || config.kappa_over_gamma;
    if (direct && via_c) throw ValidationError("give either kappa and gamma or C and kappa_over_gamma, not both");
    if (direct) {
        if (!config.kappa || !config.gamma) throw ValidationError("kappa and gamma must be given together");
        return {*config.kappa, *config.gamma};
    }
    if (via_c) {
        if (!config.C || !config.kappa_over_gamma) throw ValidationError("C and kappa_over_gamma must be given together");
        const Dissipation d = dissipation_from_cooperativity(*config.C, *config.kappa_over_gamma, config.g.value_or(1.0));
        return {d.kappa, d.gamma};
    }
    throw ValidationError("missing dissipation: give kappa and gamma, or C and kappa_over_gamma");
}

SystemParams resolve_params(const ScenarioConfig& config) {
    SystemParams p;
    p.g = config.g.value_or(1.0);
    if (!(p.g > 0.0)) throw ValidationError(fmt::format("g must be positive, got {}", p.g));
    std::tie(p.kappa, p.gamma) = resolve_dissipation(config);
    p.Omega = config.Omega.value_or(p.g / 20.0);
    p.Omega_M = config.Omega_M.value_or(2.0 * p.Omega / 5.0);
    p.n_max = config.n_max.value_or(2);

    const Target target = resolve_target(config);
    p.theta_M = config.theta_M.value_or(target_phase(target));

    if (config.Delta.has_value() != config.delta.has_value()) {
        throw ValidationError("Delta and delta must be given together (or both omitted to use the optimal values)");
    }
    if (config.Delta) {
        p.Delta = *config.Delta;
        p.delta = *config.delta;
        p.J = config.J.value_or(0.0);
    } else {
        const OptimalSolution opt = config.J ? optimal_params(p.g, p.kappa, p.gamma, target, *config.J)
                                             : optimal_params(p.g, p.kappa, p.gamma, target);
        p.Delta = opt.Delta;
        p.delta = opt.delta;
        p.J = opt.J;
    }
    p.validate();
    return p;
}

}  // namespace ccqed
