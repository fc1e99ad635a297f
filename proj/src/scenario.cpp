#include "ccqed/scenario.hpp"

#include "ccqed/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <filesystem>

namespace ccqed {

namespace {

constexpr double kRangeTol = 1e-6;

void check_populations(const Trajectory& tr) {
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
        for (std::size_t j = 0; j < tr.labels.size(); ++j) {
            const double v = tr.populations[k][j];
            if (v < -kRangeTol || v > 1.0 + kRangeTol) {
                throw NumericalError(fmt::format("{} = {} at gt = {} is outside [0, 1]", tr.labels[j], v, tr.times[k]));
            }
        }
    }
}

void check_horizon(double t_end, std::size_t output_points) {
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ValidationError(fmt::format("t_end must be positive, got {}", t_end));
    if (output_points < 2) throw ValidationError(fmt::format("output_points must be >= 2, got {}", output_points));
}

constexpr double kFractions[] = {-0.05, -0.04, -0.03, -0.02, -0.01, 0.0, 0.01, 0.02, 0.03, 0.04, 0.05};

std::string suffixed(const std::string& path, const std::string& suffix) {
    const std::filesystem::path p(path);
    auto name = p.stem().string() + suffix + p.extension().string();
    return (p.parent_path() / name).string();
}

}  // namespace

double max_ground_leakage(const Trajectory& tr) {
    double worst = 0.0;
    for (const auto& row : tr.populations) {
        double sum = 0.0;
        for (double v : row) sum += v;
        worst = std::max(worst, std::abs(1.0 - sum));
    }
    return worst;
}

Trajectory simulate_full(const SystemParams& p, const std::array<Complex, 4>& amplitudes, double t_end,
                         std::size_t output_points) {
    check_horizon(t_end, output_points);
    const Operator h = full_hamiltonian(p);
    const auto terms = lindblad_terms(p, Basis::Site);
    const auto observables = atomic_projectors(p.n_max).observables();
    Trajectory tr =
        integrate(h, terms, ground_state(amplitudes, p.n_max), {t_end, max_step(p), output_points}, observables);
    check_populations(tr);
    return tr;
}

Trajectory simulate_effective(const SystemParams& p, const std::array<Complex, 4>& amplitudes, double t_end,
                              std::size_t output_points) {
    check_horizon(t_end, output_points);
    const EffectiveModel em = closed_form_model(p);
    Trajectory tr = integrate(em.h_eff, em.jumps, reduced_state(amplitudes), {t_end, reduced_max_step(em), output_points},
                              reduced_observables());
    check_populations(tr);
    return tr;
}

Comparison effective_vs_full(const SystemParams& p, const std::array<Complex, 4>& amplitudes, double t_end,
                             std::size_t output_points) {
    Comparison c{simulate_full(p, amplitudes, t_end, output_points),
                 simulate_effective(p, amplitudes, t_end, output_points), 0.0};
    const auto full = c.full.series("P_S");
    const auto eff = c.effective.series("P_S");
    for (std::size_t k = 0; k < full.size(); ++k) c.max_abs_diff = std::max(c.max_abs_diff, std::abs(full[k] - eff[k]));
    return c;
}

RobustnessGrid robustness_grid(const SystemParams& p, Target target, RobustnessAxes axes) {
    RobustnessGrid grid;
    grid.fractions.assign(std::begin(kFractions), std::end(kFractions));
    grid.min_fidelity = 1.0;
    for (double a : kFractions) {
        std::vector<double> row;
        for (double b : kFractions) {
            SystemParams q = p;
            if (axes == RobustnessAxes::JAndDelta) {
                q.J *= 1.0 + a;
                q.delta *= 1.0 + b;
            } else {
                q.Delta *= 1.0 + a;
                q.g *= 1.0 + b;
            }
            const double f = effective_fidelity(closed_form_model(q), target);
            grid.min_fidelity = std::min(grid.min_fidelity, f);
            row.push_back(f);
        }
        grid.fidelity.push_back(std::move(row));
    }
    return grid;
}

std::string format_number(double value) { return fmt::format("{:.12g}", value); }

std::string trajectory_csv(const Trajectory& tr) {
    std::string out = "gt";
    for (const auto& label : tr.labels) out += "," + label;
    out += "\n";
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
        out += format_number(tr.times[k]);
        for (double v : tr.populations[k]) out += "," + format_number(v);
        out += "\n";
    }
    return out;
}

std::string comparison_csv(const Comparison& c) {
    std::string out = "gt,P_S_full,P_S_eff,abs_diff\n";
    const auto full = c.full.series("P_S");
    const auto eff = c.effective.series("P_S");
    for (std::size_t k = 0; k < full.size(); ++k) {
        out += fmt::format("{},{},{},{}\n", format_number(c.full.times[k]), format_number(full[k]), format_number(eff[k]),
                           format_number(std::abs(full[k] - eff[k])));
    }
    out += fmt::format("# max_abs_diff={}\n", format_number(c.max_abs_diff));
    return out;
}

std::string scaling_csv(const ScalingResult& r) {
    std::string out = "C,infidelity\n";
    for (std::size_t k = 0; k < r.C_values.size(); ++k) {
        out += fmt::format("{},{}\n", format_number(r.C_values[k]), format_number(r.infidelities[k]));
    }
    out += fmt::format("# slope={}, prefactor={}\n", format_number(r.fit_slope), format_number(r.fit_prefactor));
    return out;
}

std::string robustness_csv(const RobustnessGrid& grid, RobustnessAxes axes, Target target) {
    const char* header = axes == RobustnessAxes::JAndDelta ? "frac_dJ,frac_ddelta" : "frac_dDelta,frac_dg";
    std::string out = fmt::format("{},F_{}\n", header, to_string(target));
    for (std::size_t i = 0; i < grid.fractions.size(); ++i) {
        for (std::size_t j = 0; j < grid.fractions.size(); ++j) {
            out += fmt::format("{},{},{}\n", format_number(grid.fractions[i]), format_number(grid.fractions[j]),
                               format_number(grid.fidelity[i][j]));
        }
    }
    out += fmt::format("# min_F_{}={}\n", to_string(target), format_number(grid.min_fidelity));
    return out;
}

std::string optimize_csv(const OptimalSolution& s) {
    return fmt::format("Delta,delta,J,predicted_infidelity\n{},{},{},{}\n", format_number(s.Delta), format_number(s.delta),
                       format_number(s.J), format_number(s.predicted_infidelity));
}

ScenarioResult run_scenario(Scenario scenario, const ScenarioConfig& config, const RunOptions& options) {
    if (config.scenario && *config.scenario != scenario) {
        throw ValidationError(fmt::format("config declares scenario '{}' but '{}' was requested", to_string(*config.scenario),
                                          to_string(scenario)));
    }
    const std::string out_path = options.out.value_or(config.output_path.value_or(""));
    const Target target = resolve_target(config);
    const double t_end = config.t_end.value_or(3000.0);
    const std::size_t points = config.output_points.value_or(201);

    ScenarioResult result;
    auto add_warnings = [&](const SystemParams& p) {
        for (auto& w : p.warnings()) result.notes.push_back("warning: " + w);
    };
    auto check_leakage = [&](const Trajectory& tr) {
        const double leak = max_ground_leakage(tr);
        if (leak > kLeakageWarning) {
            result.notes.push_back(fmt::format(
                "warning: up to {:.3g} of the population leaves the ground subspace (excited atoms or photons)", leak));
        }
    };
    auto initial_amplitudes = [&]() -> std::array<Complex, 4> {
        const auto seed = options.seed ? options.seed : config.seed;
        const InitialState kind = config.initial.value_or(seed ? InitialState::Random : InitialState::Ground);
        if (kind == InitialState::Ground) return {1.0, 0.0, 0.0, 0.0};
        return random_ground_amplitudes(seed.value_or(1));
    };

    switch (scenario) {
        case Scenario::Simulate: {
            const SystemParams p = resolve_params(config);
            add_warnings(p);
            const Trajectory tr = simulate_full(p, initial_amplitudes(), t_end, points);
            check_leakage(tr);
            result.files.push_back({out_path, trajectory_csv(tr)});
            break;
        }
        case Scenario::EffectiveVsFull: {
            const SystemParams p = resolve_params(config);
            add_warnings(p);
            const Comparison c = effective_vs_full(p, initial_amplitudes(), t_end, points);
            check_leakage(c.full);
            result.files.push_back({out_path, comparison_csv(c)});
            break;
        }
        case Scenario::Scaling: {
            if (config.kappa || config.gamma || config.C) {
                throw ValidationError("scaling takes C_list and kappa_over_gamma, not kappa, gamma or C");
            }
            const std::vector<double> C_list =
                config.C_list.empty() ? std::vector<double>{50.0, 100.0, 200.0, 400.0} : config.C_list;
            const ScalingResult r =
                scaling_study(C_list, config.kappa_over_gamma.value_or(0.5), target, config.g.value_or(1.0));
            for (const auto& point : r.points) {
                if (point.on_boundary) {
                    result.notes.push_back(fmt::format("warning: optimal J at C = {} lies on the scan boundary (J = {})",
                                                       format_number(point.C), format_number(point.params.J)));
                }
            }
            result.files.push_back({out_path, scaling_csv(r)});
            break;
        }
        case Scenario::Robustness: {
            const SystemParams p = resolve_params(config);
            add_warnings(p);
            const auto first = robustness_grid(p, target, RobustnessAxes::JAndDelta);
            const auto second = robustness_grid(p, target, RobustnessAxes::DetuningAndCoupling);
            const std::string a = robustness_csv(first, RobustnessAxes::JAndDelta, target);
            const std::string b = robustness_csv(second, RobustnessAxes::DetuningAndCoupling, target);
            if (out_path.empty()) {
                result.files.push_back({"", a + "\n" + b});
            } else {
                result.files.push_back({out_path, a});
                result.files.push_back({suffixed(out_path, "_Delta_g"), b});
            }
            break;
        }
        case Scenario::Optimize: {
            const auto [kappa, gamma] = resolve_dissipation(config);
            const double g = config.g.value_or(1.0);
            const OptimalSolution s = config.J ? optimal_params(g, kappa, gamma, target, *config.J)
                                               : optimal_params(g, kappa, gamma, target);
            if (s.on_boundary) {
                result.notes.push_back(
                    fmt::format("warning: optimal J lies on the scan boundary (J = {})", format_number(s.J)));
            }
            result.files.push_back({out_path, optimize_csv(s)});
            break;
        }
    }
    return result;
}

}  // namespace ccqed
