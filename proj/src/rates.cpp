#include "ccqed/rates.hpp"

#include "ccqed/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace ccqed {

double cooperativity(const SystemParams& p) {
    p.validate();
    if (p.kappa <= 0.0 || p.gamma <= 0.0) {
        throw ValidationError("cooperativity needs kappa > 0 and gamma > 0");
    }
    return p.g * p.g / (p.kappa * p.gamma);
}

Dissipation dissipation_from_cooperativity(double C, double kappa_over_gamma, double g) {
    if (!(C > 0.0) || !std::isfinite(C)) throw ValidationError(fmt::format("cooperativity must be positive, got {}", C));
    if (!(kappa_over_gamma > 0.0) || !std::isfinite(kappa_over_gamma)) {
        throw ValidationError(fmt::format("kappa_over_gamma must be positive, got {}", kappa_over_gamma));
    }
    if (!(g > 0.0)) throw ValidationError(fmt::format("g must be positive, got {}", g));
    const double gamma = g / std::sqrt(C * kappa_over_gamma);
    return {kappa_over_gamma * gamma, gamma};
}

double rate_fidelity(const SystemParams& p, const EffectiveModel& em, Target target) {
    const auto& r = em.rates;
    // Pumping rate 4 kappa_c*_1, loss 12 kappa_c*_2 + 9 gamma_eff.
    const double pump = 4.0 * (target == Target::S ? r.kappa_c1_1 : r.kappa_c2_1);
    const double loss = 12.0 * (target == Target::S ? r.kappa_c1_2 : r.kappa_c2_2) + 9.0 * r.gamma_eff;
    if (!(pump > 0.0)) {
        throw NumericalError(fmt::format("rate fidelity undefined: pumping rate into |{}> is zero (Omega = {})",
                                         to_string(target), p.Omega));
    }
    return loss / pump;
}

namespace {

struct Residuals {
    double first;
    double second;
};

Residuals condition_residuals(double g, double kappa, double gamma, double J, double Delta, double delta) {
    const double x = delta * delta - J * J;
    return {delta * g * g - Delta * x, kappa * (Delta * delta - g * g / 2.0) - gamma * x / 2.0};
}

double solve_reduced(double g, double kappa, double gamma, double J) {
    const double g2 = g * g;
    auto f = [&](double x) { return gamma * x * x - kappa * g2 * x - 2.0 * kappa * g2 * J * J; };
    auto df = [&](double x) { return 2.0 * gamma * x - kappa * g2; };

    double x = (kappa * g2 + std::sqrt(kappa * kappa * g2 * g2 + 8.0 * gamma * kappa * g2 * J * J)) / (2.0 * gamma);
    for (int it = 0; it < 8; ++it) {
        const double slope = df(x);
        if (slope == 0.0) break;
        const double next = x - f(x) / slope;
        if (!std::isfinite(next) || next <= 0.0) break;
        if (next == x) break;
        x = next;
    }
    if (x > 0.0 && std::isfinite(x) && std::abs(f(x)) <= 1e-13 * (gamma * x * x + kappa * g2 * x + 2.0 * kappa * g2 * J * J)) {
        return x;
    }

    // f(0) <= 0 and f grows without bound; bracket the positive root.
    double lo = 0.0;
    double hi = std::max(1.0, kappa * g2 / gamma);
    while (f(hi) < 0.0) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double predicted(double g, double kappa, double gamma, Target target, double Delta, double delta, double J) {
    SystemParams p;
    p.g = g;
    p.kappa = kappa;
    p.gamma = gamma;
    p.Omega = g / 20.0;  // the estimate is independent of Omega
    p.Delta = Delta;
    p.delta = delta;
    p.J = J;
    return rate_fidelity(p, closed_form_model(p), target);
}

}  // namespace

OptimalSolution optimal_params(double g, double kappa, double gamma, Target target, double J) {
    if (!(g > 0.0)) throw ValidationError(fmt::format("g must be positive, got {}", g));
    if (!(kappa > 0.0) || !(gamma > 0.0)) throw ValidationError("optimal parameters need kappa > 0 and gamma > 0");
    if (!(J > 0.0) || !std::isfinite(J)) {
        throw ValidationError(fmt::format("J must be finite and positive, got {} (J = 0 forces g^2 = Delta delta)", J));
    }

    const double x = solve_reduced(g, kappa, gamma, J);
    if (!(x > 0.0)) throw NumericalError(fmt::format("no positive root of the optimal conditions at J = {}", J));

    OptimalSolution s;
    s.target = target;
    s.J = J;
    s.delta = std::sqrt(x + J * J);
    s.Delta = s.delta * g * g / x;
    const Residuals r = condition_residuals(g, kappa, gamma, J, s.Delta, s.delta);
    s.residuals = {r.first, r.second};
    const double g3 = g * g * g;
    if (std::abs(r.first) > 1e-10 * g3 || std::abs(r.second) > 1e-8 * g3) {
        throw NumericalError(fmt::format("optimal conditions not met at J = {}: residuals {:.3e}, {:.3e}", J, r.first, r.second));
    }
    s.predicted_infidelity = predicted(g, kappa, gamma, target, s.Delta, s.delta, s.J);
    return s;
}

OptimalSolution optimal_params(double g, double kappa, double gamma, Target target, const JScan& scan) {
    if (scan.points < 2 || !(scan.J_over_g_min > 0.0) || !(scan.J_over_g_max > scan.J_over_g_min)) {
        throw ValidationError("J scan needs >= 2 points and 0 < J_min < J_max");
    }
    std::vector<double> grid(scan.points);
    std::vector<double> values(scan.points);
    const double lmin = std::log(scan.J_over_g_min);
    const double lmax = std::log(scan.J_over_g_max);
    std::size_t best = 0;
    for (std::size_t k = 0; k < scan.points; ++k) {
        const double frac = static_cast<double>(k) / static_cast<double>(scan.points - 1);
        grid[k] = g * std::exp(lmin + frac * (lmax - lmin));
        values[k] = optimal_params(g, kappa, gamma, target, grid[k]).predicted_infidelity;
        if (values[k] < values[best]) best = k;
    }
    OptimalSolution s = optimal_params(g, kappa, gamma, target, grid[best]);
    s.on_boundary = best == 0 || best + 1 == scan.points;
    s.scan_J = std::move(grid);
    s.scan_infidelity = std::move(values);
    return s;
}

SystemParams operating_point(double C, double kappa_over_gamma, Target target, double g, int n_max) {
    const Dissipation diss = dissipation_from_cooperativity(C, kappa_over_gamma, g);
    return operating_point(C, kappa_over_gamma, optimal_params(g, diss.kappa, diss.gamma, target), g, n_max);
}

SystemParams operating_point(double C, double kappa_over_gamma, const OptimalSolution& opt, double g, int n_max) {
    const Dissipation diss = dissipation_from_cooperativity(C, kappa_over_gamma, g);
    const Dissipation ref = dissipation_from_cooperativity(200.0, kappa_over_gamma, g);

    SystemParams p;
    p.g = g;
    p.kappa = diss.kappa;
    p.gamma = diss.gamma;
    p.Omega = (g / 20.0) * diss.kappa / ref.kappa;
    p.Omega_M = 2.0 * p.Omega / 5.0;
    p.Delta = opt.Delta;
    p.delta = opt.delta;
    p.J = opt.J;
    p.theta_M = target_phase(opt.target);
    p.n_max = n_max;
    p.validate();
    return p;
}

PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ValidationError("power-law fit: x and y differ in length");
    if (x.size() < 3) throw ValidationError(fmt::format("power-law fit needs at least 3 points, got {}", x.size()));
    const auto n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (!(x[k] > 0.0) || !(y[k] > 0.0)) throw ValidationError("power-law fit needs positive data");
        const double lx = std::log(x[k]);
        const double ly = std::log(y[k]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double denom = n * sxx - sx * sx;
    if (std::abs(denom) <= 1e-14 * n * sxx) throw ValidationError("power-law fit is degenerate: x values coincide");
    const double b = (n * sxy - sx * sy) / denom;
    const double a = (sy - b * sx) / n;
    return {-b, std::exp(a)};
}

ScalingResult scaling_study(std::span<const double> C_list, double kappa_over_gamma, Target target, double g) {
    if (C_list.size() < 3) throw ValidationError(fmt::format("scaling study needs at least 3 C values, got {}", C_list.size()));
    for (double C : C_list) {
        if (!(C >= 10.0)) throw ValidationError(fmt::format("scaling study needs C >= 10, got {}", C));
    }
    ScalingResult result;
    for (double C : C_list) {
        ScalingPoint point;
        point.C = C;
        const Dissipation diss = dissipation_from_cooperativity(C, kappa_over_gamma, g);
        const OptimalSolution opt = optimal_params(g, diss.kappa, diss.gamma, target);
        point.params = operating_point(C, kappa_over_gamma, opt, g);
        point.on_boundary = opt.on_boundary;
        const EffectiveModel em = closed_form_model(point.params);
        point.infidelity = 1.0 - effective_fidelity(em, target);
        point.rate_infidelity = rate_fidelity(point.params, em, target);
        if (!(point.infidelity > 0.0 && point.infidelity < 1.0)) {
            throw NumericalError(fmt::format("infidelity {} at C = {} is outside (0, 1)", point.infidelity, C));
        }
        result.C_values.push_back(C);
        result.infidelities.push_back(point.infidelity);
        result.points.push_back(std::move(point));
    }
    const PowerLawFit fit = fit_power_law(result.C_values, result.infidelities);
    result.fit_slope = fit.slope;
    result.fit_prefactor = fit.prefactor;
    return result;
}

double convergence_time(const EffectiveModel& em, Target target, const DensityMatrix& rho0, const OnsetSettings& settings) {
    if (!(settings.resolution > 0.0) || !(settings.horizon > 0.0)) {
        throw ValidationError("onset search needs positive resolution and horizon");
    }
    if (rho0.dim() != 4) throw ValidationError("onset search runs on the reduced 4-state model");
    const Eigen::Index idx = reduced::index_of(target);
    const double goal = settings.threshold * effective_steady_state(em).data()(idx, idx).real();
    const auto observables = reduced_observables();
    const auto label = observables[static_cast<std::size_t>(idx)].label;

    const double dt = std::min(reduced_max_step(em), settings.resolution);
    const double window = settings.resolution * 500.0;
    DensityMatrix rho = rho0;
    double t0 = 0.0;
    double prev = rho.data()(idx, idx).real();
    if (prev >= goal) return 0.0;
    while (t0 < settings.horizon) {
        const double span = std::min(window, settings.horizon - t0);
        const auto points = static_cast<std::size_t>(std::ceil(span / settings.resolution)) + 1;
        const Trajectory tr = integrate(em.h_eff, em.jumps, rho, {span, dt, points}, observables);
        const auto series = tr.series(label);
        for (std::size_t k = 1; k < series.size(); ++k) {
            if (series[k] >= goal) {
                const double tk = t0 + tr.times[k - 1];
                const double frac = (goal - series[k - 1]) / (series[k] - series[k - 1]);
                return tk + frac * (tr.times[k] - tr.times[k - 1]);
            }
        }
        t0 += span;
        rho = tr.final_state;
    }
    throw NumericalError(fmt::format("|{}> population did not reach {:.4f} before t = {}", to_string(target), goal,
                                     settings.horizon));
}

}  // namespace ccqed
