#pragma once

#include "ccqed/effective.hpp"
#include "ccqed/model.hpp"

#include <array>
#include <span>
#include <vector>

namespace ccqed {

/// C = g^2 / (kappa gamma). Throws ValidationError if kappa or gamma is zero.
double cooperativity(const SystemParams& p);

struct Dissipation {
    double kappa = 0.0;
    double gamma = 0.0;
};

/// (kappa, gamma) with g^2/(kappa gamma) = C and kappa/gamma fixed.
Dissipation dissipation_from_cooperativity(double C, double kappa_over_gamma, double g = 1.0);

/// Rate-equation estimate of 1 - F for the target state:
/// (3 g_eff^2 kappa/(C^2 + D^2) + 9 gamma_eff) / ((delta +- J)^2 g_eff^2 kappa/(A^2 + B^2)),
/// evaluated from the named rates of `em` (C1, D1, delta + J for |S>;
/// C2, D2, delta - J for |T>). Throws NumericalError if the pumping rate is zero.
double rate_fidelity(const SystemParams& p, const EffectiveModel& em, Target target);

struct OptimalSolution {
    double Delta = 0.0;
    double delta = 0.0;
    double J = 0.0;
    /// delta g^2 - Delta(delta^2 - J^2) and kappa(Delta delta - g^2/2) - gamma(delta^2 - J^2)/2.
    std::array<double, 2> residuals{};
    Target target = Target::S;
    double predicted_infidelity = 0.0;
    /// Set by the J scan when the best grid point is an end point.
    bool on_boundary = false;
    std::vector<double> scan_J;
    std::vector<double> scan_infidelity;
};

/// Logarithmic grid of J/g values for the free-parameter scan.
struct JScan {
    double J_over_g_min = 0.05;
    double J_over_g_max = 5.0;
    std::size_t points = 200;
};

/// Solves delta g^2 = Delta(delta^2 - J^2) and
/// kappa(Delta delta - g^2/2) = gamma(delta^2 - J^2)/2 at fixed J.
/// With x = delta^2 - J^2 the second condition becomes
/// gamma x^2 - kappa g^2 x - 2 kappa g^2 J^2 = 0; its positive root is polished
/// by Newton steps (bisection if Newton stalls), then delta = sqrt(x + J^2) and
/// Delta = delta g^2 / x. Throws NumericalError if the residual tolerances
/// (1e-10 g^3, 1e-8 g^3) are not met.
OptimalSolution optimal_params(double g, double kappa, double gamma, Target target, double J);

/// Minimises rate_fidelity over the J grid and returns the best point.
OptimalSolution optimal_params(double g, double kappa, double gamma, Target target, const JScan& scan = {});

/// Operating point used for the figures and the scaling study: optimal
/// detunings from the J scan, Omega = (g/20) kappa / kappa(C = 200) at the same
/// kappa/gamma, Omega_M = 2 Omega / 5 and the target's microwave phase.
/// At C = 200 this gives Omega = g/20.
SystemParams operating_point(double C, double kappa_over_gamma, Target target, double g = 1.0, int n_max = 2);

/// Same, from an already computed optimum.
SystemParams operating_point(double C, double kappa_over_gamma, const OptimalSolution& optimum, double g = 1.0,
                             int n_max = 2);

struct PowerLawFit {
    double slope = 0.0;      // y ~ prefactor * x^-slope
    double prefactor = 0.0;
};

/// Unweighted least squares of log y against log x. Needs at least 3 points.
PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y);

struct ScalingPoint {
    double C = 0.0;
    SystemParams params;
    double infidelity = 0.0;       // effective-model steady state
    double rate_infidelity = 0.0;  // rate-equation estimate
    bool on_boundary = false;
};

struct ScalingResult {
    std::vector<double> C_values;
    std::vector<double> infidelities;
    double fit_slope = 0.0;
    double fit_prefactor = 0.0;
    std::vector<ScalingPoint> points;
};

/// Steady-state infidelity of the closed-form effective model at the
/// operating point of each C, and the power-law fit through them.
/// Requires every C >= 10 and at least 3 values.
ScalingResult scaling_study(std::span<const double> C_list, double kappa_over_gamma, Target target, double g = 1.0);

struct OnsetSettings {
    double threshold = 0.95;   // fraction of the steady-state population
    double resolution = 1.0;   // sampling interval
    double horizon = 1e5;
};

/// First time the target population reaches threshold * steady-state value,
/// evolving the reduced model from rho0 (linear interpolation between
/// samples). Throws NumericalError if the horizon is reached first.
double convergence_time(const EffectiveModel& em, Target target, const DensityMatrix& rho0, const OnsetSettings& settings = {});

}  // namespace ccqed
