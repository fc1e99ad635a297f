#pragma once

#include "ccqed/lindblad.hpp"
#include "ccqed/model.hpp"

#include <array>
#include <vector>

namespace ccqed {

/// Index of each state in the reduced basis {|00>, |S>, |T>, |11>}.
namespace reduced {
inline constexpr Eigen::Index k00 = 0;
inline constexpr Eigen::Index kS = 1;
inline constexpr Eigen::Index kT = 2;
inline constexpr Eigen::Index k11 = 3;

inline Eigen::Index index_of(Target target) { return target == Target::S ? kS : kT; }
}  // namespace reduced

struct EffectiveCoefficients {
    double g_eff = 0.0;  // g Omega / Delta
    Complex delta_c;     // delta - i kappa/2
    Complex Delta_c;     // Delta - i gamma/2
    Complex R1, R2, R3;
    double A1 = 0.0, B1 = 0.0, C1 = 0.0, D1 = 0.0;
    double A2 = 0.0, B2 = 0.0, C2 = 0.0, D2 = 0.0;
};

/// Effective rates. kappa_c1_1: |00> -> |S>, kappa_c1_2: |S> -> |11>,
/// kappa_c2_1: |00> -> |T>, kappa_c2_2: |T> -> |11>.
struct EffectiveRates {
    double kappa_c1_1 = 0.0;
    double kappa_c1_2 = 0.0;
    double kappa_c2_1 = 0.0;
    double kappa_c2_2 = 0.0;
    double gamma_eff = 0.0;

    /// Spontaneous-emission channel rates for the |00> and |S>/|T> loops.
    double gamma_st_12() const { return gamma_eff / 16.0; }
    /// Spontaneous-emission channel rates into |11> and out of |00>.
    double gamma_st_34() const { return gamma_eff / 8.0; }
};

/// Reduced dynamics on {|00>, |S>, |T>, |11>}; operators have dims {4}.
struct EffectiveModel {
    Operator h_eff;
    std::vector<LindbladTerm> jumps;
    EffectiveRates rates;
};

/// Evaluates the closed-form coefficients. Throws ValidationError for
/// Delta = 0 or when a denominator vanishes.
EffectiveCoefficients coefficients(const SystemParams& p);

/// Closed-form reduced model: diagonal light shifts plus the microwave block,
/// the two cavity-mediated jumps (each carrying its two transitions in a
/// single operator) and the four spontaneous-emission jumps with
/// L_gamma2 = L_gamma1 and L_gamma4 = L_gamma3.
EffectiveModel closed_form_model(const SystemParams& p);

/// Closed-form effective spontaneous-emission rate. Throws ValidationError
/// when g^2 = Delta delta.
double gamma_eff(const SystemParams& p);

/// Reduced model from second-order perturbation theory on the full model.
///
/// The excited manifold is every basis state with an atom in |2> or at least
/// one photon. H_nh = H0 - (i/2) sum L^dagger L is inverted on it;
/// H_eff = -V-(H_nh^-1 + H_nh^-1 dagger)V+/2 + H_g and L_eff = L H_nh^-1 V+,
/// both projected on the reduced basis. The cavity jumps are taken in
/// `basis`; the named rates are read from the delocalized-basis jumps and
/// require basis == Delocalized (otherwise the kappa rates are left at zero).
/// gamma_eff is 16 |<T|L_gamma1|S>|^2. Throws NumericalError with the
/// smallest singular value when H_nh is singular.
EffectiveModel numerical_effective_model(const SystemParams& p, Basis basis = Basis::Delocalized);

/// Microwave Hamiltonian restricted to the reduced basis.
Operator reduced_microwave_hamiltonian(const SystemParams& p);

/// Pure reduced state from amplitudes on |00>, |01>, |10>, |11>.
DensityMatrix reduced_state(const std::array<Complex, 4>& product_amplitudes);

/// Projectors on the four reduced basis states, labelled as the full-model ones.
std::vector<Observable> reduced_observables();

/// Step bound for reduced-model integration: 0.05 / generator scale.
double reduced_max_step(const EffectiveModel& em);

/// Direct steady state of the reduced model.
DensityMatrix effective_steady_state(const EffectiveModel& em);

/// Steady-state population of the target Bell state.
double effective_fidelity(const EffectiveModel& em, Target target);

}  // namespace ccqed
