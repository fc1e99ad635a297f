#pragma once

#include "ccqed/lindblad.hpp"
#include "ccqed/operator.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace ccqed {

/// Physical parameters of the two-atom, two-cavity system. All rates and
/// frequencies are in units where the atom-cavity coupling g sets the scale
/// (g = 1 by default), so times are in units of 1/g.
struct SystemParams {
    double g = 1.0;
    double kappa = 0.0;    // cavity decay, equal for both cavities
    double gamma = 0.0;    // total atomic decay, split gamma/2 per channel
    double Omega = 0.0;    // optical drive on |0> <-> |2>
    double Omega_M = 0.0;  // microwave drive on |0> <-> |1>
    double Delta = 0.0;    // optical detuning
    double delta = 0.0;    // cavity two-photon detuning
    double J = 0.0;        // photon hopping
    double theta_M = 0.0;  // relative microwave phase
    int n_max = 2;         // Fock truncation per cavity

    /// Throws ValidationError on g <= 0, negative rates or drives,
    /// n_max < 1 or non-finite values.
    void validate() const;

    /// Non-fatal regime warnings (currently: Omega > g/10).
    std::vector<std::string> warnings() const;
};

enum class Basis { Site, Delocalized };

/// Which Bell state the scheme prepares.
enum class Target { S, T };

/// Microwave phase that leaves the target dark: pi for |S>, 0 for |T>.
double target_phase(Target target);

const char* to_string(Target target);

/// Global subsystem order: [atom 1, atom 2, cavity 1, cavity 2].
namespace slot {
inline constexpr std::size_t kAtom1 = 0;
inline constexpr std::size_t kAtom2 = 1;
inline constexpr std::size_t kCavity1 = 2;
inline constexpr std::size_t kCavity2 = 3;
}  // namespace slot

Dims system_dims(int n_max);

struct HamiltonianParts {
    Operator h0;       // cavities, excited-state detuning, atom-cavity coupling, hopping
    Operator h_g;      // microwave drive
    Operator v_plus;   // optical excitation |0> -> |2>
    Operator v_minus;  // V+^dagger

    Operator total() const { return h0 + h_g + v_plus + v_minus; }
};

/// Builds the interaction-picture Hamiltonian split into its parts.
///
/// Site basis writes H0 with the cavity modes a1, a2 and the hopping term
/// J(a1^dagger a2 + h.c.). Delocalized basis writes H0 with the normal modes
/// c1 = (a1 - a2)/sqrt2 at delta - J and c2 = (a1 + a2)/sqrt2 at delta + J,
/// each atom coupling to them with strength g/sqrt2. Both act on the same
/// truncated Fock space.
///
/// The microwave term is (Omega_M/2)(-e^{i theta_M}|1><0|_1 + |1><0|_2) + h.c.:
/// theta_M = pi drives the symmetric chain |00> <-> |T> <-> |11> and leaves
/// |S> dark; theta_M = 0 drives the |S> chain and leaves |T> dark.
HamiltonianParts hamiltonian_parts(const SystemParams& p, Basis basis);

Operator full_hamiltonian(const SystemParams& p);
Operator delocalized_hamiltonian(const SystemParams& p);

/// Cavity decay (sqrt(kappa) a_i, or sqrt(kappa) c_i in the delocalized
/// basis) followed by the four atomic channels sqrt(gamma/2)|0><2|_1,
/// |0><2|_2, |1><2|_1, |1><2|_2. Always six terms; zero rates give zero jumps.
std::vector<LindbladTerm> lindblad_terms(const SystemParams& p, Basis basis);

/// Unitary beam splitter exp(pi/4 (a1^dagger a2 - a2^dagger a1)) on the two
/// cavities, identity on the atoms. Exact on states with at most n_max
/// photons in total.
Operator beam_splitter_unitary(int n_max);

/// Two-atom ground states in the order |00>, |S>, |T>, |11> as kets on the
/// 9-dimensional atom pair space. |S> = (|01> - |10>)/sqrt2.
std::array<Vector, 4> bell_ground_basis();

inline constexpr std::array<const char*, 4> kPopulationLabels = {"P_00", "P_S", "P_T", "P_11"};

/// Projectors onto |00>, |S>, |T>, |11> tensored with the cavity identity.
struct AtomicProjectors {
    Operator p00, pS, pT, p11;

    std::vector<Observable> observables() const;
};

AtomicProjectors atomic_projectors(int n_max);

/// |psi_atoms> (coefficients on |00>,|01>,|10>,|11>) tensored with the cavity vacuum.
DensityMatrix ground_state(const std::array<Complex, 4>& amplitudes, int n_max);

/// Seeded random normalised amplitudes on |00>, |01>, |10>, |11>. Uses
/// mt19937_64 and an explicit Box-Muller transform so the draw is the same on
/// every platform.
std::array<Complex, 4> random_ground_amplitudes(std::uint64_t seed);

/// Seeded random pure state on span{|00>,|01>,|10>,|11>} with empty cavities.
DensityMatrix random_ground_state(std::uint64_t seed, int n_max);

/// RK4 step bound 0.05 / max(|Delta|, g, kappa, gamma, |J|, |delta|).
double max_step(const SystemParams& p);

}  // namespace ccqed
