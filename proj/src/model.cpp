#include "ccqed/model.hpp"

#include "ccqed/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace ccqed {

void SystemParams::validate() const {
    const std::pair<const char*, double> fields[] = {
        {"g", g},         {"kappa", kappa}, {"gamma", gamma}, {"Omega", Omega},     {"Omega_M", Omega_M},
        {"Delta", Delta}, {"delta", delta}, {"J", J},         {"theta_M", theta_M},
    };
    for (const auto& [name, value] : fields) {
        if (!std::isfinite(value)) throw ValidationError(fmt::format("parameter {} is not finite", name));
    }
    if (g <= 0.0) throw ValidationError(fmt::format("g must be positive, got {}", g));
    for (const auto& [name, value] : {std::pair{"kappa", kappa}, {"gamma", gamma}, {"Omega", Omega}, {"Omega_M", Omega_M}}) {
        if (value < 0.0) throw ValidationError(fmt::format("{} must be non-negative, got {}", name, value));
    }
    if (n_max < 1) throw ValidationError(fmt::format("n_max must be >= 1, got {}", n_max));
    if (n_max > 10) throw ValidationError(fmt::format("n_max must be <= 10, got {}", n_max));
}

std::vector<std::string> SystemParams::warnings() const {
    std::vector<std::string> out;
    if (Omega > g / 10.0) {
        out.push_back(fmt::format("Omega = {} exceeds g/10 = {}; the effective model may be inaccurate", Omega, g / 10.0));
    }
    return out;
}

double target_phase(Target target) { return target == Target::S ? std::numbers::pi : 0.0; }

const char* to_string(Target target) { return target == Target::S ? "S" : "T"; }

Dims system_dims(int n_max) {
    if (n_max < 1) throw ValidationError(fmt::format("n_max must be >= 1, got {}", n_max));
    const auto nc = static_cast<std::size_t>(n_max + 1);
    return {3, 3, nc, nc};
}

namespace {

struct Modes {
    Operator a1, a2;
};

Modes cavity_modes(const Dims& dims, int n_max) {
    const Operator a = annihilation(n_max);
    return {embed(a, slot::kCavity1, dims), embed(a, slot::kCavity2, dims)};
}

Operator atom(int i, int j, std::size_t which, const Dims& dims) { return embed(atomic_op(i, j), which, dims); }

}  // namespace

HamiltonianParts hamiltonian_parts(const SystemParams& p, Basis basis) {
    p.validate();
    const Dims dims = system_dims(p.n_max);
    const auto [a1, a2] = cavity_modes(dims, p.n_max);

    const Operator s21_1 = atom(2, 1, slot::kAtom1, dims);
    const Operator s21_2 = atom(2, 1, slot::kAtom2, dims);
    Operator h0 = p.Delta * (atom(2, 2, slot::kAtom1, dims) + atom(2, 2, slot::kAtom2, dims));

    if (basis == Basis::Site) {
        h0 += p.delta * (a1.adjoint() * a1 + a2.adjoint() * a2);
        const Operator coupling = p.g * (s21_1 * a1 + s21_2 * a2);
        h0 += coupling + coupling.adjoint();
        const Operator hop = p.J * (a1.adjoint() * a2);
        h0 += hop + hop.adjoint();
    } else {
        const double r = 0.5 * std::numbers::sqrt2;
        const Operator c1 = r * (a1 - a2);
        const Operator c2 = r * (a1 + a2);
        h0 += (p.delta - p.J) * (c1.adjoint() * c1) + (p.delta + p.J) * (c2.adjoint() * c2);
        const Operator coupling = (p.g * r) * (s21_1 * (c1 + c2) + s21_2 * (c2 - c1));
        h0 += coupling + coupling.adjoint();
    }

    const Operator m1 = -std::exp(kI * p.theta_M) * atom(1, 0, slot::kAtom1, dims);
    const Operator m = (p.Omega_M / 2.0) * (m1 + atom(1, 0, slot::kAtom2, dims));
    Operator h_g = m + m.adjoint();

    Operator v_plus = (p.Omega / 2.0) * (atom(2, 0, slot::kAtom1, dims) + atom(2, 0, slot::kAtom2, dims));
    Operator v_minus = v_plus.adjoint();
    return {std::move(h0), std::move(h_g), std::move(v_plus), std::move(v_minus)};
}

Operator full_hamiltonian(const SystemParams& p) { return hamiltonian_parts(p, Basis::Site).total(); }

Operator delocalized_hamiltonian(const SystemParams& p) { return hamiltonian_parts(p, Basis::Delocalized).total(); }

std::vector<LindbladTerm> lindblad_terms(const SystemParams& p, Basis basis) {
    p.validate();
    const Dims dims = system_dims(p.n_max);
    const auto [a1, a2] = cavity_modes(dims, p.n_max);
    const double sk = std::sqrt(p.kappa);
    const double sg = std::sqrt(p.gamma / 2.0);

    std::vector<LindbladTerm> terms;
    terms.reserve(6);
    if (basis == Basis::Site) {
        terms.push_back({sk * a1, "kappa_1"});
        terms.push_back({sk * a2, "kappa_2"});
    } else {
        const double r = 0.5 * std::numbers::sqrt2;
        terms.push_back({(sk * r) * (a1 - a2), "kappa_1"});
        terms.push_back({(sk * r) * (a1 + a2), "kappa_2"});
    }
    terms.push_back({sg * atom(0, 2, slot::kAtom1, dims), "gamma_1"});
    terms.push_back({sg * atom(0, 2, slot::kAtom2, dims), "gamma_2"});
    terms.push_back({sg * atom(1, 2, slot::kAtom1, dims), "gamma_3"});
    terms.push_back({sg * atom(1, 2, slot::kAtom2, dims), "gamma_4"});
    return terms;
}

Operator beam_splitter_unitary(int n_max) {
    const Dims dims = system_dims(n_max);
    const auto [a1, a2] = cavity_modes(dims, n_max);
    // The generator is anti-Hermitian; exponentiate via the Hermitian form i*G.
    const Matrix gen = (a1.adjoint() * a2 - a2.adjoint() * a1).data();
    const Eigen::MatrixXcd herm = kI * gen;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(0.5 * (herm + herm.adjoint()));
    const double theta = std::numbers::pi / 4.0;
    // exp(theta * gen) = exp(-i theta * herm)
    const Eigen::VectorXcd phases = (-kI * theta * solver.eigenvalues().cast<Complex>()).array().exp();
    const Eigen::MatrixXcd u = solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
    return Operator(Matrix(u), dims);
}

std::array<Vector, 4> bell_ground_basis() {
    auto ket = [](std::initializer_list<std::pair<int, double>> entries) {
        Vector v = Vector::Zero(9);
        for (auto [index, amp] : entries) v(index) = amp;
        return v;
    };
    const double r = 0.5 * std::numbers::sqrt2;
    // |ab> has index 3a + b.
    return {ket({{0, 1.0}}), ket({{1, r}, {3, -r}}), ket({{1, r}, {3, r}}), ket({{4, 1.0}})};
}

std::vector<Observable> AtomicProjectors::observables() const {
    return {{kPopulationLabels[0], p00}, {kPopulationLabels[1], pS}, {kPopulationLabels[2], pT}, {kPopulationLabels[3], p11}};
}

AtomicProjectors atomic_projectors(int n_max) {
    const Dims dims = system_dims(n_max);
    const Operator cav_id = Operator::identity({dims[2], dims[3]});
    const auto basis = bell_ground_basis();
    auto lift = [&](const Vector& v) { return kron(Operator(v * v.adjoint(), {3, 3}), cav_id); };
    return {lift(basis[0]), lift(basis[1]), lift(basis[2]), lift(basis[3])};
}

DensityMatrix ground_state(const std::array<Complex, 4>& amplitudes, int n_max) {
    const Dims dims = system_dims(n_max);
    Vector atoms = Vector::Zero(9);
    atoms(0) = amplitudes[0];
    atoms(1) = amplitudes[1];
    atoms(3) = amplitudes[2];
    atoms(4) = amplitudes[3];
    const auto nc = static_cast<Eigen::Index>(dims[2] * dims[3]);
    Vector full = Vector::Zero(9 * nc);
    for (Eigen::Index k = 0; k < 9; ++k) full(k * nc) = atoms(k);
    return DensityMatrix::pure(full, dims);
}

std::array<Complex, 4> random_ground_amplitudes(std::uint64_t seed) {
    std::mt19937_64 engine(seed);
    auto uniform = [&] { return static_cast<double>(engine() >> 11) * 0x1.0p-53; };
    auto normal_pair = [&] {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double phase = 2.0 * std::numbers::pi * uniform();
        return Complex(radius * std::cos(phase), radius * std::sin(phase));
    };
    std::array<Complex, 4> amps{};
    double norm = 0.0;
    for (auto& a : amps) {
        a = normal_pair();
        norm += std::norm(a);
    }
    for (auto& a : amps) a /= std::sqrt(norm);
    return amps;
}

DensityMatrix random_ground_state(std::uint64_t seed, int n_max) {
    return ground_state(random_ground_amplitudes(seed), n_max);
}

double max_step(const SystemParams& p) {
    const double scale = std::max({std::abs(p.Delta), p.g, p.kappa, p.gamma, std::abs(p.J), std::abs(p.delta)});
    return 0.05 / scale;
}

}  // namespace ccqed
