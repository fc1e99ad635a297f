#include "ccqed/effective.hpp"

#include "ccqed/errors.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>

namespace ccqed {

namespace {

constexpr double kInvSqrt2 = 0.5 * std::numbers::sqrt2;

Matrix unit(Eigen::Index i, Eigen::Index j) {
    Matrix m = Matrix::Zero(4, 4);
    m(i, j) = 1.0;
    return m;
}

Operator reduced_op(Matrix m) { return Operator(std::move(m), {4}); }

// Columns are |00>, |S>, |T>, |11> on the 9-dimensional atom pair space.
Matrix atom_pair_basis() {
    const auto kets = bell_ground_basis();
    Matrix b(9, 4);
    for (Eigen::Index k = 0; k < 4; ++k) b.col(k) = kets[static_cast<std::size_t>(k)];
    return b;
}

void require_nonzero(Complex value, const char* what) {
    if (std::abs(value) == 0.0 || !std::isfinite(value.real()) || !std::isfinite(value.imag())) {
        throw ValidationError(fmt::format("singular parameter point: {} vanishes", what));
    }
}

void require_positive(double value, const char* what) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw ValidationError(fmt::format("singular parameter point: {} vanishes", what));
    }
}

}  // namespace

EffectiveCoefficients coefficients(const SystemParams& p) {
    p.validate();
    if (p.Delta == 0.0) throw ValidationError("Delta must be nonzero for the effective model (g_eff = g Omega / Delta)");

    const double g = p.g;
    const double g2 = g * g;
    const double d = p.delta;
    const double J = p.J;
    const double D = p.Delta;
    const double k = p.kappa;
    const double ga = p.gamma;

    EffectiveCoefficients c;
    c.g_eff = g * p.Omega / D;
    c.delta_c = Complex(d, -k / 2.0);
    c.Delta_c = Complex(D, -ga / 2.0);
    const Complex dp = c.delta_c;
    const Complex Dp = c.Delta_c;

    const Complex den1 = dp * g2 - Dp * (dp - J) * (dp + J);
    require_nonzero(den1, "R1 denominator");
    c.R1 = -(dp - J) * (dp + J) / den1;

    const Complex den23 = (g2 - Dp * (dp - J)) * (g2 - Dp * (dp + J));
    require_nonzero(den23, "R2/R3 denominator");
    c.R2 = (-g2 * J - dp * g2 + Dp * (dp - J) * (dp + J)) / den23;
    c.R3 = (g2 * J - dp * g2 + Dp * (dp - J) * (dp + J)) / den23;

    const double x = d * d - J * J;
    c.A1 = c.A2 = d * g2 / D - x;
    c.B1 = c.B2 = k * (d - g2 / (2.0 * D)) + ga * x / (2.0 * D);
    c.C1 = g2 / D - (d - J);
    c.D1 = k / 2.0 + ga * (d - J) / (2.0 * D);
    c.C2 = g2 / D - (d + J);
    c.D2 = k / 2.0 + ga * (d + J) / (2.0 * D);
    return c;
}

double gamma_eff(const SystemParams& p) {
    p.validate();
    const double g2 = p.g * p.g;
    const double d = p.delta;
    const double J = p.J;
    const double D = p.Delta;
    const double k = p.kappa;
    const double ga = p.gamma;
    const double detuning = g2 - D * d;
    if (std::abs(detuning) <= 1e-12 * g2) {
        throw ValidationError(fmt::format("singular parameter point: g^2 = Delta*delta ({} vs {})", g2, D * d));
    }
    const double bracket = k * (D * d - g2 / 2.0) + ga * (d * d - J * J) / 2.0;
    const double num = (ga * p.Omega * p.Omega / 2.0) * (g2 * g2 * J * J + bracket * bracket);
    return num / (detuning * detuning * (g2 * g2 + k * k * D * D));
}

Operator reduced_microwave_hamiltonian(const SystemParams& p) {
    p.validate();
    const Operator id = Operator::identity({3});
    const Operator m = (p.Omega_M / 2.0) * (-std::exp(kI * p.theta_M) * kron(atomic_op(1, 0), id) + kron(id, atomic_op(1, 0)));
    const Matrix hg = (m + m.adjoint()).data();
    const Matrix b = atom_pair_basis();
    return reduced_op(b.adjoint() * hg * b);
}

EffectiveModel closed_form_model(const SystemParams& p) {
    const EffectiveCoefficients c = coefficients(p);
    const double omega2 = p.Omega * p.Omega;
    const double d = p.delta;
    const double J = p.J;

    EffectiveModel em;
    const double ab = c.A1 * c.A1 + c.B1 * c.B1;
    const double cd1 = c.C1 * c.C1 + c.D1 * c.D1;
    const double cd2 = c.C2 * c.C2 + c.D2 * c.D2;
    require_positive(ab, "A^2 + B^2");
    require_positive(cd1, "C1^2 + D1^2");
    require_positive(cd2, "C2^2 + D2^2");
    const double common = c.g_eff * c.g_eff * p.kappa / 4.0;
    em.rates.kappa_c1_1 = (d + J) * (d + J) * common / ab;
    em.rates.kappa_c1_2 = common / cd1;
    em.rates.kappa_c2_1 = (d - J) * (d - J) * common / ab;
    em.rates.kappa_c2_2 = common / cd2;
    em.rates.gamma_eff = gamma_eff(p);

    using namespace reduced;
    Matrix h = reduced_microwave_hamiltonian(p).data();
    h(kS, kS) -= (omega2 * c.R3 / 4.0).real();
    h(kT, kT) -= (omega2 * c.R2 / 4.0).real();
    h(k00, k00) -= (omega2 * c.R1 / 2.0).real();
    em.h_eff = reduced_op(std::move(h));

    const auto& r = em.rates;
    em.jumps.push_back({reduced_op(std::sqrt(r.kappa_c1_1) * unit(kS, k00) + std::sqrt(r.kappa_c1_2) * unit(k11, kS)),
                        "kappa_1"});
    em.jumps.push_back({reduced_op(std::sqrt(r.kappa_c2_1) * unit(kT, k00) + std::sqrt(r.kappa_c2_2) * unit(k11, kT)),
                        "kappa_2"});

    const double sg = std::sqrt(p.gamma / 2.0);
    const double r1 = std::abs(c.R1);
    const double r2 = std::abs(c.R2);
    const double r3 = std::abs(c.R3);
    const double om = p.Omega;
    const Matrix lg1 = sg * (om / 2.0 * r1 * unit(k00, k00) + om / 4.0 * r2 * (unit(kT, kT) + unit(kS, kT)) +
                             om / 4.0 * r3 * (unit(kT, kS) + unit(kS, kS)));
    const double q = om / (2.0 * std::numbers::sqrt2);
    const Matrix lg3 = sg * (q * r1 * (unit(kT, k00) + unit(kS, k00)) + q * (r2 * unit(k11, kT) + r3 * unit(k11, kS)));
    em.jumps.push_back({reduced_op(lg1), "gamma_1"});
    em.jumps.push_back({reduced_op(lg1), "gamma_2"});
    em.jumps.push_back({reduced_op(lg3), "gamma_3"});
    em.jumps.push_back({reduced_op(lg3), "gamma_4"});
    return em;
}

EffectiveModel numerical_effective_model(const SystemParams& p, Basis basis) {
    const HamiltonianParts parts = hamiltonian_parts(p, basis);
    const std::vector<LindbladTerm> terms = lindblad_terms(p, basis);
    const Dims& dims = parts.h0.dims();
    const auto dim = static_cast<Eigen::Index>(parts.h0.dim());
    const auto nc = static_cast<Eigen::Index>(dims[2] * dims[3]);

    // Ground basis embedded with the cavity vacuum.
    const Matrix pair = atom_pair_basis();
    Matrix ground = Matrix::Zero(dim, 4);
    for (Eigen::Index k = 0; k < 9; ++k) ground.row(k * nc) = pair.row(k);

    std::vector<Eigen::Index> excited;
    for (Eigen::Index i = 0; i < dim; ++i) {
        const Eigen::Index a1 = i / (3 * nc);
        const Eigen::Index a2 = (i / nc) % 3;
        if (a1 == 2 || a2 == 2 || i % nc != 0) excited.push_back(i);
    }
    const auto ne = static_cast<Eigen::Index>(excited.size());

    Matrix h_nh = parts.h0.data();
    for (const auto& t : terms) h_nh -= (0.5 * kI) * (t.jump.data().adjoint() * t.jump.data());
    Eigen::MatrixXcd block(ne, ne);
    for (Eigen::Index i = 0; i < ne; ++i) {
        for (Eigen::Index j = 0; j < ne; ++j) block(i, j) = h_nh(excited[i], excited[j]);
    }

    const Eigen::VectorXd sv = Eigen::BDCSVD<Eigen::MatrixXcd>(block).singularValues();
    const double smax = sv(0);
    const double smin = sv(ne - 1);
    if (!(smin > 1e-13 * smax)) {
        throw NumericalError(fmt::format("non-Hermitian excited-manifold Hamiltonian is singular (smallest singular value "
                                         "{:.3e}, largest {:.3e})",
                                         smin, smax));
    }

    // X = H_nh^-1 V+ P_ground, zero outside the excited manifold.
    const Matrix w = parts.v_plus.data() * ground;
    Eigen::MatrixXcd w_exc(ne, 4);
    for (Eigen::Index i = 0; i < ne; ++i) w_exc.row(i) = w.row(excited[i]);
    const Eigen::MatrixXcd x_exc = Eigen::PartialPivLU<Eigen::MatrixXcd>(block).solve(w_exc);
    Matrix x = Matrix::Zero(dim, 4);
    for (Eigen::Index i = 0; i < ne; ++i) x.row(excited[i]) = x_exc.row(i);

    EffectiveModel em;
    const Matrix shift = -0.5 * (w.adjoint() * x + x.adjoint() * w);
    em.h_eff = reduced_op(shift + ground.adjoint() * parts.h_g.data() * ground);
    for (const auto& t : terms) em.jumps.push_back({reduced_op(ground.adjoint() * t.jump.data() * x), t.label});

    using namespace reduced;
    if (basis == Basis::Delocalized) {
        em.rates.kappa_c1_1 = std::norm(em.jumps[0].jump(kS, k00));
        em.rates.kappa_c1_2 = std::norm(em.jumps[0].jump(k11, kS));
        em.rates.kappa_c2_1 = std::norm(em.jumps[1].jump(kT, k00));
        em.rates.kappa_c2_2 = std::norm(em.jumps[1].jump(k11, kT));
    }
    em.rates.gamma_eff = 16.0 * std::norm(em.jumps[2].jump(kT, kS));
    return em;
}

DensityMatrix reduced_state(const std::array<Complex, 4>& a) {
    Vector v(4);
    v << a[0], kInvSqrt2 * (a[1] - a[2]), kInvSqrt2 * (a[1] + a[2]), a[3];
    return DensityMatrix::pure(v, {4});
}

std::vector<Observable> reduced_observables() {
    std::vector<Observable> out;
    for (Eigen::Index k = 0; k < 4; ++k) out.push_back({kPopulationLabels[static_cast<std::size_t>(k)], reduced_op(unit(k, k))});
    return out;
}

double reduced_max_step(const EffectiveModel& em) { return 0.05 / generator_frequency_scale(em.h_eff, em.jumps); }

DensityMatrix effective_steady_state(const EffectiveModel& em) { return steady_state(em.h_eff, em.jumps); }

double effective_fidelity(const EffectiveModel& em, Target target) {
    const Eigen::Index i = reduced::index_of(target);
    return effective_steady_state(em).data()(i, i).real();
}

}  // namespace ccqed
