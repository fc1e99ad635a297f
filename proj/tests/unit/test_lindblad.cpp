#include "ccqed/errors.hpp"
#include "ccqed/lindblad.hpp"
#include "support.hpp"

#include <cmath>

using namespace ccqed;
using testing::max_abs;
using testing::max_diff;

namespace {

Operator random_hermitian(std::mt19937_64& rng, Eigen::Index d) {
    const Matrix m = testing::random_matrix(rng, d);
    return Operator(0.5 * (m + m.adjoint()), {static_cast<std::size_t>(d)});
}

DensityMatrix random_state(std::mt19937_64& rng, Eigen::Index d) {
    const Matrix m = testing::random_matrix(rng, d);
    Matrix rho = m * m.adjoint();
    rho /= rho.trace();
    return DensityMatrix(Operator(rho, {static_cast<std::size_t>(d)}));
}

DensityMatrix fock(int n, int n_max) {
    Vector v = Vector::Zero(n_max + 1);
    v(n) = 1.0;
    return DensityMatrix::pure(v, {static_cast<std::size_t>(n_max + 1)});
}

// Two-level atom: index 0 ground, 1 excited.
Operator sigma_minus() {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 1) = 1.0;
    return Operator(m, {2});
}

}  // namespace

TEST_SUITE("lindblad-engine") {

TEST_CASE("rhs follows i[rho, H] plus dissipators") {
    // H = diag(0, w), rho = |+><+|: d rho_01/dt = i w / 2.
    const double w = 0.7;
    Matrix h = Matrix::Zero(2, 2);
    h(1, 1) = w;
    Vector plus(2);
    plus << 1.0, 1.0;
    const DensityMatrix rho = DensityMatrix::pure(plus, {2});
    const Operator d = lindblad_rhs(Operator(h, {2}), {}, rho.op());
    CHECK(std::abs(d(0, 1) - Complex(0.0, w / 2.0)) < 1e-15);
    CHECK(std::abs(d(1, 0) - Complex(0.0, -w / 2.0)) < 1e-15);

    // Photon decay from |1>: d<n>/dt = -kappa.
    const double kappa = 0.37;
    const Operator a = annihilation(2);
    const LindbladTerm decay{std::sqrt(kappa) * a, "kappa"};
    const Operator dr = lindblad_rhs(Operator::zero({3}), std::span(&decay, 1), fock(1, 2).op());
    const Operator number = a.adjoint() * a;
    CHECK((number * dr).trace().real() == doctest::Approx(-kappa).epsilon(1e-14));
}

TEST_CASE("rhs is trace free and Hermitian") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 5; ++trial) {
        const Operator h = random_hermitian(rng, 5);
        const DensityMatrix rho = random_state(rng, 5);
        const Operator unitary = lindblad_rhs(h, {}, rho.op());
        CHECK(std::abs(unitary.trace()) < 1e-12);
        CHECK(unitary.hermiticity_defect() < 1e-14);

        const std::vector<LindbladTerm> terms{{Operator(testing::random_matrix(rng, 5), {5}), "a"},
                                              {Operator(testing::random_matrix(rng, 5), {5}), "b"}};
        const Operator full = lindblad_rhs(h, terms, rho.op());
        CHECK(std::abs(full.trace()) < 1e-12);
        CHECK(full.hermiticity_defect() < 1e-13);

        // The superoperator and the sparse propagator agree with the direct form.
        const Matrix lv = liouvillian(h, terms);
        Vector vec(25);
        for (Eigen::Index i = 0; i < 5; ++i) {
            for (Eigen::Index j = 0; j < 5; ++j) vec(i * 5 + j) = rho.data()(i, j);
        }
        const Vector lvec = lv * vec;
        Matrix from_lv(5, 5);
        for (Eigen::Index i = 0; i < 5; ++i) {
            for (Eigen::Index j = 0; j < 5; ++j) from_lv(i, j) = lvec(i * 5 + j);
        }
        CHECK(max_diff(from_lv, full.data()) < 1e-13);

        const LindbladPropagator prop(h, terms);
        Matrix out(5, 5), scratch(5, 5);
        prop.rhs(rho.data(), out, scratch);
        CHECK(max_diff(out, full.data()) < 1e-13);
    }
}

TEST_CASE("rhs rejects mismatched dimensions") {
    const std::vector<LindbladTerm> terms{{annihilation(1), "a"}};
    CHECK_THROWS_AS(lindblad_rhs(Operator::zero({3}), terms, Operator::identity({3})), ValidationError);
    CHECK_THROWS_AS(lindblad_rhs(Operator::zero({2}), terms, Operator::identity({3})), ValidationError);
}

TEST_CASE("cavity decay matches exp(-kappa t)") {
    const double kappa = 0.3;
    const std::vector<LindbladTerm> terms{{std::sqrt(kappa) * annihilation(1), "kappa"}};
    Matrix p1 = Matrix::Zero(2, 2);
    p1(1, 1) = 1.0;
    const std::vector<Observable> obs{{"P1", Operator(p1, {2})}};
    const Trajectory tr = integrate(Operator::zero({2}), terms, fock(1, 1), {2.0 / kappa, 0.05 / kappa, 5}, obs);
    const auto p = tr.series("P1");
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
        CHECK(std::abs(p[k] - std::exp(-kappa * tr.times[k])) < 1e-6);
    }
    CHECK(tr.times.back() * kappa == doctest::Approx(2.0));
}

TEST_CASE("vacuum Rabi oscillation matches cos^2(g t)") {
    const double g = 1.0;
    const Dims dims{3, 2};
    const Operator a = embed(annihilation(1), 1, dims);
    const Operator s21 = embed(atomic_op(2, 1), 0, dims);
    const Operator h = g * (s21 * a + (s21 * a).adjoint());
    Vector psi = Vector::Zero(6);
    psi(2 * 2 + 0) = 1.0;  // atom |2>, cavity |0>
    const std::vector<Observable> obs{{"P2", embed(atomic_op(2, 2), 0, dims)}};
    const Trajectory tr = integrate(h, {}, DensityMatrix::pure(psi, dims), {10.0, 0.01 / g, 101}, obs);
    const auto p = tr.series("P2");
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
        CHECK(std::abs(p[k] - std::pow(std::cos(g * tr.times[k]), 2)) < 1e-6);
    }
}

TEST_CASE("optical Bloch steady state") {
    // Resonant drive Omega/2 (sigma+ + sigma-), decay gamma:
    // rho_ee = Omega^2 / (gamma^2 + 2 Omega^2) = 9/43 for Omega = 0.3, gamma = 0.5.
    const double omega = 0.3;
    const double gamma = 0.5;
    const double expected = 0.20930232558139536;
    const Operator sm = sigma_minus();
    const Operator h = (omega / 2.0) * (sm + sm.adjoint());
    const std::vector<LindbladTerm> terms{{std::sqrt(gamma) * sm, "gamma"}};

    const DensityMatrix direct = steady_state(h, terms);
    CHECK(std::abs(direct.data()(1, 1).real() - expected) < 1e-6);
    CHECK(max_abs(lindblad_rhs(h, terms, direct.op()).data()) < 1e-8);

    Vector ground(2);
    ground << 1.0, 0.0;
    const DensityMatrix evolved = steady_state_by_integration(h, terms, DensityMatrix::pure(ground, {2}),
                                                              {.horizon = 500.0, .dt_max = 0.05, .check_interval = 1.0});
    CHECK(std::abs(evolved.data()(1, 1).real() - expected) < 1e-6);
}

TEST_CASE("steady state of pure decay is the vacuum") {
    const std::vector<LindbladTerm> terms{{std::sqrt(0.2) * annihilation(3), "kappa"}};
    const DensityMatrix ss = steady_state(Operator::zero({4}), terms);
    CHECK(max_diff(ss.data(), fock(0, 3).data()) < 1e-10);
}

TEST_CASE("direct and integrated steady states agree on a random system") {
    std::mt19937_64 rng(5);
    const Operator h = random_hermitian(rng, 4);
    const std::vector<LindbladTerm> terms{{0.6 * Operator(testing::random_matrix(rng, 4), {4}), "a"},
                                          {0.4 * Operator(testing::random_matrix(rng, 4), {4}), "b"}};
    const DensityMatrix direct = steady_state(h, terms);
    const double step = 0.05 / generator_frequency_scale(h, terms);
    const DensityMatrix evolved = steady_state_by_integration(h, terms, random_state(rng, 4),
                                                              {.horizon = 2000.0, .dt_max = step, .check_interval = 0.5});
    CHECK(max_diff(direct.data(), evolved.data()) < 1e-6);
    CHECK(max_abs(lindblad_rhs(h, terms, direct.op()).data()) < 1e-8);
}

TEST_CASE("steady-state errors") {
    CHECK_THROWS_AS(steady_state(Operator::zero({2}), {}), NumericalError);
    CHECK_THROWS_AS(steady_state(Operator::zero({65}), {}), ValidationError);

    const Operator sm = sigma_minus();
    const std::vector<LindbladTerm> weak{{1e-3 * sm, "slow"}};
    const Operator h = 0.5 * (sm + sm.adjoint());
    Vector ground(2);
    ground << 1.0, 0.0;
    CHECK_THROWS_AS(steady_state_by_integration(h, weak, DensityMatrix::pure(ground, {2}),
                                                {.horizon = 5.0, .dt_max = 0.05, .check_interval = 1.0}),
                    NumericalError);
}

TEST_CASE("integration aborts on trace drift") {
    // A non-Hermitian generator grows the trace.
    const Operator h = Operator(Complex(0.0, 0.1) * Matrix::Identity(2, 2), {2});
    Vector ground(2);
    ground << 1.0, 0.0;
    CHECK_THROWS_AS(integrate(h, {}, DensityMatrix::pure(ground, {2}), {10.0, 0.05, 11}, {}), NumericalError);
    CHECK_THROWS_AS(integrate(h, {}, DensityMatrix::pure(ground, {2}), {0.0, 0.05, 11}, {}), ValidationError);
    CHECK_THROWS_AS(integrate(h, {}, DensityMatrix::pure(ground, {2}), {1.0, 0.05, 1}, {}), ValidationError);
}

TEST_CASE("trajectory invariants and purity decay") {
    std::mt19937_64 rng(17);
    const Operator h = random_hermitian(rng, 4);
    const std::vector<LindbladTerm> terms{{0.5 * Operator(testing::random_matrix(rng, 4), {4}), "a"}};
    Vector psi(4);
    psi << 1.0, 0.0, 0.0, 0.0;
    DensityMatrix rho = DensityMatrix::pure(psi, {4});
    double purity = rho.purity();
    const double step = 0.05 / generator_frequency_scale(h, terms);
    for (int chunk = 0; chunk < 20; ++chunk) {
        const Trajectory tr = integrate(h, terms, rho, {0.5, step, 2}, {});
        rho = tr.final_state;
        CHECK(std::abs(rho.op().trace() - 1.0) < 1e-9);
        CHECK(rho.op().hermiticity_defect() < 1e-9);
        CHECK(rho.min_eigenvalue() > -1e-8);
        CHECK(rho.purity() <= purity + 1e-12);
        purity = rho.purity();
    }
    CHECK(purity < 0.99);
}

TEST_CASE("trajectory series lookup") {
    Trajectory tr{.times = {0.0}, .labels = {"x"}, .populations = {{0.5}}, .final_state = fock(0, 1)};
    CHECK(tr.series("x") == std::vector<double>{0.5});
    CHECK_THROWS_AS(tr.series("y"), ValidationError);
}

}  // TEST_SUITE
