#include "ccqed/lindblad.hpp"

#include "ccqed/errors.hpp"

#include <Eigen/SVD>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace ccqed {

namespace {

void require_compatible(const Operator& hamiltonian, std::span<const LindbladTerm> terms) {
    for (const auto& term : terms) {
        if (term.jump.dims() != hamiltonian.dims()) {
            throw ValidationError(fmt::format("jump operator '{}' has dimension {}, Hamiltonian has {}", term.label,
                                              term.jump.dim(), hamiltonian.dim()));
        }
    }
}

LindbladPropagator::Sparse to_sparse(const Matrix& m) {
    return m.sparseView(Complex(1.0), 0.0);
}

constexpr double kTraceDriftLimit = 1e-6;
constexpr double kNegativityLimit = -1e-6;
constexpr double kPopulationSlack = 1e-8;

/// Workspace for one trajectory; never shared between threads.
struct Rk4Workspace {
    explicit Rk4Workspace(std::size_t d)
        : k1(d, d), k2(d, d), k3(d, d), k4(d, d), stage(d, d), scratch(d, d) {}
    Matrix k1, k2, k3, k4, stage, scratch;
};

void rk4_step(const LindbladPropagator& prop, Matrix& rho, double h, Rk4Workspace& ws) {
    prop.rhs(rho, ws.k1, ws.scratch);
    ws.stage = rho + (0.5 * h) * ws.k1;
    prop.rhs(ws.stage, ws.k2, ws.scratch);
    ws.stage = rho + (0.5 * h) * ws.k2;
    prop.rhs(ws.stage, ws.k3, ws.scratch);
    ws.stage = rho + h * ws.k3;
    prop.rhs(ws.stage, ws.k4, ws.scratch);
    rho += (h / 6.0) * (ws.k1 + 2.0 * ws.k2 + 2.0 * ws.k3 + ws.k4);
}

/// Advances rho by `interval` in equal steps no longer than dt_max.
void advance(const LindbladPropagator& prop, Matrix& rho, double interval, double dt_max, Rk4Workspace& ws) {
    if (interval <= 0.0) return;
    const auto steps = static_cast<long>(std::ceil(interval / dt_max - 1e-12));
    const double h = interval / static_cast<double>(std::max(1L, steps));
    for (long s = 0; s < std::max(1L, steps); ++s) rk4_step(prop, rho, h, ws);
}

void check_state(const Matrix& rho, double t) {
    const Complex tr = rho.trace();
    if (std::abs(tr - Complex(1.0)) > kTraceDriftLimit) {
        throw NumericalError(fmt::format("trace drifted to {:.12g} at t={:.6g}", tr.real(), t));
    }
    const double lambda = min_eigenvalue_hermitian(rho);
    if (lambda < kNegativityLimit) {
        throw NumericalError(fmt::format("state lost positivity (min eigenvalue {:.3e}) at t={:.6g}", lambda, t));
    }
}

}  // namespace

std::vector<double> Trajectory::series(std::string_view label) const {
    const auto it = std::ranges::find(labels, label);
    if (it == labels.end()) throw ValidationError(fmt::format("trajectory has no observable '{}'", label));
    const auto idx = static_cast<std::size_t>(it - labels.begin());
    std::vector<double> out;
    out.reserve(populations.size());
    for (const auto& row : populations) out.push_back(row[idx]);
    return out;
}

Operator lindblad_rhs(const Operator& hamiltonian, std::span<const LindbladTerm> terms, const Operator& rho) {
    require_compatible(hamiltonian, terms);
    if (rho.dims() != hamiltonian.dims()) {
        throw ValidationError(
            fmt::format("state has dimension {}, Hamiltonian has {}", rho.dim(), hamiltonian.dim()));
    }
    const Matrix& r = rho.data();
    const Matrix& h = hamiltonian.data();
    Matrix out = kI * (r * h - h * r);
    for (const auto& term : terms) {
        const Matrix& l = term.jump.data();
        const Matrix ldl = l.adjoint() * l;
        out += l * r * l.adjoint() - 0.5 * (ldl * r + r * ldl);
    }
    return Operator(std::move(out), rho.dims());
}

Matrix liouvillian(const Operator& hamiltonian, std::span<const LindbladTerm> terms) {
    require_compatible(hamiltonian, terms);
    const auto d = static_cast<Eigen::Index>(hamiltonian.dim());
    const Matrix id = Matrix::Identity(d, d);
    const Operator id_op = Operator::identity(hamiltonian.dims());
    auto kr = [](const Matrix& a, const Matrix& b) {
        return kron(Operator(a, {static_cast<std::size_t>(a.rows())}), Operator(b, {static_cast<std::size_t>(b.rows())}))
            .data();
    };
    // vec(A rho B) = (A kron B^T) vec(rho) for row-major vec.
    const Matrix& h = hamiltonian.data();
    Matrix out = -kI * (kr(h, id) - kr(id, h.transpose()));
    for (const auto& term : terms) {
        const Matrix& l = term.jump.data();
        const Matrix ldl = l.adjoint() * l;
        out += kr(l, l.conjugate()) - 0.5 * kr(ldl, id) - 0.5 * kr(id, ldl.transpose());
    }
    return out;
}

double generator_frequency_scale(const Operator& hamiltonian, std::span<const LindbladTerm> terms) {
    require_compatible(hamiltonian, terms);
    double scale = hamiltonian.data().size() ? hamiltonian.data().cwiseAbs().maxCoeff() : 0.0;
    for (const auto& term : terms) {
        const Matrix ldl = term.jump.data().adjoint() * term.jump.data();
        if (ldl.size()) scale += ldl.cwiseAbs().maxCoeff();
    }
    return scale;
}

LindbladPropagator::LindbladPropagator(const Operator& hamiltonian, std::span<const LindbladTerm> terms)
    : dim_(hamiltonian.dim()), dims_(hamiltonian.dims()) {
    require_compatible(hamiltonian, terms);
    Matrix h_nh = hamiltonian.data();
    for (const auto& term : terms) {
        const Matrix& l = term.jump.data();
        h_nh -= 0.5 * kI * (l.adjoint() * l);
        if (l.cwiseAbs().maxCoeff() > 0.0) jumps_.push_back(to_sparse(l));
    }
    minus_i_h_nh_ = to_sparse(-kI * h_nh);
}

void LindbladPropagator::rhs(const Matrix& rho, Matrix& out, Matrix& scratch) const {
    out.noalias() = minus_i_h_nh_ * rho;
    for (const auto& l : jumps_) {
        scratch.noalias() = l * rho;  // L rho
        // L rho L^dagger = L (L rho)^dagger for Hermitian rho
        out.noalias() += 0.5 * (l * scratch.adjoint());
    }
    scratch = out.adjoint();
    out += scratch;
}

Trajectory integrate(const Operator& hamiltonian, std::span<const LindbladTerm> terms, const DensityMatrix& rho0,
                     const IntegrationSettings& settings, std::span<const Observable> observables) {
    if (!(settings.t_end > 0.0)) throw ValidationError("integration horizon t_end must be positive");
    if (!(settings.dt_max > 0.0)) throw ValidationError("step bound dt_max must be positive");
    if (settings.output_points < 2) throw ValidationError("need at least 2 output points");
    if (rho0.dims() != hamiltonian.dims()) throw ValidationError("initial state lives on a different space");
    for (const auto& obs : observables) {
        if (obs.projector.dims() != hamiltonian.dims()) {
            throw ValidationError(fmt::format("observable '{}' lives on a different space", obs.label));
        }
    }

    const LindbladPropagator prop(hamiltonian, terms);
    Rk4Workspace ws(prop.dim());
    Matrix rho = 0.5 * (rho0.data() + rho0.data().adjoint());

    Trajectory traj{.times = {}, .labels = {}, .populations = {}, .final_state = rho0};
    for (const auto& obs : observables) traj.labels.push_back(obs.label);
    traj.times.reserve(settings.output_points);
    traj.populations.reserve(settings.output_points);

    const double interval = settings.t_end / static_cast<double>(settings.output_points - 1);
    for (std::size_t k = 0; k < settings.output_points; ++k) {
        const double t = interval * static_cast<double>(k);
        if (k > 0) advance(prop, rho, interval, settings.dt_max, ws);
        check_state(rho, t);
        std::vector<double> row;
        row.reserve(observables.size());
        for (const auto& obs : observables) {
            const double p = (obs.projector.data().transpose().cwiseProduct(rho)).sum().real();
            if (p < -kPopulationSlack || p > 1.0 + kPopulationSlack) {
                throw NumericalError(
                    fmt::format("population '{}' = {:.12g} left [0, 1] at t={:.6g}", obs.label, p, t));
            }
            row.push_back(p);
        }
        traj.times.push_back(t);
        traj.populations.push_back(std::move(row));
    }
    traj.final_state = DensityMatrix(Operator(std::move(rho), hamiltonian.dims()));
    return traj;
}

DensityMatrix steady_state(const Operator& hamiltonian, std::span<const LindbladTerm> terms) {
    const std::size_t d = hamiltonian.dim();
    if (d * d > 4096) {
        throw ValidationError(
            fmt::format("direct steady-state solve limited to d^2 <= 4096 (d = {}); integrate instead", d));
    }
    const Matrix lv = liouvillian(hamiltonian, terms);
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(Eigen::MatrixXcd(lv), Eigen::ComputeFullV);
    const auto& sigma = svd.singularValues();
    const double cutoff = 1e-9 * std::max(1e-300, sigma(0));
    const auto null_dim = (sigma.array() <= cutoff).count();
    if (null_dim > 1) {
        throw NumericalError(fmt::format("steady state is not unique: Liouvillian null space has dimension {}", null_dim));
    }
    if (null_dim == 0) {
        throw NumericalError(fmt::format("Liouvillian has no null vector (smallest singular value {:.3e})",
                                         sigma(sigma.size() - 1)));
    }
    const Eigen::VectorXcd v = svd.matrixV().col(svd.matrixV().cols() - 1);
    Matrix rho(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v(static_cast<Eigen::Index>(i * d + j));
        }
    }
    // Fix the arbitrary global phase first so that Hermitising cannot cancel the state.
    const Complex tr = rho.trace();
    if (std::abs(tr) == 0.0) throw NumericalError("Liouvillian null vector is traceless");
    rho *= std::conj(tr) / std::abs(tr);
    rho = 0.5 * (rho + rho.adjoint()).eval();
    rho /= rho.trace().real();
    return DensityMatrix(Operator(std::move(rho), hamiltonian.dims()));
}

DensityMatrix steady_state_by_integration(const Operator& hamiltonian, std::span<const LindbladTerm> terms,
                                          const DensityMatrix& rho0, const ConvergenceSettings& settings) {
    if (!(settings.horizon > 0.0) || !(settings.dt_max > 0.0) || !(settings.check_interval > 0.0)) {
        throw ValidationError("convergence settings need positive horizon, dt_max and check interval");
    }
    if (rho0.dims() != hamiltonian.dims()) throw ValidationError("initial state lives on a different space");

    const LindbladPropagator prop(hamiltonian, terms);
    Rk4Workspace ws(prop.dim());
    Matrix rho = 0.5 * (rho0.data() + rho0.data().adjoint());
    Matrix deriv(rho.rows(), rho.cols());

    int streak = 0;
    double t = 0.0;
    double last_norm = 0.0;
    while (t < settings.horizon) {
        advance(prop, rho, settings.check_interval, settings.dt_max, ws);
        t += settings.check_interval;
        check_state(rho, t);
        prop.rhs(rho, deriv, ws.scratch);
        last_norm = deriv.cwiseAbs().maxCoeff();
        streak = last_norm < settings.rhs_tolerance ? streak + 1 : 0;
        if (streak >= settings.consecutive) return DensityMatrix(Operator(std::move(rho), hamiltonian.dims()));
    }
    throw NumericalError(fmt::format("no steady state within horizon {:.6g} (max |d rho/dt| = {:.3e})",
                                     settings.horizon, last_norm));
}

}  // namespace ccqed
