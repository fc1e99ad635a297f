#pragma once

#include "ccqed/operator.hpp"

#include <Eigen/SparseCore>

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ccqed {

/// One dissipation channel. The rate is already absorbed: `jump` is
/// sqrt(rate) times the bare operator.
struct LindbladTerm {
    Operator jump;
    std::string label;
};

struct Observable {
    std::string label;
    Operator projector;
};

/// Observable expectation values on a uniform time grid plus the final state.
struct Trajectory {
    std::vector<double> times;
    std::vector<std::string> labels;
    std::vector<std::vector<double>> populations;  // [time index][label index]
    DensityMatrix final_state;

    /// Time series of one labelled observable. Throws ValidationError for an
    /// unknown label.
    std::vector<double> series(std::string_view label) const;
};

struct IntegrationSettings {
    double t_end = 0.0;
    double dt_max = 0.0;
    std::size_t output_points = 201;  // including t = 0
};

struct ConvergenceSettings {
    double horizon = 0.0;         // give up after this time
    double dt_max = 0.0;
    double check_interval = 1.0;  // spacing of the convergence checks
    double rhs_tolerance = 1e-10;
    int consecutive = 3;
};

/// d rho/dt = i[rho, H] + sum_x (L rho L^dagger - {L^dagger L, rho}/2).
Operator lindblad_rhs(const Operator& hamiltonian, std::span<const LindbladTerm> terms, const Operator& rho);

/// Liouvillian superoperator acting on row-major vec(rho), i.e.
/// vec(rho)[i*d + j] = rho(i, j).
Matrix liouvillian(const Operator& hamiltonian, std::span<const LindbladTerm> terms);

/// Largest entry scale of the generator: max |H_ij| plus the summed max
/// entries of L^dagger L. Used to bound the step when no physical parameter
/// set is at hand (e.g. reduced models).
double generator_frequency_scale(const Operator& hamiltonian, std::span<const LindbladTerm> terms);

/// Sparse form of a Lindblad generator, specialised to Hermitian states.
///
/// Writes the generator as rho' = K + K^dagger with
/// K = -i H_nh rho + (1/2) sum_x L rho L^dagger and
/// H_nh = H - (i/2) sum_x L^dagger L, which halves the Hamiltonian work and
/// keeps every stage of the integrator exactly Hermitian.
class LindbladPropagator {
public:
    using Sparse = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;

    LindbladPropagator(const Operator& hamiltonian, std::span<const LindbladTerm> terms);

    std::size_t dim() const noexcept { return dim_; }
    const Dims& dims() const noexcept { return dims_; }

    /// Generator applied to a Hermitian rho.
    void rhs(const Matrix& rho, Matrix& out, Matrix& scratch) const;

private:
    std::size_t dim_ = 0;
    Dims dims_;
    Sparse minus_i_h_nh_;
    std::vector<Sparse> jumps_;
};

/// Fixed-step fourth-order Runge-Kutta integration.
///
/// The step divides each output interval evenly and never exceeds
/// `settings.dt_max`. Observables are recorded at `output_points` uniformly
/// spaced times from 0 to t_end. At each output point the trace drift and
/// the smallest eigenvalue are checked; drift beyond 1e-6 or negativity
/// below -1e-6 throws NumericalError.
Trajectory integrate(const Operator& hamiltonian, std::span<const LindbladTerm> terms, const DensityMatrix& rho0,
                     const IntegrationSettings& settings, std::span<const Observable> observables);

/// Direct steady state: null vector of the Liouvillian, Hermitised, then
/// normalised to unit trace. Requires d^2 <= 4096. Throws NumericalError
/// when the null space is not one-dimensional.
DensityMatrix steady_state(const Operator& hamiltonian, std::span<const LindbladTerm> terms);

/// Steady state by evolution: stops once max |d rho/dt| stays below the
/// tolerance for `consecutive` checks in a row. Throws NumericalError if the
/// horizon is reached first.
DensityMatrix steady_state_by_integration(const Operator& hamiltonian, std::span<const LindbladTerm> terms,
                                          const DensityMatrix& rho0, const ConvergenceSettings& settings);

}  // namespace ccqed
