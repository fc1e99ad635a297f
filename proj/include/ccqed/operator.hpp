#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace ccqed {

using Complex = std::complex<double>;
using Matrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;
using Dims = std::vector<std::size_t>;

inline constexpr Complex kI{0.0, 1.0};

/// Dense square operator on a tensor-product space.
///
/// `dims` lists the subsystem dimensions in tensor order; their product is
/// the matrix dimension. An empty `dims` denotes the trivial 1-dimensional
/// space (a scalar).
class Operator {
public:
    Operator() = default;
    Operator(Matrix data, Dims dims);

    static Operator identity(const Dims& dims);
    static Operator zero(const Dims& dims);

    const Matrix& data() const noexcept { return data_; }
    const Dims& dims() const noexcept { return dims_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(data_.rows()); }

    Complex operator()(std::size_t row, std::size_t col) const {
        return data_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
    }

    Operator adjoint() const;
    Complex trace() const { return data_.trace(); }

    /// max |A - A^dagger| over entries.
    double hermiticity_defect() const;
    bool is_hermitian(double tol = 1e-12) const { return hermiticity_defect() <= tol; }

    Operator& operator+=(const Operator& rhs);
    Operator& operator-=(const Operator& rhs);
    Operator& operator*=(Complex s);

    friend Operator operator+(Operator lhs, const Operator& rhs) { return lhs += rhs; }
    friend Operator operator-(Operator lhs, const Operator& rhs) { return lhs -= rhs; }
    friend Operator operator*(Operator lhs, Complex s) { return lhs *= s; }
    friend Operator operator*(Complex s, Operator rhs) { return rhs *= s; }
    friend Operator operator*(const Operator& lhs, const Operator& rhs);

private:
    Matrix data_;
    Dims dims_;
};

Operator commutator(const Operator& a, const Operator& b);

/// Validated density matrix: unit trace, Hermitian, positive semidefinite.
class DensityMatrix {
public:
    static constexpr double kTraceTol = 1e-9;
    static constexpr double kTraceImagTol = 1e-12;
    static constexpr double kHermitianTol = 1e-10;
    static constexpr double kNegativityTol = 1e-8;

    /// Throws NumericalError if any state invariant is violated.
    explicit DensityMatrix(Operator op);

    static DensityMatrix pure(const Vector& ket, const Dims& dims);

    const Operator& op() const noexcept { return op_; }
    const Matrix& data() const noexcept { return op_.data(); }
    const Dims& dims() const noexcept { return op_.dims(); }
    std::size_t dim() const noexcept { return op_.dim(); }

    double expectation(const Operator& observable) const;
    double purity() const;
    double min_eigenvalue() const;

private:
    Operator op_;
};

double min_eigenvalue_hermitian(const Matrix& m);

/// Truncated bosonic annihilation operator on Fock levels 0..n_max.
Operator annihilation(int n_max);

/// |i><j| on a single three-level atom.
Operator atomic_op(int i, int j);

Operator kron(const Operator& a, const Operator& b);

/// Places `op` on subsystem `slot`, identity elsewhere.
Operator embed(const Operator& op, std::size_t slot, const Dims& dims);

/// Traces out every subsystem not listed in `keep`. Kept subsystems retain
/// their original relative order.
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep);

std::size_t product(const Dims& dims);

}  // namespace ccqed
