#include "ccqed/operator.hpp"

#include "ccqed/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ccqed {

std::size_t product(const Dims& dims) {
    return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>{});
}

Operator::Operator(Matrix data, Dims dims) : data_(std::move(data)), dims_(std::move(dims)) {
    if (data_.rows() != data_.cols()) {
        throw ValidationError(fmt::format("operator must be square, got {}x{}", data_.rows(), data_.cols()));
    }
    if (std::ranges::any_of(dims_, [](std::size_t d) { return d == 0; })) {
        throw ValidationError("subsystem dimensions must be positive");
    }
    if (product(dims_) != static_cast<std::size_t>(data_.rows())) {
        throw ValidationError(
            fmt::format("subsystem dimensions multiply to {}, matrix dimension is {}", product(dims_), data_.rows()));
    }
}

Operator Operator::identity(const Dims& dims) {
    const auto d = static_cast<Eigen::Index>(product(dims));
    return Operator(Matrix::Identity(d, d), dims);
}

Operator Operator::zero(const Dims& dims) {
    const auto d = static_cast<Eigen::Index>(product(dims));
    return Operator(Matrix::Zero(d, d), dims);
}

Operator Operator::adjoint() const { return Operator(data_.adjoint(), dims_); }

double Operator::hermiticity_defect() const {
    if (data_.size() == 0) return 0.0;
    return (data_ - data_.adjoint()).cwiseAbs().maxCoeff();
}

static void require_same_space(const Operator& a, const Operator& b, const char* what) {
    if (a.dims() != b.dims()) {
        throw ValidationError(fmt::format("{}: subsystem dimensions differ ({} vs {})", what, a.dim(), b.dim()));
    }
}

Operator& Operator::operator+=(const Operator& rhs) {
    require_same_space(*this, rhs, "operator +");
    data_ += rhs.data_;
    return *this;
}

Operator& Operator::operator-=(const Operator& rhs) {
    require_same_space(*this, rhs, "operator -");
    data_ -= rhs.data_;
    return *this;
}

Operator& Operator::operator*=(Complex s) {
    data_ *= s;
    return *this;
}

Operator operator*(const Operator& lhs, const Operator& rhs) {
    require_same_space(lhs, rhs, "operator *");
    return Operator(lhs.data_ * rhs.data_, lhs.dims_);
}

Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

double min_eigenvalue_hermitian(const Matrix& m) {
    const Eigen::MatrixXcd h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

DensityMatrix::DensityMatrix(Operator op) : op_(std::move(op)) {
    const Complex tr = op_.trace();
    if (std::abs(tr.real() - 1.0) > kTraceTol || std::abs(tr.imag()) > kTraceImagTol) {
        throw NumericalError(fmt::format("density matrix trace {}{:+}i is not 1", tr.real(), tr.imag()));
    }
    const double herm = op_.hermiticity_defect();
    if (herm > kHermitianTol) {
        throw NumericalError(fmt::format("density matrix not Hermitian (defect {:.3e})", herm));
    }
    const double lambda = min_eigenvalue_hermitian(op_.data());
    if (lambda < -kNegativityTol) {
        throw NumericalError(fmt::format("density matrix has negative eigenvalue {:.3e}", lambda));
    }
}

DensityMatrix DensityMatrix::pure(const Vector& ket, const Dims& dims) {
    const double norm = ket.norm();
    if (norm == 0.0) throw ValidationError("cannot build a pure state from the zero vector");
    const Vector psi = ket / norm;
    return DensityMatrix(Operator(psi * psi.adjoint(), dims));
}

double DensityMatrix::expectation(const Operator& observable) const {
    if (observable.dims() != dims()) throw ValidationError("observable acts on a different space");
    // tr(A rho) without forming the product.
    return (observable.data().transpose().cwiseProduct(data())).sum().real();
}

double DensityMatrix::purity() const { return (data().transpose().cwiseProduct(data())).sum().real(); }

double DensityMatrix::min_eigenvalue() const { return min_eigenvalue_hermitian(data()); }

Operator annihilation(int n_max) {
    if (n_max < 1) throw ValidationError(fmt::format("Fock truncation n_max must be >= 1, got {}", n_max));
    const Eigen::Index d = n_max + 1;
    Matrix a = Matrix::Zero(d, d);
    for (Eigen::Index n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return Operator(std::move(a), {static_cast<std::size_t>(d)});
}

Operator atomic_op(int i, int j) {
    if (i < 0 || i > 2 || j < 0 || j > 2) {
        throw ValidationError(fmt::format("atomic levels must be in 0..2, got ({}, {})", i, j));
    }
    Matrix m = Matrix::Zero(3, 3);
    m(i, j) = 1.0;
    return Operator(std::move(m), {3});
}

Operator kron(const Operator& a, const Operator& b) {
    const Eigen::Index da = a.data().rows();
    const Eigen::Index db = b.data().rows();
    Matrix out(da * db, da * db);
    for (Eigen::Index i = 0; i < da; ++i) {
        for (Eigen::Index j = 0; j < da; ++j) {
            out.block(i * db, j * db, db, db) = a.data()(i, j) * b.data();
        }
    }
    Dims dims = a.dims();
    dims.insert(dims.end(), b.dims().begin(), b.dims().end());
    return Operator(std::move(out), std::move(dims));
}

Operator embed(const Operator& op, std::size_t slot, const Dims& dims) {
    if (slot >= dims.size()) {
        throw ValidationError(fmt::format("slot {} out of range for {} subsystems", slot, dims.size()));
    }
    if (op.dim() != dims[slot]) {
        throw ValidationError(
            fmt::format("operator dimension {} does not match subsystem {} dimension {}", op.dim(), slot, dims[slot]));
    }
    Operator out = Operator::identity({});
    for (std::size_t k = 0; k < dims.size(); ++k) {
        out = kron(out, k == slot ? Operator(op.data(), {dims[k]}) : Operator::identity({dims[k]}));
    }
    return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep) {
    const Dims& dims = rho.dims();
    const std::size_t n = dims.size();
    std::vector<bool> kept(n, false);
    for (std::size_t k : keep) {
        if (k >= n) throw ValidationError(fmt::format("subsystem index {} out of range for {} subsystems", k, n));
        if (kept[k]) throw ValidationError(fmt::format("subsystem index {} listed twice", k));
        kept[k] = true;
    }

    // Row-major strides of the full index.
    std::vector<std::size_t> stride(n, 1);
    for (std::size_t k = n; k-- > 1;) stride[k - 1] = stride[k] * dims[k];

    Dims kept_dims;
    Dims traced_dims;
    std::vector<std::size_t> kept_stride;
    std::vector<std::size_t> traced_stride;
    for (std::size_t k = 0; k < n; ++k) {
        (kept[k] ? kept_dims : traced_dims).push_back(dims[k]);
        (kept[k] ? kept_stride : traced_stride).push_back(stride[k]);
    }

    // Offset of every kept (resp. traced) multi-index inside the full index.
    auto offsets = [](const Dims& sub_dims, const std::vector<std::size_t>& sub_stride) {
        std::vector<std::size_t> out{0};
        for (std::size_t k = 0; k < sub_dims.size(); ++k) {
            std::vector<std::size_t> next;
            next.reserve(out.size() * sub_dims[k]);
            for (std::size_t base : out) {
                for (std::size_t v = 0; v < sub_dims[k]; ++v) next.push_back(base + v * sub_stride[k]);
            }
            out = std::move(next);
        }
        return out;
    };
    const auto kept_off = offsets(kept_dims, kept_stride);
    const auto traced_off = offsets(traced_dims, traced_stride);

    const auto dk = static_cast<Eigen::Index>(kept_off.size());
    Matrix reduced = Matrix::Zero(dk, dk);
    const Matrix& full = rho.data();
    for (Eigen::Index i = 0; i < dk; ++i) {
        for (Eigen::Index j = 0; j < dk; ++j) {
            Complex sum = 0.0;
            for (std::size_t t : traced_off) {
                sum += full(static_cast<Eigen::Index>(kept_off[i] + t), static_cast<Eigen::Index>(kept_off[j] + t));
            }
            reduced(i, j) = sum;
        }
    }
    return DensityMatrix(Operator(std::move(reduced), std::move(kept_dims)));
}

}  // namespace ccqed
