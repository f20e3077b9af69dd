// Copyright 2026 The pingpong Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Dense finite-dimensional quantum states and operators.
//
// Subsystem ordering is fixed for the whole library: in a composite system
// the first tensor factor is the most significant index. The simplified
// protocol lays out (travel, ancilla); the Bell-pair protocol lays out
// (home, travel, ancilla).

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "pingpong/error.hpp"

namespace pingpong {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Tolerance used by every structural validity check (norm, trace,
/// hermiticity, unitarity, positivity).
inline constexpr double kValidityTolerance = 1e-10;

namespace detail {

inline std::string format_double(double x) {
    std::ostringstream out;
    out.precision(12);
    out << x;
    return out.str();
}

inline double max_abs(const Matrix &m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double hermiticity_deviation(const Matrix &m) {
    return max_abs(m - m.adjoint());
}

inline double unitarity_deviation(const Matrix &m) {
    const auto n = m.rows();
    return max_abs(m.adjoint() * m - Matrix::Identity(n, n));
}

}  // namespace detail

class StateVector {
public:
    explicit StateVector(Vector amplitudes) : amplitudes_(std::move(amplitudes)) {
        if (amplitudes_.size() < 1) {
            throw Error(ErrorCode::invalid_state, "state vector must have dimension >= 1");
        }
        const double norm = amplitudes_.norm();
        if (!std::isfinite(norm) || std::abs(norm - 1.0) > kValidityTolerance) {
            throw Error(ErrorCode::invalid_state,
                        "state norm " + detail::format_double(norm) + " != 1");
        }
    }

    /// Normalises `amplitudes` before validation. Zero vectors are rejected.
    static StateVector normalized(const Vector &amplitudes) {
        const double norm = amplitudes.norm();
        if (!(norm > 0.0) || !std::isfinite(norm)) {
            throw Error(ErrorCode::invalid_state, "cannot normalise a zero or non-finite vector");
        }
        return StateVector(amplitudes / norm);
    }

    static StateVector basis(std::size_t dim, std::size_t index) {
        if (index >= dim) {
            throw Error(ErrorCode::invalid_index, "basis index out of range");
        }
        Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
        v(static_cast<Eigen::Index>(index)) = 1.0;
        return StateVector(std::move(v));
    }

    std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }
    const Vector &amplitudes() const { return amplitudes_; }
    Complex operator[](std::size_t i) const { return amplitudes_(static_cast<Eigen::Index>(i)); }

private:
    Vector amplitudes_;
};

/// Returns true iff max |U^dagger U - I| <= tol. Throws on non-square input.
inline bool is_unitary(const Matrix &u, double tol = kValidityTolerance) {
    if (u.rows() != u.cols()) {
        throw Error(ErrorCode::not_square, "matrix is " + std::to_string(u.rows()) + "x" +
                                               std::to_string(u.cols()));
    }
    return detail::unitarity_deviation(u) <= tol;
}

class UnitaryOperator {
public:
    explicit UnitaryOperator(Matrix entries) : entries_(std::move(entries)) {
        if (entries_.rows() < 1) {
            throw Error(ErrorCode::not_square, "empty operator");
        }
        if (!is_unitary(entries_)) {
            throw Error(ErrorCode::not_unitary,
                        "max |U'U - I| = " +
                            detail::format_double(detail::unitarity_deviation(entries_)));
        }
    }

    static UnitaryOperator identity(std::size_t dim) {
        const auto n = static_cast<Eigen::Index>(dim);
        return UnitaryOperator(Matrix::Identity(n, n));
    }

    std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
    const Matrix &matrix() const { return entries_; }
    UnitaryOperator adjoint() const { return UnitaryOperator(entries_.adjoint()); }

    UnitaryOperator operator*(const UnitaryOperator &rhs) const {
        if (dim() != rhs.dim()) {
            throw Error(ErrorCode::dimension_mismatch, "operator product");
        }
        return UnitaryOperator(entries_ * rhs.entries_);
    }

private:
    Matrix entries_;
};

class DensityMatrix {
public:
    /// Validates hermiticity, unit trace and positivity (eigenvalues >= -1e-10).
    explicit DensityMatrix(Matrix entries) : entries_(std::move(entries)) {
        check_structure();
        const Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(),
                                                           Eigen::EigenvaluesOnly);
        const double smallest = solver.eigenvalues().minCoeff();
        if (smallest < -kValidityTolerance) {
            throw Error(ErrorCode::not_positive_semidefinite,
                        "smallest eigenvalue " + detail::format_double(smallest));
        }
    }

    /// Skips the positivity check. Used for results of completely positive
    /// trace-preserving maps applied to already valid states; hermiticity and
    /// trace are still verified.
    static DensityMatrix trusted(Matrix entries) {
        DensityMatrix rho;
        rho.entries_ = std::move(entries);
        rho.check_structure();
        return rho;
    }

    static DensityMatrix maximally_mixed(std::size_t dim) {
        const auto n = static_cast<Eigen::Index>(dim);
        return trusted(Matrix::Identity(n, n) / static_cast<double>(dim));
    }

    std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
    const Matrix &matrix() const { return entries_; }
    Complex operator()(std::size_t r, std::size_t c) const {
        return entries_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }

    double purity() const { return (entries_ * entries_).trace().real(); }

private:
    DensityMatrix() = default;

    Matrix hermitian_part() const { return (entries_ + entries_.adjoint()) / 2.0; }

    void check_structure() const {
        if (entries_.rows() != entries_.cols() || entries_.rows() < 1) {
            throw Error(ErrorCode::not_square, "density matrix must be square and non-empty");
        }
        const double herm = detail::hermiticity_deviation(entries_);
        if (herm > kValidityTolerance) {
            throw Error(ErrorCode::invalid_state,
                        "not Hermitian, max |rho - rho'| = " + detail::format_double(herm));
        }
        const Complex tr = entries_.trace();
        if (std::abs(tr - Complex(1.0)) > kValidityTolerance) {
            throw Error(ErrorCode::invalid_state,
                        "trace " + detail::format_double(tr.real()) + " != 1");
        }
    }

    Matrix entries_;
};

// ---------------------------------------------------------------------------
// Tensor products

inline Matrix kron(const Matrix &a, const Matrix &b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

inline Vector kron(const Vector &a, const Vector &b) {
    Vector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        out.segment(i * b.size(), b.size()) = a(i) * b;
    }
    return out;
}

inline StateVector tensor_product(const StateVector &a, const StateVector &b) {
    return StateVector(kron(a.amplitudes(), b.amplitudes()));
}

inline DensityMatrix tensor_product(const DensityMatrix &a, const DensityMatrix &b) {
    return DensityMatrix::trusted(kron(a.matrix(), b.matrix()));
}

inline UnitaryOperator tensor_product(const UnitaryOperator &a, const UnitaryOperator &b) {
    return UnitaryOperator(kron(a.matrix(), b.matrix()));
}

/// Runtime-typed carrier, for callers that do not know operand kinds
/// statically (file loaders, scripted checks).
using QuantumObject = std::variant<StateVector, DensityMatrix, UnitaryOperator>;

inline QuantumObject tensor_product(const QuantumObject &a, const QuantumObject &b) {
    return std::visit(
        [](const auto &lhs, const auto &rhs) -> QuantumObject {
            using L = std::decay_t<decltype(lhs)>;
            using R = std::decay_t<decltype(rhs)>;
            if constexpr (std::is_same_v<L, R>) {
                return tensor_product(lhs, rhs);
            } else {
                throw Error(ErrorCode::kind_mismatch,
                            "tensor product operands must be the same kind");
            }
        },
        a, b);
}

// ---------------------------------------------------------------------------
// Evolution

inline StateVector apply_unitary(const UnitaryOperator &u, const StateVector &s) {
    if (u.dim() != s.dim()) {
        throw Error(ErrorCode::dimension_mismatch,
                    "operator dim " + std::to_string(u.dim()) + " vs state dim " +
                        std::to_string(s.dim()));
    }
    return StateVector(u.matrix() * s.amplitudes());
}

/// U rho U^dagger.
inline DensityMatrix conjugate(const UnitaryOperator &u, const DensityMatrix &rho) {
    if (u.dim() != rho.dim()) {
        throw Error(ErrorCode::dimension_mismatch,
                    "operator dim " + std::to_string(u.dim()) + " vs density dim " +
                        std::to_string(rho.dim()));
    }
    return DensityMatrix::trusted(u.matrix() * rho.matrix() * u.matrix().adjoint());
}

inline DensityMatrix to_density(const StateVector &s) {
    return DensityMatrix::trusted(s.amplitudes() * s.amplitudes().adjoint());
}

// ---------------------------------------------------------------------------
// Partial trace

namespace detail {

inline std::size_t checked_total_dim(std::span<const std::size_t> dims) {
    if (dims.empty()) {
        throw Error(ErrorCode::dimension_mismatch, "empty subsystem list");
    }
    std::size_t total = 1;
    for (auto d : dims) {
        if (d == 0) {
            throw Error(ErrorCode::dimension_mismatch, "zero subsystem dimension");
        }
        total *= d;
    }
    return total;
}

}  // namespace detail

/// Reduces `rho` to the subsystems listed in `keep` (strictly increasing),
/// tracing out the rest. `dims` lists subsystem dimensions, most significant
/// first.
inline DensityMatrix partial_trace(const DensityMatrix &rho, std::span<const std::size_t> dims,
                                   std::span<const std::size_t> keep) {
    const std::size_t total = detail::checked_total_dim(dims);
    if (total != rho.dim()) {
        throw Error(ErrorCode::dimension_mismatch,
                    "subsystem dims multiply to " + std::to_string(total) +
                        " but density dim is " + std::to_string(rho.dim()));
    }
    if (keep.empty()) {
        throw Error(ErrorCode::invalid_index, "nothing to keep");
    }
    for (std::size_t i = 0; i < keep.size(); ++i) {
        if (keep[i] >= dims.size() || (i > 0 && keep[i] <= keep[i - 1])) {
            throw Error(ErrorCode::invalid_index, "kept subsystem indices must be increasing and < " +
                                                      std::to_string(dims.size()));
        }
    }

    const std::size_t n = dims.size();
    std::vector<bool> kept(n, false);
    for (auto k : keep) kept[k] = true;

    std::size_t kept_dim = 1;
    for (auto k : keep) kept_dim *= dims[k];

    // For each full index: its projection onto the kept subsystems and onto
    // the traced subsystems.
    std::vector<std::size_t> kept_index(total), traced_index(total);
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rem = idx, k_stride = 1, t_stride = 1, k_val = 0, t_val = 0;
        for (std::size_t s = n; s-- > 0;) {
            const std::size_t digit = rem % dims[s];
            rem /= dims[s];
            if (kept[s]) {
                k_val += digit * k_stride;
                k_stride *= dims[s];
            } else {
                t_val += digit * t_stride;
                t_stride *= dims[s];
            }
        }
        kept_index[idx] = k_val;
        traced_index[idx] = t_val;
    }

    const auto kd = static_cast<Eigen::Index>(kept_dim);
    Matrix out = Matrix::Zero(kd, kd);
    const Matrix &m = rho.matrix();
    for (std::size_t r = 0; r < total; ++r) {
        for (std::size_t c = 0; c < total; ++c) {
            if (traced_index[r] == traced_index[c]) {
                out(static_cast<Eigen::Index>(kept_index[r]),
                    static_cast<Eigen::Index>(kept_index[c])) +=
                    m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
            }
        }
    }
    return DensityMatrix::trusted(std::move(out));
}

inline DensityMatrix partial_trace(const DensityMatrix &rho, std::span<const std::size_t> dims,
                                   std::size_t keep) {
    const std::size_t one[] = {keep};
    return partial_trace(rho, dims, std::span<const std::size_t>(one));
}

inline DensityMatrix partial_trace(const DensityMatrix &rho,
                                   std::initializer_list<std::size_t> dims, std::size_t keep) {
    return partial_trace(rho, std::span<const std::size_t>(dims.begin(), dims.size()), keep);
}

// ---------------------------------------------------------------------------
// Spectra and entropy

struct HermitianEigensystem {
    Eigen::VectorXd values;  // ascending
    Matrix vectors;          // columns
};

/// Eigendecomposition of a Hermitian matrix (symmetrised before solving).
inline HermitianEigensystem hermitian_eigensystem(const Matrix &m) {
    if (m.rows() != m.cols()) {
        throw Error(ErrorCode::not_square, "eigendecomposition needs a square matrix");
    }
    if (detail::hermiticity_deviation(m) > kValidityTolerance) {
        throw Error(ErrorCode::invalid_state, "matrix is not Hermitian");
    }
    const Eigen::SelfAdjointEigenSolver<Matrix> solver((m + m.adjoint()) / 2.0);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::invalid_state, "eigendecomposition did not converge");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

/// Spectrum of a density matrix, descending. Values in [-1e-10, 0) are
/// clipped to 0 and values in (1, 1 + 1e-10] to 1; anything below -1e-10
/// is an error.
inline std::vector<double> hermitian_eigenvalues(const DensityMatrix &rho) {
    const Matrix &m = rho.matrix();
    const Eigen::SelfAdjointEigenSolver<Matrix> solver((m + m.adjoint()) / 2.0,
                                                       Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::invalid_state, "eigendecomposition did not converge");
    }
    std::vector<double> values(solver.eigenvalues().data(),
                               solver.eigenvalues().data() + solver.eigenvalues().size());
    std::sort(values.begin(), values.end(), std::greater<>());
    for (double &v : values) {
        if (v < -kValidityTolerance) {
            throw Error(ErrorCode::not_positive_semidefinite,
                        "eigenvalue " + detail::format_double(v));
        }
        v = std::clamp(v, 0.0, 1.0);
    }
    return values;
}

/// -sum p log2 p with 0 log 0 = 0.
inline double shannon_entropy_bits(std::span<const double> probabilities) {
    double s = 0.0;
    for (double p : probabilities) {
        if (p > 0.0) s -= p * std::log2(p);
    }
    return std::max(s, 0.0);
}

/// Von Neumann entropy in bits.
inline double von_neumann_entropy(const DensityMatrix &rho) {
    const auto spectrum = hermitian_eigenvalues(rho);
    return shannon_entropy_bits(spectrum);
}

// ---------------------------------------------------------------------------
// Measurement

namespace detail {

inline void check_orthonormal_basis(std::span<const Vector> basis, std::size_t dim) {
    if (basis.size() != dim) {
        throw Error(ErrorCode::not_orthonormal,
                    "basis has " + std::to_string(basis.size()) + " vectors, space has dim " +
                        std::to_string(dim));
    }
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (static_cast<std::size_t>(basis[i].size()) != dim) {
            throw Error(ErrorCode::dimension_mismatch, "basis vector dimension");
        }
        for (std::size_t j = 0; j <= i; ++j) {
            const Complex overlap = basis[j].dot(basis[i]);
            const double expected = i == j ? 1.0 : 0.0;
            if (std::abs(overlap - expected) > kValidityTolerance) {
                throw Error(ErrorCode::not_orthonormal,
                            "<b" + std::to_string(j) + "|b" + std::to_string(i) + "> = " +
                                format_double(std::abs(overlap)));
            }
        }
    }
}

}  // namespace detail

/// Born-rule outcome probabilities <b_i|rho|b_i> for a complete orthonormal
/// basis.
inline std::vector<double> measure_projective(const DensityMatrix &rho,
                                              std::span<const Vector> basis) {
    detail::check_orthonormal_basis(basis, rho.dim());
    std::vector<double> probs;
    probs.reserve(basis.size());
    for (const auto &b : basis) {
        probs.push_back(std::max(0.0, b.dot(rho.matrix() * b).real()));
    }
    return probs;
}

inline std::vector<double> measure_projective(const StateVector &s,
                                              std::span<const Vector> basis) {
    detail::check_orthonormal_basis(basis, s.dim());
    std::vector<double> probs;
    probs.reserve(basis.size());
    for (const auto &b : basis) {
        probs.push_back(std::norm(b.dot(s.amplitudes())));
    }
    return probs;
}

inline std::vector<Vector> computational_basis(std::size_t dim) {
    std::vector<Vector> basis;
    basis.reserve(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        basis.push_back(StateVector::basis(dim, i).amplitudes());
    }
    return basis;
}

// ---------------------------------------------------------------------------
// Common single-qubit operators

namespace gates {

inline UnitaryOperator pauli_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return UnitaryOperator(m);
}

inline UnitaryOperator pauli_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return UnitaryOperator(m);
}

/// i * sigma_y = [[0, 1], [-1, 0]], the real form used as an encoding op.
inline UnitaryOperator i_pauli_y() {
    Matrix m(2, 2);
    m << 0, 1, -1, 0;
    return UnitaryOperator(m);
}

/// Rotation (1/sqrt2)[[1, -1], [1, 1]].
inline UnitaryOperator rotation_quarter() {
    const double h = std::sqrt(0.5);
    Matrix m(2, 2);
    m << h, -h, h, h;
    return UnitaryOperator(m);
}

}  // namespace gates

}  // namespace pingpong
