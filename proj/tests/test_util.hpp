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

#pragma once

#include <random>

#include "oracles.hpp"
#include "pingpong/pingpong.hpp"

namespace testutil {

using pingpong::Complex;
using pingpong::Matrix;
using pingpong::Vector;

inline oracle::Mat to_oracle(const Matrix &m) {
    oracle::Mat out(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) out(r, c) = m(r, c);
    return out;
}

inline oracle::Vec to_oracle(const Vector &v) { return {v.data(), v.data() + v.size()}; }

inline Matrix from_oracle(const oracle::Mat &m) {
    const auto n = static_cast<Eigen::Index>(m.n);
    Matrix out(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c) out(r, c) = m(r, c);
    return out;
}

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived> &m) {
    return m.cwiseAbs().maxCoeff();
}

/// Random inputs for property tests; draws from the standard library so the
/// inputs do not share a generator with the code under test.
class Gen {
public:
    explicit Gen(unsigned seed) : rng_(seed) {}

    Vector state(std::size_t dim) {
        Vector v(static_cast<Eigen::Index>(dim));
        for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Complex(normal_(rng_), normal_(rng_));
        return v / v.norm();
    }

    Matrix unitary(std::size_t dim) {
        const auto n = static_cast<Eigen::Index>(dim);
        Matrix g(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) g(i, j) = Complex(normal_(rng_), normal_(rng_));
        return Eigen::HouseholderQR<Matrix>(g).householderQ();
    }

    /// Full-rank density matrix: mixture of `dim` random pure states.
    pingpong::DensityMatrix density(std::size_t dim) {
        const auto n = static_cast<Eigen::Index>(dim);
        Matrix m = Matrix::Zero(n, n);
        double total = 0.0;
        for (std::size_t k = 0; k < dim; ++k) {
            const Vector v = state(dim);
            const double w = 0.05 + uniform_(rng_);
            m += w * v * v.adjoint();
            total += w;
        }
        return pingpong::DensityMatrix(m / total);
    }

    pingpong::AttackSpec attack(std::size_t ancilla_dim) {
        return {ancilla_dim, state(ancilla_dim), unitary(2 * ancilla_dim)};
    }

    pingpong::AttackSpec product_attack(std::size_t ancilla_dim) {
        return {ancilla_dim, state(ancilla_dim),
                pingpong::kron(unitary(2), unitary(ancilla_dim))};
    }

    double uniform() { return uniform_(rng_); }

private:
    std::mt19937 rng_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// R = (1/sqrt2)[[1, -1], [1, 1]] written out directly.
inline oracle::Mat rotation_r() {
    const double h = std::sqrt(0.5);
    return oracle::Mat::from_rows({{h, -h}, {h, h}});
}

}  // namespace testutil
