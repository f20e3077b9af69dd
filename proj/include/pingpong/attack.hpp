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

// Eve's ancilla attack on the forward (Bob -> Alice) leg.
//
// Eve prepares an ancilla in |chi> and applies a unitary E to
// travel (x) ancilla. The attack is held as raw data so that malformed
// input can be inspected by validate_attack() before anything uses it.

#pragma once

#include <algorithm>
#include <string>
#include <string_view>
#include <vector>

#include "pingpong/protocol_config.hpp"
#include "pingpong/quantum_core.hpp"

namespace pingpong {

struct AttackSpec {
    std::size_t ancilla_dim = 0;
    Vector chi;      // ancilla initial state, length ancilla_dim
    Matrix unitary;  // acts on travel (x) ancilla, (2 ancilla_dim) square
};

struct Violation {
    std::string invariant;
    double measured = 0.0;
    std::string message;
};

/// Reports every violated AttackSpec invariant with its measured deviation.
/// Never throws.
inline std::vector<Violation> validate_attack(const AttackSpec &spec) {
    std::vector<Violation> out;
    if (spec.ancilla_dim < 1) {
        out.push_back({"ancilla_dim", 0.0, "ancilla_dim must be >= 1"});
    }
    if (static_cast<std::size_t>(spec.chi.size()) != spec.ancilla_dim) {
        out.push_back({"chi dimension", static_cast<double>(spec.chi.size()),
                       "chi has " + std::to_string(spec.chi.size()) + " amplitudes, expected " +
                           std::to_string(spec.ancilla_dim)});
    }
    const double norm = spec.chi.norm();
    if (!std::isfinite(norm) || std::abs(norm - 1.0) > kValidityTolerance) {
        out.push_back({"chi norm", norm, "chi norm " + detail::format_double(norm) + " != 1"});
    }
    const auto expected = static_cast<Eigen::Index>(2 * spec.ancilla_dim);
    if (spec.unitary.rows() != expected || spec.unitary.cols() != expected) {
        out.push_back({"E dimension", static_cast<double>(spec.unitary.rows()),
                       "E is " + std::to_string(spec.unitary.rows()) + "x" +
                           std::to_string(spec.unitary.cols()) + ", expected " +
                           std::to_string(expected) + "x" + std::to_string(expected)});
    }
    if (spec.unitary.rows() == spec.unitary.cols() && spec.unitary.rows() > 0) {
        const double dev = detail::unitarity_deviation(spec.unitary);
        if (!std::isfinite(dev) || dev > kValidityTolerance) {
            out.push_back({"E unitarity", dev,
                           "E not unitary: max |E'E - I| = " + detail::format_double(dev)});
        }
    } else if (spec.unitary.rows() != spec.unitary.cols()) {
        out.push_back({"E unitarity", 0.0, "E not unitary: matrix is not square"});
    }
    return out;
}

inline std::string describe(const std::vector<Violation> &violations) {
    std::string text;
    for (const auto &v : violations) {
        if (!text.empty()) text += "; ";
        text += v.message;
    }
    return text;
}

inline void require_valid(const AttackSpec &spec) {
    const auto violations = validate_attack(spec);
    if (!violations.empty()) {
        throw Error(ErrorCode::invalid_state, "invalid attack: " + describe(violations));
    }
}

enum class BuiltinAttack { identity, paper_counterexample, cnot };

inline BuiltinAttack parse_builtin_attack(std::string_view name) {
    if (name == "identity") return BuiltinAttack::identity;
    if (name == "paper_counterexample") return BuiltinAttack::paper_counterexample;
    if (name == "cnot") return BuiltinAttack::cnot;
    throw Error(ErrorCode::unknown_name, "attack '" + std::string(name) + "'");
}

/// identity: E = I4, chi = |0>.
/// paper_counterexample: chi = |+>, E = R (x) I with R = (1/sqrt2)[[1,-1],[1,1]],
///   written out as the sum of its eight outer products.
/// cnot: E = CNOT with the travel qubit as control, chi = |0>.
inline AttackSpec builtin_attack(BuiltinAttack which) {
    AttackSpec spec;
    spec.ancilla_dim = 2;
    spec.chi = Vector::Zero(2);
    spec.unitary = Matrix::Zero(4, 4);
    switch (which) {
        case BuiltinAttack::identity:
            spec.chi(0) = 1.0;
            spec.unitary = Matrix::Identity(4, 4);
            break;
        case BuiltinAttack::paper_counterexample: {
            const double h = std::sqrt(0.5);
            spec.chi << h, h;
            // |row><col| entries, basis order |00>, |01>, |10>, |11>.
            spec.unitary(0, 0) = h;   // |00><00|
            spec.unitary(0, 2) = -h;  // -|00><10|
            spec.unitary(1, 1) = h;   // |01><01|
            spec.unitary(1, 3) = -h;  // -|01><11|
            spec.unitary(2, 0) = h;   // |10><00|
            spec.unitary(2, 2) = h;   // |10><10|
            spec.unitary(3, 1) = h;   // |11><01|
            spec.unitary(3, 3) = h;   // |11><11|
            break;
        }
        case BuiltinAttack::cnot:
            spec.chi(0) = 1.0;
            spec.unitary(0, 0) = 1.0;
            spec.unitary(1, 1) = 1.0;
            spec.unitary(2, 3) = 1.0;
            spec.unitary(3, 2) = 1.0;
            break;
    }
    return spec;
}

inline AttackSpec builtin_attack(std::string_view name) {
    return builtin_attack(parse_builtin_attack(name));
}

/// Entry-wise comparison of two attacks.
inline bool same_attack(const AttackSpec &a, const AttackSpec &b, double tol = 1e-12) {
    return a.ancilla_dim == b.ancilla_dim && a.chi.size() == b.chi.size() &&
           a.unitary.rows() == b.unitary.rows() && a.unitary.cols() == b.unitary.cols() &&
           detail::max_abs(a.chi - b.chi) <= tol &&
           detail::max_abs(a.unitary - b.unitary) <= tol;
}

namespace detail {

/// E applied to the travel slot of the joint layout (identity on home).
inline Matrix attack_on_joint(const AttackSpec &spec, const ProtocolConfig &config) {
    if (config.mode() == Mode::simplified) return spec.unitary;
    return kron(Matrix::Identity(2, 2), spec.unitary);
}

}  // namespace detail

/// Pure joint state right after Eve's operation: (travel, ancilla) in
/// simplified mode, (home, travel, ancilla) in Bell mode.
inline StateVector attacked_state(const AttackSpec &spec, const ProtocolConfig &config) {
    require_valid(spec);
    const Vector joint = kron(prepare_initial(config).amplitudes(), spec.chi);
    return StateVector::normalized(detail::attack_on_joint(spec, config) * joint);
}

inline DensityMatrix apply_attack(const AttackSpec &spec, const ProtocolConfig &config) {
    return to_density(attacked_state(spec, config));
}

struct EnsembleMember {
    double probability;
    DensityMatrix state;  // over travel (x) ancilla
};

/// Post-encoding states of travel (x) ancilla, one per encoding operation.
struct EncodingEnsemble {
    std::vector<EnsembleMember> members;
    std::size_t ancilla_dim = 0;
    Mode mode = Mode::simplified;

    std::vector<std::size_t> dims() const { return {2, ancilla_dim}; }

    DensityMatrix average() const {
        const auto n = static_cast<Eigen::Index>(2 * ancilla_dim);
        Matrix sum = Matrix::Zero(n, n);
        for (const auto &m : members) sum += m.probability * m.state.matrix();
        return DensityMatrix::trusted(std::move(sum));
    }
};

/// Member j is (A_j (x) I) rho' (A_j (x) I)^dagger with prior p_j, where rho'
/// is the attacked state restricted to travel (x) ancilla. In Bell mode the
/// home qubit is traced out first: Eve never has access to it.
inline EncodingEnsemble post_encoding_ensemble(const AttackSpec &spec,
                                               const ProtocolConfig &config) {
    const DensityMatrix joint = apply_attack(spec, config);
    const std::size_t a = spec.ancilla_dim;
    const DensityMatrix eve_view = [&] {
        if (config.mode() == Mode::simplified) return joint;
        const std::size_t dims[] = {2, 2, a};
        const std::size_t keep[] = {1, 2};
        return partial_trace(joint, dims, keep);
    }();

    EncodingEnsemble ensemble;
    ensemble.ancilla_dim = a;
    ensemble.mode = config.mode();
    const auto anc_identity = UnitaryOperator::identity(a);
    for (const auto &e : config.encoding()) {
        ensemble.members.push_back(
            {e.prior, conjugate(tensor_product(e.op, anc_identity), eve_view)});
    }
    return ensemble;
}

/// Probability that a single control round exposes the attack.
///
/// simplified: Alice measures in {|b>, |b_perp>}; d = 1 - <b|rho'_t|b>.
/// bell: both parties measure in the computational basis; the undisturbed
/// pair is perfectly anticorrelated, so d = P(home == travel).
inline double detection_probability(const AttackSpec &spec, const ProtocolConfig &config) {
    const StateVector psi = attacked_state(spec, config);
    const std::size_t a = spec.ancilla_dim;
    double d = 0.0;
    if (config.mode() == Mode::simplified) {
        const Vector &b = config.bob_initial().amplitudes();
        // <b|rho'_t|b> = sum over ancilla index k of |<b, k|psi>|^2
        double stay = 0.0;
        for (std::size_t k = 0; k < a; ++k) {
            Complex amp = 0.0;
            for (Eigen::Index t = 0; t < 2; ++t) {
                amp += std::conj(b(t)) * psi[static_cast<std::size_t>(t) * a + k];
            }
            stay += std::norm(amp);
        }
        d = 1.0 - stay;
    } else {
        for (std::size_t bit = 0; bit < 2; ++bit) {
            for (std::size_t k = 0; k < a; ++k) {
                d += std::norm(psi[(bit * 2 + bit) * a + k]);
            }
        }
    }
    return std::clamp(d, 0.0, 1.0);
}

}  // namespace pingpong
