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

#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "pingpong/quantum_core.hpp"

namespace pingpong {

/// simplified: Bob sends a single travel qubit in a known state.
/// bell: Bob keeps the home half of (|01> + |10>)/sqrt2 and sends the other.
enum class Mode { simplified, bell };

enum class EncodingSet { iz, paulis };

inline std::string_view to_string(Mode mode) {
    return mode == Mode::simplified ? "simplified" : "bell";
}

inline std::string_view to_string(EncodingSet set) {
    return set == EncodingSet::iz ? "iz" : "paulis";
}

inline Mode parse_mode(std::string_view name) {
    if (name == "simplified") return Mode::simplified;
    if (name == "bell") return Mode::bell;
    throw Error(ErrorCode::unknown_name, "mode '" + std::string(name) + "'");
}

inline EncodingSet parse_encoding_set(std::string_view name) {
    if (name == "iz") return EncodingSet::iz;
    if (name == "paulis") return EncodingSet::paulis;
    throw Error(ErrorCode::unknown_name, "encoding '" + std::string(name) + "'");
}

struct EncodingOp {
    std::string label;
    UnitaryOperator op;
    double prior;
};

/// {I, sigma_z} with equal priors, or the four operators
/// {I, sigma_x, i sigma_y, sigma_z} with equal priors.
inline std::vector<EncodingOp> encoding_ops(EncodingSet set) {
    if (set == EncodingSet::iz) {
        return {{"I", UnitaryOperator::identity(2), 0.5}, {"Z", gates::pauli_z(), 0.5}};
    }
    return {{"I", UnitaryOperator::identity(2), 0.25},
            {"X", gates::pauli_x(), 0.25},
            {"iY", gates::i_pauli_y(), 0.25},
            {"Z", gates::pauli_z(), 0.25}};
}

/// (|01> + |10>)/sqrt2 over (home, travel).
inline StateVector bell_psi_plus() {
    Vector v = Vector::Zero(4);
    v(1) = std::sqrt(0.5);
    v(2) = std::sqrt(0.5);
    return StateVector(std::move(v));
}

class ProtocolConfig {
public:
    ProtocolConfig(Mode mode, StateVector bob_initial, std::vector<EncodingOp> encoding,
                   double control_probability = 0.5)
        : mode_(mode),
          bob_initial_(std::move(bob_initial)),
          encoding_(std::move(encoding)),
          control_probability_(control_probability) {
        const std::size_t expected_dim = mode_ == Mode::simplified ? 2 : 4;
        if (bob_initial_.dim() != expected_dim) {
            throw Error(ErrorCode::dimension_mismatch,
                        "initial state for " + std::string(to_string(mode_)) + " mode must have dim " +
                            std::to_string(expected_dim));
        }
        if (encoding_.empty()) {
            throw Error(ErrorCode::invalid_state, "encoding set is empty");
        }
        double total = 0.0;
        for (const auto &e : encoding_) {
            if (e.op.dim() != 2) {
                throw Error(ErrorCode::dimension_mismatch,
                            "encoding op '" + e.label + "' must act on one qubit");
            }
            if (!(e.prior >= 0.0)) {
                throw Error(ErrorCode::out_of_range, "negative prior for '" + e.label + "'");
            }
            total += e.prior;
        }
        if (std::abs(total - 1.0) > 1e-12) {
            throw Error(ErrorCode::invalid_state,
                        "encoding priors sum to " + detail::format_double(total));
        }
        if (!(control_probability_ >= 0.0 && control_probability_ <= 1.0)) {
            throw Error(ErrorCode::out_of_range, "control probability outside [0, 1]");
        }
    }

    static ProtocolConfig simplified(EncodingSet set = EncodingSet::iz,
                                     StateVector bob_initial = StateVector::basis(2, 0)) {
        return ProtocolConfig(Mode::simplified, std::move(bob_initial), encoding_ops(set));
    }

    static ProtocolConfig bell(EncodingSet set = EncodingSet::iz) {
        return ProtocolConfig(Mode::bell, bell_psi_plus(), encoding_ops(set));
    }

    static ProtocolConfig make(Mode mode, EncodingSet set) {
        return mode == Mode::simplified ? simplified(set) : bell(set);
    }

    Mode mode() const { return mode_; }
    const StateVector &bob_initial() const { return bob_initial_; }
    const std::vector<EncodingOp> &encoding() const { return encoding_; }
    double control_probability() const { return control_probability_; }

    ProtocolConfig with_control_probability(double p) const {
        return ProtocolConfig(mode_, bob_initial_, encoding_, p);
    }

    /// Index of the travel qubit in the (home?, travel, ancilla) layout.
    std::size_t travel_index() const { return mode_ == Mode::simplified ? 0 : 1; }

    /// Subsystem dimensions of the full joint state once an ancilla is attached.
    std::vector<std::size_t> joint_dims(std::size_t ancilla_dim) const {
        if (mode_ == Mode::simplified) return {2, ancilla_dim};
        return {2, 2, ancilla_dim};
    }

private:
    Mode mode_;
    StateVector bob_initial_;
    std::vector<EncodingOp> encoding_;
    double control_probability_;
};

/// The state Bob prepares: his travel qubit (simplified) or the Bell pair
/// over (home, travel).
inline StateVector prepare_initial(const ProtocolConfig &config) {
    return config.bob_initial();
}

}  // namespace pingpong
