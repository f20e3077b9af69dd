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

// Round-level simulation of the ping-pong protocol.
//
// A round is either a control round (Alice measures the travel qubit and the
// result is compared against what Bob prepared) or a message round (Alice
// applies one of the encoding operations and returns the qubit to Bob, who
// decodes). Eve acts once, on the forward leg, before Alice's choice.

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pingpong/attack.hpp"
#include "pingpong/protocol_config.hpp"
#include "pingpong/quantum_core.hpp"

namespace pingpong {

using Rng = std::mt19937_64;

namespace detail {

/// Uniform double in [0, 1) from the top 53 bits; independent of the
/// standard library's distribution implementations.
inline double uniform01(Rng &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::size_t sample_index(std::span<const double> probabilities, Rng &rng) {
    const double u = uniform01(rng);
    double acc = 0.0;
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        acc += probabilities[i];
        if (u < acc) return i;
    }
    // Rounding left a sliver above the accumulated mass; take the last
    // outcome with non-zero probability.
    for (std::size_t i = probabilities.size(); i-- > 0;) {
        if (probabilities[i] > 0.0) return i;
    }
    return probabilities.size() - 1;
}

}  // namespace detail

enum class RoundKind { control, message };

struct TranscriptEntry {
    std::string actor;
    std::string action;
    std::string data;
};

struct RoundOutcome {
    RoundKind kind = RoundKind::control;
    std::optional<bool> detected;             // control rounds only
    std::optional<std::size_t> decoded;       // message rounds only; empty = undecodable
    std::vector<TranscriptEntry> transcript;
};

/// One joint outcome of the control-mode measurements.
struct ControlOutcome {
    std::string label;  // e.g. "travel=1" or "home=0,travel=1"
    double probability;
    bool detected;
};

/// Analytic detection probability plus the exact outcome distribution it
/// was derived from, so rounds can be sampled.
class ControlRound {
public:
    ControlRound(double detection_probability, std::vector<ControlOutcome> outcomes)
        : d_(detection_probability), outcomes_(std::move(outcomes)) {
        for (const auto &o : outcomes_) probs_.push_back(o.probability);
    }

    double detection_probability() const { return d_; }
    const std::vector<ControlOutcome> &outcomes() const { return outcomes_; }

    RoundOutcome sample(Rng &rng) const {
        const auto &o = outcomes_[detail::sample_index(probs_, rng)];
        RoundOutcome round;
        round.kind = RoundKind::control;
        round.detected = o.detected;
        round.transcript = {{"alice", "measure", o.label},
                            {"bob", "compare", o.detected ? "mismatch" : "match"}};
        return round;
    }

private:
    double d_;
    std::vector<ControlOutcome> outcomes_;
    std::vector<double> probs_;
};

inline ControlRound run_control_round(const ProtocolConfig &config, const AttackSpec &spec) {
    const double d = detection_probability(spec, config);
    const StateVector psi = attacked_state(spec, config);
    const std::size_t a = spec.ancilla_dim;
    std::vector<ControlOutcome> outcomes;

    if (config.mode() == Mode::simplified) {
        // Alice measures in {|b>, |b_perp>}.
        outcomes.push_back({"travel=b", 1.0 - d, false});
        outcomes.push_back({"travel=b_perp", d, true});
    } else {
        for (std::size_t home = 0; home < 2; ++home) {
            for (std::size_t travel = 0; travel < 2; ++travel) {
                double p = 0.0;
                for (std::size_t k = 0; k < a; ++k) p += std::norm(psi[(home * 2 + travel) * a + k]);
                outcomes.push_back({"home=" + std::to_string(home) +
                                        ",travel=" + std::to_string(travel),
                                    p, home == travel});
            }
        }
    }
    return ControlRound(d, std::move(outcomes));
}

namespace detail {

/// The states Bob expects back for each encoding, on the systems he holds
/// (travel alone, or home (x) travel).
inline std::vector<Vector> decoding_candidates(const ProtocolConfig &config) {
    std::vector<Vector> out;
    for (const auto &e : config.encoding()) {
        if (config.mode() == Mode::simplified) {
            out.push_back(e.op.matrix() * config.bob_initial().amplitudes());
        } else {
            out.push_back(kron(Matrix::Identity(2, 2), e.op.matrix()) *
                          config.bob_initial().amplitudes());
        }
    }
    return out;
}

/// Extends mutually orthonormal `vectors` to a basis of the whole space.
inline std::vector<Vector> complete_basis(std::vector<Vector> vectors, std::size_t dim) {
    for (std::size_t i = 0; i < dim && vectors.size() < dim; ++i) {
        Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
        v(static_cast<Eigen::Index>(i)) = 1.0;
        for (const auto &b : vectors) v -= b.dot(v) * b;
        const double n = v.norm();
        if (n > 1e-6) vectors.push_back(v / n);
    }
    return vectors;
}

}  // namespace detail

/// Bob's decoding measurement, if the expected states are mutually
/// orthogonal. Outcome j < encoding().size() decodes to j; the completion
/// outcomes decode to nothing.
inline std::optional<std::vector<Vector>> decoding_basis(const ProtocolConfig &config) {
    auto candidates = detail::decoding_candidates(config);
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (std::abs(candidates[j].dot(candidates[i])) > kValidityTolerance) {
                return std::nullopt;
            }
        }
    }
    const std::size_t dim = config.mode() == Mode::simplified ? 2 : 4;
    if (candidates.size() > dim) return std::nullopt;
    return detail::complete_basis(std::move(candidates), dim);
}

struct MessageRound {
    StateVector final_state;  // joint state after Alice's operation
    /// Probability of each decoding outcome; the last entry is the mass on
    /// "undecodable". Empty when Bob has no decoding measurement.
    std::vector<double> decode_distribution;
    RoundOutcome outcome;
};

/// Full message-mode round: prepare, attack, encode `symbol`, decode.
inline MessageRound run_message_round(const ProtocolConfig &config, const AttackSpec &spec,
                                      std::size_t symbol, Rng &rng) {
    if (symbol >= config.encoding().size()) {
        throw Error(ErrorCode::invalid_index,
                    "symbol " + std::to_string(symbol) + " but only " +
                        std::to_string(config.encoding().size()) + " encoding ops");
    }
    const StateVector attacked = attacked_state(spec, config);
    const std::size_t a = spec.ancilla_dim;
    const Matrix &enc = config.encoding()[symbol].op.matrix();
    const Matrix alice = config.mode() == Mode::simplified
                             ? kron(enc, Matrix::Identity(static_cast<Eigen::Index>(a),
                                                          static_cast<Eigen::Index>(a)))
                             : kron(kron(Matrix::Identity(2, 2), enc),
                                    Matrix::Identity(static_cast<Eigen::Index>(a),
                                                     static_cast<Eigen::Index>(a)));
    StateVector final_state = StateVector::normalized(alice * attacked.amplitudes());

    RoundOutcome outcome;
    outcome.kind = RoundKind::message;
    outcome.transcript.push_back({"alice", "encode", config.encoding()[symbol].label});

    std::vector<double> distribution;
    if (const auto basis = decoding_basis(config)) {
        // Bob holds everything except Eve's ancilla.
        const DensityMatrix joint = to_density(final_state);
        const auto dims = config.joint_dims(a);
        std::vector<std::size_t> keep(dims.size() - 1);
        std::iota(keep.begin(), keep.end(), std::size_t{0});
        const DensityMatrix bob = partial_trace(joint, dims, keep);
        const auto probs = measure_projective(bob, *basis);

        const std::size_t n_symbols = config.encoding().size();
        distribution.assign(n_symbols + 1, 0.0);
        for (std::size_t i = 0; i < probs.size(); ++i) {
            distribution[std::min(i, n_symbols)] += probs[i];
        }
        const std::size_t k = detail::sample_index(probs, rng);
        if (k < n_symbols) outcome.decoded = k;
        outcome.transcript.push_back(
            {"bob", "decode", k < n_symbols ? std::to_string(k) : std::string("none")});
    } else {
        outcome.transcript.push_back({"bob", "decode", "none (expected states not orthogonal)"});
    }
    return {std::move(final_state), std::move(distribution), std::move(outcome)};
}

struct MonteCarloStats {
    std::uint64_t rounds = 0;
    std::uint64_t control_rounds = 0;
    std::uint64_t detections = 0;
    std::uint64_t message_rounds = 0;
    std::uint64_t correct_decodes = 0;
    std::uint64_t undecodable = 0;
    double empirical_d = 0.0;                      // detections / control_rounds
    std::optional<double> decode_accuracy;         // correct / message_rounds

    bool operator==(const MonteCarloStats &) const = default;
};

/// Simulates `rounds` protocol rounds. Each round is a control round with
/// probability config.control_probability(), otherwise a message round with a
/// symbol drawn from the encoding priors. One seeded stream per call.
inline MonteCarloStats monte_carlo(const ProtocolConfig &config, const AttackSpec &spec,
                                   std::uint64_t rounds, std::uint64_t seed) {
    if (rounds < 1) {
        throw Error(ErrorCode::out_of_range, "rounds must be >= 1");
    }
    Rng rng(seed);
    const ControlRound control = run_control_round(config, spec);

    std::vector<double> priors;
    std::vector<MessageRound> messages;
    for (std::size_t j = 0; j < config.encoding().size(); ++j) {
        priors.push_back(config.encoding()[j].prior);
        Rng scratch(0);
        messages.push_back(run_message_round(config, spec, j, scratch));
    }

    MonteCarloStats stats;
    stats.rounds = rounds;
    for (std::uint64_t r = 0; r < rounds; ++r) {
        if (detail::uniform01(rng) < config.control_probability()) {
            ++stats.control_rounds;
            if (*control.sample(rng).detected) ++stats.detections;
        } else {
            ++stats.message_rounds;
            const std::size_t symbol = detail::sample_index(priors, rng);
            const auto &dist = messages[symbol].decode_distribution;
            if (dist.empty()) {
                ++stats.undecodable;
                continue;
            }
            const std::size_t k = detail::sample_index(dist, rng);
            if (k == dist.size() - 1) {
                ++stats.undecodable;
            } else if (k == symbol) {
                ++stats.correct_decodes;
            }
        }
    }
    if (stats.control_rounds > 0) {
        stats.empirical_d =
            static_cast<double>(stats.detections) / static_cast<double>(stats.control_rounds);
    }
    if (stats.message_rounds > 0) {
        stats.decode_accuracy = static_cast<double>(stats.correct_decodes) /
                                static_cast<double>(stats.message_rounds);
    }
    return stats;
}

}  // namespace pingpong
