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

#include "pingpong/protocol.hpp"

#include <numeric>

#include "gtest/gtest.h"

#include "test_util.hpp"

using namespace pingpong;
using testutil::Gen;
using testutil::to_oracle;

namespace {

const double kH = std::sqrt(0.5);

AttackSpec counterexample() { return builtin_attack(BuiltinAttack::paper_counterexample); }
AttackSpec identity() { return builtin_attack(BuiltinAttack::identity); }

}  // namespace

TEST(PrepareInitial, simplified_default_sends_zero) {
    const auto s = prepare_initial(ProtocolConfig::simplified());
    ASSERT_EQ(s.dim(), 2u);
    EXPECT_EQ(s[0], Complex(1.0));
    EXPECT_EQ(s[1], Complex(0.0));
}

TEST(PrepareInitial, bell_pair) {
    const auto s = prepare_initial(ProtocolConfig::bell());
    ASSERT_EQ(s.dim(), 4u);
    EXPECT_EQ(s[0], Complex(0.0));
    EXPECT_NEAR(s[1].real(), kH, 1e-16);
    EXPECT_NEAR(s[2].real(), kH, 1e-16);
    EXPECT_EQ(s[3], Complex(0.0));
}

TEST(PrepareInitial, simplified_custom_initial_state) {
    const auto s = prepare_initial(ProtocolConfig::simplified(EncodingSet::iz, StateVector::basis(2, 1)));
    EXPECT_EQ(s[1], Complex(1.0));
}

TEST(ProtocolConfig, rejects_bad_priors_and_dimensions) {
    auto ops = encoding_ops(EncodingSet::iz);
    ops[0].prior = 0.6;
    EXPECT_THROW(ProtocolConfig(Mode::simplified, StateVector::basis(2, 0), ops), Error);
    EXPECT_THROW(ProtocolConfig(Mode::bell, StateVector::basis(2, 0), encoding_ops(EncodingSet::iz)), Error);
    EXPECT_THROW(ProtocolConfig::simplified().with_control_probability(1.5), Error);
}

TEST(ControlRound, counterexample_simplified_detects_half) {
    EXPECT_NEAR(run_control_round(ProtocolConfig::simplified(), counterexample()).detection_probability(), 0.5, 1e-12);
}

TEST(ControlRound, identity_attack_is_undetected) {
    EXPECT_EQ(run_control_round(ProtocolConfig::simplified(), identity()).detection_probability(), 0.0);
    EXPECT_EQ(run_control_round(ProtocolConfig::bell(), identity()).detection_probability(), 0.0);
}

TEST(ControlRound, counterexample_bell_mode_matches_oracle) {
    // (I (x) E) applied to |psi+> (x) |chi>, then the mass on home == travel.
    const auto spec = counterexample();
    const oracle::Vec psi_plus{0.0, kH, kH, 0.0};
    const auto joint = oracle::kron(psi_plus, to_oracle(spec.chi));
    const auto op = oracle::kron(oracle::Mat::identity(2), to_oracle(spec.unitary));
    const auto out = oracle::mul(op, joint);
    double equal = 0.0;
    for (std::size_t home = 0; home < 2; ++home)
        for (std::size_t k = 0; k < 2; ++k) equal += std::norm(out[(home * 2 + home) * 2 + k]);
    const auto round = run_control_round(ProtocolConfig::bell(), spec);
    EXPECT_NEAR(round.detection_probability(), equal, 1e-15);
    EXPECT_NEAR(round.detection_probability(), 0.5, 1e-12);
}

TEST(ControlRound, outcome_distribution_is_consistent) {
    Gen gen(1);
    for (int i = 0; i < 30; ++i) {
        const auto spec = gen.attack(1 + i % 3);
        for (auto cfg : {ProtocolConfig::simplified(), ProtocolConfig::bell()}) {
            const auto round = run_control_round(cfg, spec);
            double total = 0.0, detected = 0.0;
            for (const auto &o : round.outcomes()) {
                total += o.probability;
                if (o.detected) detected += o.probability;
            }
            EXPECT_NEAR(total, 1.0, 1e-12);
            EXPECT_NEAR(detected, round.detection_probability(), 1e-12);
        }
    }
}

TEST(ControlRound, samples_fill_control_fields_only) {
    Rng rng(3);
    const auto round = run_control_round(ProtocolConfig::bell(), counterexample()).sample(rng);
    EXPECT_EQ(round.kind, RoundKind::control);
    EXPECT_TRUE(round.detected.has_value());
    EXPECT_FALSE(round.decoded.has_value());
    EXPECT_FALSE(round.transcript.empty());
}

TEST(MessageRound, noiseless_bell_mode_decodes_every_symbol) {
    for (auto set : {EncodingSet::iz, EncodingSet::paulis}) {
        const auto cfg = ProtocolConfig::bell(set);
        for (std::size_t bit = 0; bit < cfg.encoding().size(); ++bit) {
            for (std::uint64_t seed = 0; seed < 5; ++seed) {
                Rng rng(seed);
                const auto round = run_message_round(cfg, identity(), bit, rng);
                EXPECT_EQ(round.outcome.kind, RoundKind::message);
                EXPECT_FALSE(round.outcome.detected.has_value());
                ASSERT_TRUE(round.outcome.decoded.has_value());
                EXPECT_EQ(*round.outcome.decoded, bit);
            }
        }
    }
}

TEST(MessageRound, simplified_zero_with_iz_is_undecodable) {
    // sigma_z |0> = |0>, so the two expected states coincide.
    const oracle::Mat z = oracle::Mat::from_rows({{1.0, 0.0}, {0.0, -1.0}});
    const auto z0 = oracle::mul(z, oracle::Vec{1.0, 0.0});
    EXPECT_NEAR(std::abs(z0[0]), 1.0, 1e-15);
    EXPECT_EQ(std::abs(z0[1]), 0.0);

    Rng rng(0);
    const auto round = run_message_round(ProtocolConfig::simplified(), counterexample(), 1, rng);
    EXPECT_FALSE(round.outcome.decoded.has_value());
    EXPECT_TRUE(round.decode_distribution.empty());
    EXPECT_FALSE(decoding_basis(ProtocolConfig::simplified()).has_value());
}

TEST(MessageRound, simplified_plus_with_iz_decodes) {
    const double h = kH;
    Vector plus(2);
    plus << h, h;
    const auto cfg = ProtocolConfig::simplified(EncodingSet::iz, StateVector(plus));
    for (std::size_t bit = 0; bit < 2; ++bit) {
        Rng rng(bit);
        const auto round = run_message_round(cfg, identity(), bit, rng);
        ASSERT_TRUE(round.outcome.decoded.has_value());
        EXPECT_EQ(*round.outcome.decoded, bit);
    }
}

TEST(MessageRound, invalid_symbol) {
    Rng rng(0);
    EXPECT_THROW(run_message_round(ProtocolConfig::bell(), identity(), 2, rng), Error);
}

TEST(MessageRound, final_state_and_distribution_are_normalised) {
    Gen gen(2);
    for (int i = 0; i < 20; ++i) {
        const auto spec = gen.attack(2);
        const auto cfg = ProtocolConfig::bell(i % 2 ? EncodingSet::paulis : EncodingSet::iz);
        Rng rng(i);
        const auto round = run_message_round(cfg, spec, 0, rng);
        EXPECT_NEAR(round.final_state.amplitudes().norm(), 1.0, 1e-12);
        EXPECT_NEAR(std::accumulate(round.decode_distribution.begin(), round.decode_distribution.end(), 0.0), 1.0,
                    1e-10);
    }
}

TEST(MonteCarlo, counterexample_within_three_sigma) {
    const auto cfg = ProtocolConfig::simplified().with_control_probability(1.0);
    const double sigma = std::sqrt(0.25 / 100000.0);
    for (std::uint64_t seed : {1, 2, 3}) {
        const auto stats = monte_carlo(cfg, counterexample(), 100000, seed);
        EXPECT_EQ(stats.control_rounds, 100000u);
        EXPECT_LE(std::abs(stats.empirical_d - 0.5), 3.0 * sigma) << "seed " << seed;
    }
}

TEST(MonteCarlo, identity_attack_never_detected) {
    for (auto cfg : {ProtocolConfig::simplified(), ProtocolConfig::bell()}) {
        const auto stats = monte_carlo(cfg, identity(), 1000, 42);
        EXPECT_EQ(stats.detections, 0u);
        EXPECT_EQ(stats.empirical_d, 0.0);
    }
    const auto bell = monte_carlo(ProtocolConfig::bell(), identity(), 1000, 42);
    ASSERT_TRUE(bell.decode_accuracy.has_value());
    EXPECT_EQ(*bell.decode_accuracy, 1.0);
}

TEST(MonteCarlo, deterministic_per_seed) {
    const auto a = monte_carlo(ProtocolConfig::bell(), counterexample(), 5000, 9);
    const auto b = monte_carlo(ProtocolConfig::bell(), counterexample(), 5000, 9);
    const auto c = monte_carlo(ProtocolConfig::bell(), counterexample(), 5000, 10);
    EXPECT_EQ(a, b);
    EXPECT_NE(a, c);
}

TEST(MonteCarlo, rejects_zero_rounds) {
    EXPECT_THROW(monte_carlo(ProtocolConfig::simplified(), counterexample(), 0, 1), Error);
}

TEST(MonteCarlo, analytic_and_empirical_agree_for_builtins) {
    for (auto which : {BuiltinAttack::identity, BuiltinAttack::paper_counterexample, BuiltinAttack::cnot}) {
        for (auto mode : {Mode::simplified, Mode::bell}) {
            const auto cfg = ProtocolConfig::make(mode, EncodingSet::iz).with_control_probability(1.0);
            const auto spec = builtin_attack(which);
            const double d = detection_probability(spec, cfg);
            const auto stats = monte_carlo(cfg, spec, 100000, 77);
            const double sigma = std::sqrt(d * (1.0 - d) / 1e5);
            if (sigma == 0.0) {
                EXPECT_EQ(stats.empirical_d, d);
            } else {
                EXPECT_LE(std::abs(stats.empirical_d - d), 4.0 * sigma);
            }
        }
    }
}

TEST(ProtocolProperties, detection_in_unit_interval_and_phase_invariant) {
    Gen gen(4);
    for (int i = 0; i < 100; ++i) {
        auto spec = gen.attack(1 + i % 3);
        for (auto cfg : {ProtocolConfig::simplified(), ProtocolConfig::bell()}) {
            const double d = detection_probability(spec, cfg);
            EXPECT_GE(d, 0.0);
            EXPECT_LE(d, 1.0);
            auto phased = spec;
            phased.unitary *= std::polar(1.0, gen.uniform() * 6.0);
            EXPECT_NEAR(detection_probability(phased, cfg), d, 1e-12);
        }
    }
}

TEST(ProtocolProperties, iz_encodings_of_zero_are_identical) {
    const auto cfg = ProtocolConfig::simplified();
    const Vector b = cfg.bob_initial().amplitudes();
    const auto s0 = to_density(StateVector(cfg.encoding()[0].op.matrix() * b));
    const auto s1 = to_density(StateVector(cfg.encoding()[1].op.matrix() * b));
    EXPECT_LE(testutil::max_abs(s0.matrix() - s1.matrix()), 1e-12);
}
