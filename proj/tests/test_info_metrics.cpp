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

#include "pingpong/info_metrics.hpp"

#include "gtest/gtest.h"

#include "test_util.hpp"

using namespace pingpong;
using testutil::Gen;
using testutil::to_oracle;

namespace {

AttackSpec counterexample() { return builtin_attack(BuiltinAttack::paper_counterexample); }

oracle::Mat conj_by(const oracle::Mat &u, const oracle::Mat &rho) {
    return oracle::mul(oracle::mul(u, rho), oracle::adjoint(u));
}

}  // namespace

TEST(BinaryEntropy, reference_points) {
    EXPECT_EQ(binary_entropy(0.5), 1.0);
    EXPECT_EQ(binary_entropy(0.0), 0.0);
    EXPECT_EQ(binary_entropy(1.0), 0.0);
    EXPECT_NEAR(binary_entropy(0.11), 0.499915958164528, 1e-14);
    EXPECT_NEAR(binary_entropy(0.001), 0.0114077577374611, 1e-15);
    EXPECT_THROW(binary_entropy(-0.01), Error);
    EXPECT_THROW(binary_entropy(1.5), Error);
}

TEST(InformationReport, counterexample_simplified) {
    const auto report = information_report(counterexample(), ProtocolConfig::simplified());
    EXPECT_NEAR(report.d, 0.5, 1e-12);
    EXPECT_NEAR(report.i0t, 1.0, 1e-10);
    EXPECT_NEAR(report.i0a, 0.0, 1e-7);
    EXPECT_NEAR(report.i0c, 1.0, 1e-10);
    EXPECT_NEAR(report.holevo_t, 1.0, 1e-10);
    EXPECT_NEAR(report.holevo_c, 1.0, 1e-10);

    // Oracle: average of |++><++| and |-+><-+| is (I/2) (x) |+><+|.
    const auto rho = oracle::kron(oracle::scale(oracle::Mat::identity(2), 0.5),
                                  oracle::outer({std::sqrt(0.5), std::sqrt(0.5)}));
    EXPECT_NEAR(oracle::entropy(rho), 1.0, 1e-9);
    EXPECT_NEAR(oracle::entropy(oracle::trace_second(rho, 2, 2)), report.i0t, 1e-9);

    ASSERT_TRUE(report.paper_claim_deviation.has_value());
    EXPECT_EQ(report.paper_claim_deviation->claimed, 2.0);
    EXPECT_NEAR(report.paper_claim_deviation->computed, 1.0, 1e-10);
    EXPECT_NEAR(report.paper_claim_deviation->delta, -1.0, 1e-10);
}

TEST(InformationReport, claim_deviation_only_for_canonical_case) {
    EXPECT_FALSE(information_report(counterexample(), ProtocolConfig::bell()).paper_claim_deviation.has_value());
    EXPECT_FALSE(information_report(builtin_attack(BuiltinAttack::identity), ProtocolConfig::simplified())
                     .paper_claim_deviation.has_value());
}

TEST(InformationReport, counterexample_bell_mode) {
    const auto report = information_report(counterexample(), ProtocolConfig::bell());
    EXPECT_NEAR(report.d, 0.5, 1e-12);
    EXPECT_NEAR(report.i0t, 1.0, 1e-10);
    EXPECT_NEAR(report.i0a, 0.0, 1e-7);
    EXPECT_NEAR(report.i0c, 1.0, 1e-10);
    EXPECT_NEAR(report.holevo_c, 0.0, 1e-7);
}

TEST(InformationReport, identity_attack_learns_nothing) {
    const auto report = information_report(builtin_attack(BuiltinAttack::identity), ProtocolConfig::simplified());
    EXPECT_EQ(report.d, 0.0);
    EXPECT_NEAR(report.i0t, 0.0, 1e-12);
    EXPECT_NEAR(report.i0a, 0.0, 1e-12);
    EXPECT_NEAR(report.i0c, 0.0, 1e-12);
    EXPECT_NEAR(report.holevo_c, 0.0, 1e-12);
}

TEST(HolevoBound, simplified_composite_matches_oracle) {
    // Members |++> and |-+> are orthogonal: chi = S(avg) - 0 = 1.
    const auto ensemble = post_encoding_ensemble(counterexample(), ProtocolConfig::simplified());
    EXPECT_NEAR(holevo_bound(ensemble, Subsystem::composite), 1.0, 1e-10);
    EXPECT_NEAR(holevo_bound(ensemble, Subsystem::travel), 1.0, 1e-10);
}

TEST(HolevoBound, bell_composite_matches_oracle) {
    // Conditional states assembled independently: trace the home qubit from
    // (I (x) E)|psi+>|chi>, then encode on the travel qubit.
    const auto spec = counterexample();
    const double h = std::sqrt(0.5);
    const auto psi = oracle::mul(oracle::kron(oracle::Mat::identity(2), to_oracle(spec.unitary)),
                                 oracle::kron(oracle::Vec{0.0, h, h, 0.0}, to_oracle(spec.chi)));
    const auto rho0 = oracle::trace_first(oracle::outer(psi), 2, 4);
    const auto zi = oracle::kron(oracle::Mat::from_rows({{1.0, 0.0}, {0.0, -1.0}}), oracle::Mat::identity(2));
    const auto rho1 = conj_by(zi, rho0);
    const auto avg = oracle::add(oracle::scale(rho0, 0.5), oracle::scale(rho1, 0.5));
    const double chi = oracle::entropy(avg) - 0.5 * oracle::entropy(rho0) - 0.5 * oracle::entropy(rho1);

    const auto ensemble = post_encoding_ensemble(spec, ProtocolConfig::bell());
    EXPECT_LE(oracle::max_abs_diff(to_oracle(ensemble.members[1].state.matrix()), rho1), 1e-15);
    EXPECT_NEAR(holevo_bound(ensemble, Subsystem::composite), chi, 1e-8);
    EXPECT_NEAR(chi, 0.0, 1e-8);
}

TEST(HolevoBound, single_member_ensemble_is_zero) {
    EncodingEnsemble ensemble;
    ensemble.ancilla_dim = 2;
    ensemble.mode = Mode::simplified;
    ensemble.members.push_back({1.0, DensityMatrix::maximally_mixed(4)});
    EXPECT_NEAR(holevo_bound(ensemble, Subsystem::composite), 0.0, 1e-12);
    EXPECT_NEAR(holevo_bound(ensemble, Subsystem::travel), 0.0, 1e-12);
}

TEST(InfoProperties, travel_entropy_equals_binary_entropy_of_d) {
    Gen gen(11);
    for (int i = 0; i < 300; ++i) {
        const auto report = information_report(gen.attack(1 + i % 3), ProtocolConfig::simplified());
        EXPECT_NEAR(report.i0t, binary_entropy(report.d), 1e-10) << "attack " << i;
    }
}

TEST(InfoProperties, entropy_inequalities_hold) {
    Gen gen(12);
    for (int i = 0; i < 500; ++i) {
        const auto spec = gen.attack(1 + i % 3);
        for (auto cfg : {ProtocolConfig::simplified(), ProtocolConfig::bell(EncodingSet::paulis)}) {
            const auto diag = entropy_inequality_check(information_report(spec, cfg));
            EXPECT_TRUE(diag.subadditivity_ok) << diag.subadditivity_margin;
            EXPECT_TRUE(diag.araki_lieb_ok) << diag.araki_lieb_margin;
        }
    }
}

TEST(InfoProperties, inequality_check_flags_bad_report) {
    InfoReport bogus;
    bogus.i0t = 1.0;
    bogus.i0a = 0.0;
    bogus.i0c = 2.0;  // exceeds i0t + i0a
    const auto diag = entropy_inequality_check(bogus);
    EXPECT_FALSE(diag.subadditivity_ok);
    EXPECT_NEAR(diag.subadditivity_margin, -1.0, 1e-15);
    EXPECT_TRUE(diag.araki_lieb_ok);
}

TEST(InfoProperties, holevo_never_exceeds_entropy) {
    Gen gen(13);
    for (int i = 0; i < 200; ++i) {
        const auto cfg = i % 2 ? ProtocolConfig::bell(EncodingSet::paulis) : ProtocolConfig::simplified();
        const auto r = information_report(gen.attack(1 + i % 3), cfg);
        EXPECT_LE(r.holevo_t, r.i0t + 1e-9);
        EXPECT_LE(r.holevo_c, r.i0c + 1e-9);
        EXPECT_GE(r.holevo_t, -1e-9);
        EXPECT_GE(r.holevo_c, -1e-9);
    }
}

TEST(InfoProperties, product_attacks_leave_ancilla_uninformative) {
    Gen gen(14);
    for (int i = 0; i < 100; ++i) {
        const auto r = information_report(gen.product_attack(1 + i % 3), ProtocolConfig::simplified());
        EXPECT_NEAR(r.i0a, 0.0, 1e-7);
        EXPECT_NEAR(r.i0c, r.i0t, 1e-7);
    }
}

TEST(InfoProperties, entropies_match_oracle_spectra) {
    Gen gen(15);
    for (int i = 0; i < 30; ++i) {
        const auto spec = gen.attack(2);
        const auto ensemble = post_encoding_ensemble(spec, ProtocolConfig::simplified());
        const auto rho = to_oracle(ensemble.average().matrix());
        const auto r = information_report(ensemble);
        EXPECT_NEAR(r.i0c, oracle::entropy(rho), 1e-9);
        EXPECT_NEAR(r.i0t, oracle::entropy_of(oracle::eigenvalues_2x2(oracle::trace_second(rho, 2, 2))), 1e-9);
        EXPECT_NEAR(r.i0a, oracle::entropy_of(oracle::eigenvalues_2x2(oracle::trace_first(rho, 2, 2))), 1e-9);
    }
}
