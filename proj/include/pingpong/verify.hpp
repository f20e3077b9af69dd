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

// Self-check suites over the library's invariants, run with fixed seeds.
// Each suite reports the largest deviation it observed against its
// tolerance. The entropy routine is injectable so that a deliberately broken
// implementation can be shown to be caught.

#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "pingpong/attack.hpp"
#include "pingpong/attack_search.hpp"
#include "pingpong/info_metrics.hpp"
#include "pingpong/io.hpp"
#include "pingpong/protocol.hpp"
#include "pingpong/quantum_core.hpp"

namespace pingpong {

struct SuiteResult {
    std::string name;
    bool passed = true;
    std::size_t cases = 0;
    double max_deviation = 0.0;
    double tolerance = 0.0;
    std::string note;  // first failure, if any
};

struct VerifyOptions {
    std::function<double(const DensityMatrix &)> entropy = [](const DensityMatrix &rho) {
        return von_neumann_entropy(rho);
    };
    std::uint64_t seed = 20260101;
};

namespace detail {

class SuiteRecorder {
public:
    SuiteRecorder(std::string name, double tolerance) {
        result_.name = std::move(name);
        result_.tolerance = tolerance;
    }

    /// Records one case with its deviation from the expected value.
    void check(double deviation, const std::string &what) {
        ++result_.cases;
        if (!std::isfinite(deviation)) deviation = std::numeric_limits<double>::infinity();
        result_.max_deviation = std::max(result_.max_deviation, deviation);
        if (deviation > result_.tolerance && result_.passed) {
            result_.passed = false;
            result_.note = what + " deviates by " + format_double(deviation);
        }
    }

    void check_true(bool ok, const std::string &what) { check(ok ? 0.0 : std::numeric_limits<double>::infinity(), what); }

    SuiteResult finish() { return std::move(result_); }

private:
    SuiteResult result_;
};

inline DensityMatrix random_density(std::size_t dim, Rng &rng) {
    // Mixture of a few random pure states.
    const auto n = static_cast<Eigen::Index>(dim);
    Matrix m = Matrix::Zero(n, n);
    double total = 0.0;
    for (int k = 0; k < 3; ++k) {
        const Vector v = random_pure_state(dim, rng);
        const double w = 0.1 + uniform01(rng);
        m += w * v * v.adjoint();
        total += w;
    }
    return DensityMatrix::trusted(m / total);
}

template <typename F>
void guarded(SuiteRecorder &rec, F &&body) {
    try {
        body();
    } catch (const std::exception &e) {
        rec.check_true(false, std::string("exception: ") + e.what());
    }
}

}  // namespace detail

inline std::vector<SuiteResult> run_invariant_suites(const VerifyOptions &opts = {}) {
    using detail::SuiteRecorder;
    std::vector<SuiteResult> results;
    const auto &S = opts.entropy;
    std::uint64_t salt = 0;
    auto rng_for = [&]() { return Rng(derive_seed(opts.seed, ++salt)); };

    {
        SuiteRecorder rec("entropy-additivity", 1e-8);
        Rng rng = rng_for();
        detail::guarded(rec, [&] {
            for (int i = 0; i < 200; ++i) {
                const auto a = detail::random_density(2 + i % 3, rng);
                const auto b = detail::random_density(2 + (i / 3) % 3, rng);
                rec.check(std::abs(S(tensor_product(a, b)) - S(a) - S(b)), "case " + std::to_string(i));
            }
        });
        results.push_back(rec.finish());
    }
    {
        SuiteRecorder rec("entropy-unitary-invariance", 1e-8);
        Rng rng = rng_for();
        detail::guarded(rec, [&] {
            for (int i = 0; i < 200; ++i) {
                const std::size_t dim = 2 + i % 3;
                const auto rho = detail::random_density(dim, rng);
                const UnitaryOperator u(haar_unitary(dim, rng));
                rec.check(std::abs(S(conjugate(u, rho)) - S(rho)), "case " + std::to_string(i));
            }
        });
        results.push_back(rec.finish());
    }
    {
        SuiteRecorder rec("maximal-mixing", 1e-12);
        detail::guarded(rec, [&] {
            for (std::size_t n : {2, 3, 4, 8}) {
                rec.check(std::abs(S(DensityMatrix::maximally_mixed(n)) - std::log2(static_cast<double>(n))),
                          "n=" + std::to_string(n));
            }
        });
        results.push_back(rec.finish());
    }
    {
        SuiteRecorder rec("bell-marginal-entropy", 1e-10);
        detail::guarded(rec, [&] {
            const double h = std::sqrt(0.5);
            const Vector bells[] = {
                (Vector(4) << h, 0, 0, h).finished(), (Vector(4) << h, 0, 0, -h).finished(),
                (Vector(4) << 0, h, h, 0).finished(), (Vector(4) << 0, h, -h, 0).finished()};
            for (const auto &b : bells) {
                const auto rho = to_density(StateVector(b));
                for (std::size_t keep : {0, 1}) {
                    rec.check(std::abs(S(partial_trace(rho, {2, 2}, keep)) - 1.0), "bell marginal");
                }
            }
        });
        results.push_back(rec.finish());
    }
    {
        SuiteRecorder rec("unitary-norm-preservation", 1e-12);
        Rng rng = rng_for();
        detail::guarded(rec, [&] {
            for (int i = 0; i < 200; ++i) {
                const std::size_t dim = 2 + i % 7;
                const StateVector s(random_pure_state(dim, rng));
                const UnitaryOperator u(haar_unitary(dim, rng));
                rec.check(std::abs(apply_unitary(u, s).amplitudes().norm() - 1.0), "case " + std::to_string(i));
            }
        });
        results.push_back(rec.finish());
    }
    {
        SuiteRecorder rec("noiseless-correctness", 0.0);
        detail::guarded(rec, [&] {
            const auto id = builtin_attack(BuiltinAttack::identity);
            for (auto cfg : {ProtocolConfig::bell(EncodingSet::iz), ProtocolConfig::bell(EncodingSet::paulis)}) {
                rec.check(detection_probability(id, cfg), "identity d");
                for (std::size_t bit = 0; bit < cfg.encoding().size(); ++bit) {
                    Rng rng(bit);
                    const auto round = run_message_round(cfg, id, bit, rng);
                    rec.check_true(round.outcome.decoded == bit, "decode symbol " + std::to_string(bit));
                }
            }
            rec.check(detection_probability(id, ProtocolConfig::simplified()), "identity d (simplified)");
        });
        results.push_back(rec.finish());
    }
    {
        SuiteRecorder rec("analytic-empirical-agreement", 4.0);
        detail::guarded(rec, [&] {
            const std::uint64_t rounds = 100000;
            for (auto which : {BuiltinAttack::identity, BuiltinAttack::paper_counterexample, BuiltinAttack::cnot}) {
                for (auto cfg : {ProtocolConfig::simplified(), ProtocolConfig::bell()}) {
                    const auto spec = builtin_attack(which);
                    const auto stats = monte_carlo(cfg.with_control_probability(1.0), spec, rounds, opts.seed);
                    const double d = detection_probability(spec, cfg);
                    const double sigma = std::sqrt(d * (1.0 - d) / static_cast<double>(rounds));
                    const double diff = std::abs(stats.empirical_d - d);
                    // Expressed in standard deviations; sigma = 0 requires an exact match.
                    rec.check(sigma > 0.0 ? diff / sigma : (diff == 0.0 ? 0.0 : INFINITY), "attack mc");
                }
            }
        });
        results.push_back(rec.finish());
    }
    {
        SuiteRecorder rec("detection-range-and-phase", 1e-12);
        Rng rng = rng_for();
        detail::guarded(rec, [&] {
            for (int i = 0; i < 100; ++i) {
                auto spec = sample_random_attack(1 + i % 3, rng());
                for (auto cfg : {ProtocolConfig::simplified(), ProtocolConfig::bell()}) {
                    const double d = detection_probability(spec, cfg);
                    rec.check_true(d >= 0.0 && d <= 1.0, "d in [0,1]");
                    auto phased = spec;
                    phased.unitary *= std::polar(1.0, 0.3 + i);
                    rec.check(std::abs(detection_probability(phased, cfg) - d), "global phase");
                }
            }
        });
        results.push_back(rec.finish());
    }
    {
        SuiteRecorder rec("iz-encoding-fixes-zero", 1e-12);
        detail::guarded(rec, [&] {
            const auto cfg = ProtocolConfig::simplified();
            const Vector b = cfg.bob_initial().amplitudes();
            const auto s0 = to_density(StateVector(cfg.encoding()[0].op.matrix() * b));
            const auto s1 = to_density(StateVector(cfg.encoding()[1].op.matrix() * b));
            rec.check(detail::max_abs(s0.matrix() - s1.matrix()), "I|0> vs Z|0>");
        });
        results.push_back(rec.finish());
    }
    {
        SuiteRecorder rec("product-attack-pure-ancilla", 1e-8);
        Rng rng = rng_for();
        detail::guarded(rec, [&] {
            for (int i = 0; i < 100; ++i) {
                const std::size_t a = 1 + i % 3;
                AttackSpec spec;
                spec.ancilla_dim = a;
                spec.chi = random_pure_state(a, rng);
                spec.unitary = kron(haar_unitary(2, rng), haar_unitary(a, rng));
                const auto cfg = i % 2 ? ProtocolConfig::bell() : ProtocolConfig::simplified();
                const auto ensemble = post_encoding_ensemble(spec, cfg);
                for (const auto &m : ensemble.members) {
                    rec.check(S(partial_trace(m.state, {2, a}, 1)), "ancilla marginal entropy");
                }
            }
        });
        results.push_back(rec.finish());
    }
    {
        SuiteRecorder rec("ensemble-phase-invariance", 1e-12);
        Rng rng = rng_for();
        detail::guarded(rec, [&] {
            for (int i = 0; i < 50; ++i) {
                auto spec = sample_random_attack(2, rng());
                auto phased = spec;
                phased.unitary *= std::polar(1.0, 1.0 + i);
                const auto cfg = i % 2 ? ProtocolConfig::bell() : ProtocolConfig::simplified();
                const auto e1 = post_encoding_ensemble(spec, cfg);
                const auto e2 = post_encoding_ensemble(phased, cfg);
                for (std::size_t j = 0; j < e1.members.size(); ++j) {
                    rec.check(detail::max_abs(e1.members[j].state.matrix() - e2.members[j].state.matrix()),
                              "member");
                }
            }
        });
        results.push_back(rec.finish());
    }
    {
        SuiteRecorder rec("dephased-travel-marginal", 1e-12);
        Rng rng = rng_for();
        detail::guarded(rec, [&] {
            for (int i = 0; i < 100; ++i) {
                const auto spec = sample_random_attack(1 + i % 3, rng());
                const auto ensemble = post_encoding_ensemble(spec, ProtocolConfig::simplified());
                const auto travel = partial_trace(ensemble.average(), ensemble.dims(), 0);
                rec.check(std::abs(travel(0, 1)), "off-diagonal");
            }
        });
        results.push_back(rec.finish());
    }
    {
        SuiteRecorder rec("travel-entropy-equals-H(d)", 1e-10);
        Rng rng = rng_for();
        detail::guarded(rec, [&] {
            const auto cfg = ProtocolConfig::simplified();
            for (int i = 0; i < 300; ++i) {
                const auto spec = sample_random_attack(1 + i % 3, rng());
                const auto ensemble = post_encoding_ensemble(spec, cfg);
                const double i0t = S(partial_trace(ensemble.average(), ensemble.dims(), 0));
                rec.check(std::abs(i0t - binary_entropy(detection_probability(spec, cfg))),
                          "attack " + std::to_string(i));
            }
        });
        results.push_back(rec.finish());
    }
    {
        SuiteRecorder rec("holevo-below-entropy", 1e-8);
        Rng rng = rng_for();
        detail::guarded(rec, [&] {
            for (int i = 0; i < 200; ++i) {
                const auto spec = sample_random_attack(1 + i % 3, rng());
                const auto cfg = ProtocolConfig::make(i % 2 ? Mode::bell : Mode::simplified,
                                                      i % 4 < 2 ? EncodingSet::iz : EncodingSet::paulis);
                const auto r = information_report(spec, cfg);
                rec.check(std::max(0.0, r.holevo_t - r.i0t), "holevo_t");
                rec.check(std::max(0.0, r.holevo_c - r.i0c), "holevo_c");
                rec.check(std::max(0.0, -r.holevo_t - 1e-9), "holevo_t >= 0");
                rec.check(std::max(0.0, -r.holevo_c - 1e-9), "holevo_c >= 0");
            }
        });
        results.push_back(rec.finish());
    }
    {
        SuiteRecorder rec("product-attack-composite-equals-travel", 1e-8);
        Rng rng = rng_for();
        detail::guarded(rec, [&] {
            for (int i = 0; i < 100; ++i) {
                const std::size_t a = 1 + i % 3;
                AttackSpec spec;
                spec.ancilla_dim = a;
                spec.chi = random_pure_state(a, rng);
                spec.unitary = kron(haar_unitary(2, rng), haar_unitary(a, rng));
                const auto r = information_report(spec, ProtocolConfig::simplified());
                rec.check(std::abs(r.i0c - r.i0t), "i0c - i0t");
                rec.check(r.i0a, "i0a");
            }
        });
        results.push_back(rec.finish());
    }
    {
        SuiteRecorder rec("entropy-inequalities", 1e-8);
        Rng rng = rng_for();
        detail::guarded(rec, [&] {
            for (int i = 0; i < 500; ++i) {
                const auto spec = sample_random_attack(1 + i % 3, rng());
                for (auto cfg : {ProtocolConfig::simplified(), ProtocolConfig::bell()}) {
                    const auto diag = entropy_inequality_check(information_report(spec, cfg));
                    rec.check(std::max(0.0, -diag.subadditivity_margin), "subadditivity");
                    rec.check(std::max(0.0, -diag.araki_lieb_margin), "araki-lieb");
                }
            }
        });
        results.push_back(rec.finish());
    }
    {
        SuiteRecorder rec("attack-file-round-trip", 1e-12);
        Rng rng = rng_for();
        detail::guarded(rec, [&] {
            for (int i = 0; i < 50; ++i) {
                const auto spec = sample_random_attack(1 + i % 4, rng());
                const auto once = parse_attack_json(serialize_attack_json(spec));
                const auto twice = parse_attack_json(serialize_attack_json(once));
                rec.check(std::max(detail::max_abs(twice.unitary - spec.unitary),
                                   detail::max_abs(twice.chi - spec.chi)),
                          "round trip");
            }
        });
        results.push_back(rec.finish());
    }
    {
        SuiteRecorder rec("frontier-point-consistency", 1e-8);
        detail::guarded(rec, [&] {
            SweepConfig cfg;
            cfg.d_grid = {0.0, 0.25, 0.5};
            cfg.restarts = 2;
            cfg.budget_per_restart = 400;
            cfg.seed = opts.seed;
            cfg.threads = 1;
            const auto family = general_family(2);
            const auto config = ProtocolConfig::simplified();
            const auto result = sweep(family, config, cfg);
            const auto again = sweep(family, config, cfg);
            for (std::size_t i = 0; i < result.points.size(); ++i) {
                const auto &p = result.points[i];
                if (!p.feasible) continue;
                const auto e = evaluate_attack(family.build(p.theta_best), config);
                rec.check(std::max(0.0, std::abs(e.d - p.d_target) - cfg.detection_tolerance), "d constraint");
                rec.check(std::abs(e.value(p.objective) - p.best_value()), "re-evaluation");
                rec.check(std::abs(p.best_i0t - binary_entropy(p.d_achieved)), "i0t = H(d)");
                rec.check_true(again.points[i].theta_best == p.theta_best, "determinism");
            }
            rec.check_true(!result.points.empty(), "points produced");
        });
        results.push_back(rec.finish());
    }
    return results;
}

}  // namespace pingpong
