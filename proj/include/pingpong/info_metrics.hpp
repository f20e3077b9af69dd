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

// Information quantities Eve could extract after Alice's encoding.
//
// I0 of a state is its von Neumann entropy. Three states are of interest,
// all derived from the encoding-averaged travel (x) ancilla state rho_c:
//   i0t = S(Tr_ancilla rho_c), i0a = S(Tr_travel rho_c), i0c = S(rho_c).
// Holevo quantities of the same ensemble are reported alongside.
//
// With Bob sending |0> and encodings {I, sigma_z}, averaging over sigma_z
// removes every off-diagonal element of the travel marginal, which leaves
// diag(1 - d, d). Hence i0t = H(d) exactly for every attack in that setting.

#pragma once

#include <cmath>
#include <optional>
#include <string_view>

#include "pingpong/attack.hpp"
#include "pingpong/protocol_config.hpp"
#include "pingpong/quantum_core.hpp"

namespace pingpong {

enum class Subsystem { travel, ancilla, composite };

inline std::string_view to_string(Subsystem s) {
    switch (s) {
        case Subsystem::travel: return "travel";
        case Subsystem::ancilla: return "ancilla";
        case Subsystem::composite: return "composite";
    }
    return "?";
}

/// H(x) in bits.
inline double binary_entropy(double x) {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw Error(ErrorCode::out_of_range, "binary entropy argument " + detail::format_double(x));
    }
    if (x == 0.0 || x == 1.0) return 0.0;
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

struct ClaimDeviation {
    double claimed;
    double computed;
    double delta;  // computed - claimed
};

struct InfoReport {
    double d = 0.0;
    double i0t = 0.0;
    double i0a = 0.0;
    double i0c = 0.0;
    double holevo_t = 0.0;
    double holevo_c = 0.0;
    std::size_t ancilla_dim = 0;
    std::optional<ClaimDeviation> paper_claim_deviation;
};

/// The composite-entropy value asserted for the canonical counterexample
/// (Bob sends |0>, the built-in paper_counterexample attack).
inline constexpr double kClaimedCounterexampleI0c = 2.0;

namespace detail {

inline DensityMatrix reduce(const DensityMatrix &rho, std::size_t ancilla_dim, Subsystem sub) {
    if (sub == Subsystem::composite) return rho;
    const std::size_t dims[] = {2, ancilla_dim};
    return partial_trace(rho, dims, sub == Subsystem::travel ? 0 : 1);
}

inline bool is_canonical_counterexample(const AttackSpec &spec, const ProtocolConfig &config) {
    if (config.mode() != Mode::simplified) return false;
    if (detail::max_abs(config.bob_initial().amplitudes() -
                        StateVector::basis(2, 0).amplitudes()) > 1e-12) {
        return false;
    }
    return same_attack(spec, builtin_attack(BuiltinAttack::paper_counterexample));
}

}  // namespace detail

/// chi = S(sum p_j rho_j) - sum p_j S(rho_j), members reduced to `sub`.
inline double holevo_bound(const EncodingEnsemble &ensemble, Subsystem sub) {
    const DensityMatrix avg = detail::reduce(ensemble.average(), ensemble.ancilla_dim, sub);
    double chi = von_neumann_entropy(avg);
    for (const auto &m : ensemble.members) {
        chi -= m.probability * von_neumann_entropy(detail::reduce(m.state, ensemble.ancilla_dim, sub));
    }
    return chi;
}

/// Entropies of an already assembled ensemble; d is left to the caller.
inline InfoReport information_report(const EncodingEnsemble &ensemble) {
    const DensityMatrix rho_c = ensemble.average();
    InfoReport report;
    report.ancilla_dim = ensemble.ancilla_dim;
    report.i0c = von_neumann_entropy(rho_c);
    report.i0t = von_neumann_entropy(detail::reduce(rho_c, ensemble.ancilla_dim, Subsystem::travel));
    report.i0a = von_neumann_entropy(detail::reduce(rho_c, ensemble.ancilla_dim, Subsystem::ancilla));
    report.holevo_t = holevo_bound(ensemble, Subsystem::travel);
    report.holevo_c = holevo_bound(ensemble, Subsystem::composite);
    return report;
}

inline InfoReport information_report(const AttackSpec &spec, const ProtocolConfig &config) {
    InfoReport report = information_report(post_encoding_ensemble(spec, config));
    report.d = detection_probability(spec, config);
    if (detail::is_canonical_counterexample(spec, config)) {
        report.paper_claim_deviation = ClaimDeviation{
            kClaimedCounterexampleI0c, report.i0c, report.i0c - kClaimedCounterexampleI0c};
    }
    return report;
}

struct InequalityDiagnostics {
    bool subadditivity_ok;
    bool araki_lieb_ok;
    double subadditivity_margin;  // i0t + i0a - i0c
    double araki_lieb_margin;     // i0c - |i0t - i0a|
};

inline constexpr double kInequalityTolerance = 1e-8;

/// Subadditivity S(TA) <= S(T) + S(A) and Araki-Lieb S(TA) >= |S(T) - S(A)|.
inline InequalityDiagnostics entropy_inequality_check(const InfoReport &report) {
    InequalityDiagnostics out;
    out.subadditivity_margin = report.i0t + report.i0a - report.i0c;
    out.araki_lieb_margin = report.i0c - std::abs(report.i0t - report.i0a);
    out.subadditivity_ok = out.subadditivity_margin >= -kInequalityTolerance;
    out.araki_lieb_ok = out.araki_lieb_margin >= -kInequalityTolerance;
    return out;
}

}  // namespace pingpong
