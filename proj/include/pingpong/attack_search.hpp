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

// Numerical search for the information-versus-detection frontier.
//
// For a target detection probability d*, we look for attack parameters
// theta maximising one of i0t / i0a / i0c subject to |d(theta) - d*| <= tol.
// The search is derivative-free (Nelder-Mead over theta, restarted from
// seeded random points) on the penalised objective
//     f(theta) - w * max(0, |d(theta) - d*| - tol)^2.
// The weight w starts at the configured value and is raised tenfold after
// every stage that ends without a feasible point. Results are the best
// feasible values found, i.e. lower bounds on the true frontier.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <future>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "pingpong/attack.hpp"
#include "pingpong/info_metrics.hpp"
#include "pingpong/protocol.hpp"
#include "pingpong/protocol_config.hpp"
#include "pingpong/quantum_core.hpp"

namespace pingpong {

// ---------------------------------------------------------------------------
// Unitary parameterisation and random attacks

/// Number of real parameters of parameterize_unitary for dimension `dim`.
inline constexpr std::size_t unitary_param_count(std::size_t dim) { return dim * dim; }

/// U = exp(iH(theta)). The first `dim` entries of theta are the diagonal of
/// H; the rest are (re, im) pairs for the upper triangle in row-major order.
/// theta = 0 gives the identity.
inline UnitaryOperator parameterize_unitary(std::span<const double> theta, std::size_t dim) {
    if (dim < 1 || theta.size() != unitary_param_count(dim)) {
        throw Error(ErrorCode::dimension_mismatch,
                    "expected " + std::to_string(unitary_param_count(dim)) + " parameters, got " +
                        std::to_string(theta.size()));
    }
    const auto n = static_cast<Eigen::Index>(dim);
    Matrix h = Matrix::Zero(n, n);
    std::size_t k = 0;
    for (Eigen::Index i = 0; i < n; ++i) h(i, i) = theta[k++];
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            h(i, j) = Complex(theta[k], theta[k + 1]);
            h(j, i) = std::conj(h(i, j));
            k += 2;
        }
    }
    const auto eig = hermitian_eigensystem(h);
    Vector phases(n);
    for (Eigen::Index i = 0; i < n; ++i) phases(i) = std::polar(1.0, eig.values(i));
    return UnitaryOperator(eig.vectors * phases.asDiagonal() * eig.vectors.adjoint());
}

namespace detail {

inline double standard_normal(Rng &rng) {
    // Box-Muller; one variate per call keeps the stream layout simple.
    double u1 = uniform01(rng);
    while (u1 <= 0.0) u1 = uniform01(rng);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

inline Complex standard_complex_normal(Rng &rng) {
    const double re = standard_normal(rng);
    const double im = standard_normal(rng);
    return {re * std::sqrt(0.5), im * std::sqrt(0.5)};
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

}  // namespace detail

/// Mixes `salt` into `seed` to give independent per-task streams.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
    return detail::splitmix64(detail::splitmix64(seed) ^ (salt * 0xD1B54A32D192ED03ull));
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases
/// of R's diagonal moved into Q.
inline Matrix haar_unitary(std::size_t dim, Rng &rng) {
    const auto n = static_cast<Eigen::Index>(dim);
    Matrix g(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) g(i, j) = detail::standard_complex_normal(rng);
    const Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < n; ++j) {
        const double mag = std::abs(r(j, j));
        if (mag > 0.0) q.col(j) *= r(j, j) / mag;
    }
    return q;
}

/// Uniformly random pure state (normalised complex Gaussian vector).
inline Vector random_pure_state(std::size_t dim, Rng &rng) {
    Vector v(static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = detail::standard_complex_normal(rng);
    return v / v.norm();
}

inline AttackSpec sample_random_attack(std::size_t ancilla_dim, std::uint64_t seed) {
    if (ancilla_dim < 1) {
        throw Error(ErrorCode::out_of_range, "ancilla_dim must be >= 1");
    }
    Rng rng(seed);
    AttackSpec spec;
    spec.ancilla_dim = ancilla_dim;
    spec.unitary = haar_unitary(2 * ancilla_dim, rng);
    spec.chi = random_pure_state(ancilla_dim, rng);
    return spec;
}

// ---------------------------------------------------------------------------
// Attack families

struct AttackFamily {
    std::string name;
    std::size_t ancilla_dim = 0;
    std::size_t param_count = 0;
    std::function<AttackSpec(std::span<const double>)> build;
};

/// Any unitary on travel (x) ancilla with the ancilla starting in |0>. Fixing
/// chi loses nothing: a different |chi> = W|0> is absorbed as E (I (x) W).
inline AttackFamily general_family(std::size_t ancilla_dim) {
    const std::size_t dim = 2 * ancilla_dim;
    return {"general", ancilla_dim, unitary_param_count(dim),
            [ancilla_dim, dim](std::span<const double> theta) {
                AttackSpec spec;
                spec.ancilla_dim = ancilla_dim;
                spec.chi = StateVector::basis(ancilla_dim, 0).amplitudes();
                spec.unitary = parameterize_unitary(theta, dim).matrix();
                return spec;
            }};
}

/// E = U_travel (x) U_ancilla with the ancilla starting in |0>.
inline AttackFamily product_family(std::size_t ancilla_dim) {
    const std::size_t pt = unitary_param_count(2);
    const std::size_t pa = unitary_param_count(ancilla_dim);
    return {"product", ancilla_dim, pt + pa,
            [ancilla_dim, pt, pa](std::span<const double> theta) {
                AttackSpec spec;
                spec.ancilla_dim = ancilla_dim;
                spec.chi = StateVector::basis(ancilla_dim, 0).amplitudes();
                spec.unitary = kron(parameterize_unitary(theta.subspan(0, pt), 2).matrix(),
                                    parameterize_unitary(theta.subspan(pt, pa), ancilla_dim).matrix());
                return spec;
            }};
}

inline AttackFamily attack_family(std::string_view name, std::size_t ancilla_dim) {
    if (name == "general") return general_family(ancilla_dim);
    if (name == "product") return product_family(ancilla_dim);
    throw Error(ErrorCode::unknown_name, "attack family '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Nelder-Mead

struct NelderMeadResult {
    std::vector<double> x;
    double value = std::numeric_limits<double>::infinity();
    std::size_t evaluations = 0;
};

/// Minimises f from x0 with an axis-aligned initial simplex of edge `step`.
/// Every evaluation goes through `f`, so callers can observe all visited
/// points. Parameters are clamped to [lower, upper]. When the simplex
/// collapses before the budget is spent, it is rebuilt around the best point
/// with a smaller step.
inline NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)> &f,
                                    std::vector<double> x0, double step, std::size_t max_evals,
                                    double lower = -std::numeric_limits<double>::infinity(),
                                    double upper = std::numeric_limits<double>::infinity(),
                                    double min_step = 1e-9) {
    const std::size_t n = x0.size();
    NelderMeadResult best;
    if (n == 0 || max_evals == 0) return best;

    auto clamp_point = [&](std::vector<double> &x) {
        for (double &v : x) v = std::clamp(v, lower, upper);
    };
    auto eval = [&](std::vector<double> &x) {
        clamp_point(x);
        const double v = f(x);
        ++best.evaluations;
        if (v < best.value) {
            best.value = v;
            best.x = x;
        }
        return v;
    };

    clamp_point(x0);
    std::vector<double> centre = x0;
    while (best.evaluations < max_evals && step >= min_step) {
        std::vector<std::vector<double>> simplex(n + 1, centre);
        std::vector<double> values(n + 1);
        for (std::size_t i = 1; i <= n; ++i) {
            simplex[i][i - 1] += (simplex[i][i - 1] + step > upper) ? -step : step;
        }
        for (std::size_t i = 0; i <= n && best.evaluations < max_evals; ++i) values[i] = eval(simplex[i]);
        if (best.evaluations >= max_evals) break;

        std::vector<std::size_t> order(n + 1);
        while (best.evaluations < max_evals) {
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::sort(order.begin(), order.end(),
                      [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
            const std::size_t lo = order.front(), hi = order.back(), second = order[n - 1];

            double spread = 0.0;
            for (std::size_t i = 0; i <= n; ++i)
                for (std::size_t k = 0; k < n; ++k)
                    spread = std::max(spread, std::abs(simplex[i][k] - simplex[lo][k]));
            if (spread < min_step) break;

            std::vector<double> centroid(n, 0.0);
            for (std::size_t i = 0; i <= n; ++i) {
                if (i == hi) continue;
                for (std::size_t k = 0; k < n; ++k) centroid[k] += simplex[i][k] / static_cast<double>(n);
            }
            auto along = [&](double t) {
                std::vector<double> p(n);
                for (std::size_t k = 0; k < n; ++k) p[k] = centroid[k] + t * (simplex[hi][k] - centroid[k]);
                return p;
            };

            auto reflected = along(-1.0);
            const double fr = eval(reflected);
            if (fr < values[lo]) {
                if (best.evaluations >= max_evals) break;
                auto expanded = along(-2.0);
                const double fe = eval(expanded);
                if (fe < fr) {
                    simplex[hi] = std::move(expanded);
                    values[hi] = fe;
                } else {
                    simplex[hi] = std::move(reflected);
                    values[hi] = fr;
                }
            } else if (fr < values[second]) {
                simplex[hi] = std::move(reflected);
                values[hi] = fr;
            } else {
                if (best.evaluations >= max_evals) break;
                const bool outside = fr < values[hi];
                auto contracted = along(outside ? -0.5 : 0.5);
                const double fc = eval(contracted);
                if (fc < (outside ? fr : values[hi])) {
                    simplex[hi] = std::move(contracted);
                    values[hi] = fc;
                } else {
                    for (std::size_t i = 0; i <= n && best.evaluations < max_evals; ++i) {
                        if (i == lo) continue;
                        for (std::size_t k = 0; k < n; ++k)
                            simplex[i][k] = simplex[lo][k] + 0.5 * (simplex[i][k] - simplex[lo][k]);
                        values[i] = eval(simplex[i]);
                    }
                }
            }
        }
        centre = best.x;
        step *= 0.25;
    }
    return best;
}

// ---------------------------------------------------------------------------
// Frontier search

enum class Objective { i0t, i0a, i0c };

inline std::string_view to_string(Objective o) {
    switch (o) {
        case Objective::i0t: return "i0t";
        case Objective::i0a: return "i0a";
        case Objective::i0c: return "i0c";
    }
    return "?";
}

inline Objective parse_objective(std::string_view name) {
    if (name == "i0t") return Objective::i0t;
    if (name == "i0a") return Objective::i0a;
    if (name == "i0c") return Objective::i0c;
    throw Error(ErrorCode::unknown_name, "objective '" + std::string(name) + "'");
}

struct SweepConfig {
    std::vector<double> d_grid;
    double detection_tolerance = 1e-3;
    std::size_t restarts = 20;
    std::size_t budget_per_restart = 2000;
    std::uint64_t seed = 0;
    std::vector<Objective> objectives{Objective::i0t};
    double penalty_weight = 100.0;
    std::size_t threads = 0;  // 0: hardware concurrency
};

/// d and the three entropies of one attack, without the Holevo terms.
struct AttackEvaluation {
    double d = 0.0;
    double i0t = 0.0;
    double i0a = 0.0;
    double i0c = 0.0;

    double value(Objective o) const {
        switch (o) {
            case Objective::i0t: return i0t;
            case Objective::i0a: return i0a;
            case Objective::i0c: return i0c;
        }
        return 0.0;
    }
};

inline AttackEvaluation evaluate_attack(const AttackSpec &spec, const ProtocolConfig &config) {
    const EncodingEnsemble ensemble = post_encoding_ensemble(spec, config);
    const DensityMatrix rho_c = ensemble.average();
    const std::size_t dims[] = {2, spec.ancilla_dim};
    AttackEvaluation e;
    e.d = detection_probability(spec, config);
    e.i0c = von_neumann_entropy(rho_c);
    e.i0t = von_neumann_entropy(partial_trace(rho_c, dims, 0));
    e.i0a = von_neumann_entropy(partial_trace(rho_c, dims, 1));
    return e;
}

struct CurvePoint {
    Objective objective = Objective::i0t;
    double d_target = 0.0;
    double d_achieved = 0.0;
    double best_i0t = 0.0;
    double best_i0a = 0.0;
    double best_i0c = 0.0;
    std::vector<double> theta_best;
    std::size_t evaluations = 0;
    /// False when no point within the detection tolerance was found; the
    /// remaining fields then describe the closest point in d.
    bool feasible = false;

    double best_value() const {
        switch (objective) {
            case Objective::i0t: return best_i0t;
            case Objective::i0a: return best_i0a;
            case Objective::i0c: return best_i0c;
        }
        return 0.0;
    }
};

inline CurvePoint maximize_information(const AttackFamily &family, const ProtocolConfig &config,
                                       Objective objective, double d_target,
                                       const SweepConfig &cfg) {
    if (!(d_target >= 0.0 && d_target <= 1.0)) {
        throw Error(ErrorCode::out_of_range, "d_target " + detail::format_double(d_target));
    }
    const double pi = std::numbers::pi;
    const double tol = cfg.detection_tolerance;

    CurvePoint point;
    point.objective = objective;
    point.d_target = d_target;

    double best_feasible = -std::numeric_limits<double>::infinity();
    double closest_gap = std::numeric_limits<double>::infinity();
    auto consider = [&](std::span<const double> theta, const AttackEvaluation &e) {
        const double gap = std::abs(e.d - d_target);
        const bool feasible = gap <= tol;
        const bool better = feasible ? (!point.feasible || e.value(objective) > best_feasible)
                                     : (!point.feasible && gap < closest_gap);
        if (!better) return;
        if (feasible) best_feasible = e.value(objective);
        closest_gap = std::min(closest_gap, gap);
        point.feasible = feasible;
        point.d_achieved = e.d;
        point.best_i0t = e.i0t;
        point.best_i0a = e.i0a;
        point.best_i0c = e.i0c;
        point.theta_best.assign(theta.begin(), theta.end());
    };

    for (std::size_t restart = 0; restart < cfg.restarts; ++restart) {
        Rng rng(derive_seed(cfg.seed, restart));
        std::vector<double> x(family.param_count);
        for (double &v : x) v = -pi + 2.0 * pi * detail::uniform01(rng);

        double weight = cfg.penalty_weight;
        std::size_t used = 0;
        bool restart_feasible = false;
        double step = 0.5;
        while (used < cfg.budget_per_restart) {
            const std::size_t stage_budget =
                std::min(cfg.budget_per_restart - used,
                         std::max<std::size_t>(cfg.budget_per_restart / 4, 4 * family.param_count));
            auto penalised = [&](std::span<const double> theta) {
                const AttackEvaluation e = evaluate_attack(family.build(theta), config);
                consider(theta, e);
                const double gap = std::abs(e.d - d_target);
                if (gap <= tol) restart_feasible = true;
                const double excess = std::max(0.0, gap - tol);
                return -(e.value(objective) - weight * excess * excess);
            };
            const auto nm = nelder_mead(penalised, x, step, stage_budget, -pi, pi);
            used += nm.evaluations;
            point.evaluations += nm.evaluations;
            if (!nm.x.empty()) x = nm.x;
            if (!restart_feasible) {
                weight *= 10.0;
            } else {
                step = std::max(step * 0.5, 1e-3);
            }
            if (nm.evaluations == 0) break;
        }
    }
    return point;
}

struct GridSummary {
    double d_target = 0.0;
    std::optional<double> max_i0t;  // empirical max found over feasible points
    std::optional<double> max_i0a;
    std::optional<double> max_i0c;
    bool composite_exceeds_travel = false;
    bool ancilla_exceeds_travel = false;
};

struct SweepResult {
    std::vector<CurvePoint> points;  // sorted by d_target, then objective
    std::vector<GridSummary> summary;

    std::size_t flagged_count() const {
        return static_cast<std::size_t>(std::count_if(summary.begin(), summary.end(), [](const auto &s) {
            return s.composite_exceeds_travel || s.ancilla_exceeds_travel;
        }));
    }
};

/// Margin by which ancilla or composite information must exceed travel
/// information before a grid point is flagged.
inline constexpr double kExceedanceMargin = 0.01;

inline SweepResult sweep(const AttackFamily &family, const ProtocolConfig &config,
                         const SweepConfig &cfg) {
    for (std::size_t i = 0; i < cfg.d_grid.size(); ++i) {
        const double d = cfg.d_grid[i];
        if (!(d >= 0.0 && d <= 1.0)) {
            throw Error(ErrorCode::out_of_range, "grid value " + detail::format_double(d));
        }
        if (i > 0 && d < cfg.d_grid[i - 1]) {
            throw Error(ErrorCode::out_of_range, "grid must be sorted");
        }
    }

    struct Task {
        std::size_t grid_index;
        Objective objective;
    };
    std::vector<Task> tasks;
    for (std::size_t g = 0; g < cfg.d_grid.size(); ++g)
        for (auto o : cfg.objectives) tasks.push_back({g, o});

    auto run = [&](const Task &t) {
        SweepConfig local = cfg;
        local.seed = derive_seed(cfg.seed, (t.grid_index << 8) | static_cast<std::uint64_t>(t.objective));
        return maximize_information(family, config, t.objective, cfg.d_grid[t.grid_index], local);
    };

    std::vector<CurvePoint> points(tasks.size());
    const std::size_t threads =
        cfg.threads != 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    if (threads <= 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i) points[i] = run(tasks[i]);
    } else {
        for (std::size_t begin = 0; begin < tasks.size(); begin += threads) {
            const std::size_t end = std::min(tasks.size(), begin + threads);
            std::vector<std::future<CurvePoint>> futures;
            for (std::size_t i = begin; i < end; ++i)
                futures.push_back(std::async(std::launch::async, run, tasks[i]));
            for (std::size_t i = begin; i < end; ++i) points[i] = futures[i - begin].get();
        }
    }

    std::stable_sort(points.begin(), points.end(), [](const CurvePoint &a, const CurvePoint &b) {
        if (a.d_target != b.d_target) return a.d_target < b.d_target;
        return a.objective < b.objective;
    });

    SweepResult result;
    result.points = points;
    for (std::size_t g = 0; g < cfg.d_grid.size(); ++g) {
        GridSummary s;
        s.d_target = cfg.d_grid[g];
        auto bump = [](std::optional<double> &slot, double v) {
            slot = slot ? std::max(*slot, v) : v;
        };
        for (const auto &p : points) {
            if (p.d_target != s.d_target || !p.feasible) continue;
            bump(s.max_i0t, p.best_i0t);
            bump(s.max_i0a, p.best_i0a);
            bump(s.max_i0c, p.best_i0c);
        }
        if (s.max_i0t) {
            s.composite_exceeds_travel = *s.max_i0c > *s.max_i0t + kExceedanceMargin;
            s.ancilla_exceeds_travel = *s.max_i0a > *s.max_i0t + kExceedanceMargin;
        }
        if (result.summary.empty() || result.summary.back().d_target != s.d_target) {
            result.summary.push_back(s);
        }
    }
    return result;
}

}  // namespace pingpong
