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

// pingpong: command-line front end.
//
// Exit codes: 0 success, 1 internal error, 2 I/O or usage error,
// 3 validation failure.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pingpong/pingpong.hpp"

namespace {

using namespace pingpong;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInvalid = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fixed12(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12f", x == 0.0 ? 0.0 : x);
    return buf;
}

void print_report(std::ostream &out, const InfoReport &r) {
    out << "d = " << fixed12(r.d) << "\n"
        << "I0t = " << fixed12(r.i0t) << "\n"
        << "I0a = " << fixed12(r.i0a) << "\n"
        << "I0c = " << fixed12(r.i0c) << "\n"
        << "holevo_t = " << fixed12(r.holevo_t) << "\n"
        << "holevo_c = " << fixed12(r.holevo_c) << "\n";
    const auto diag = entropy_inequality_check(r);
    out << "subadditivity " << (diag.subadditivity_ok ? "ok" : "VIOLATED")
        << " (margin " << fixed12(diag.subadditivity_margin) << ")\n"
        << "araki-lieb " << (diag.araki_lieb_ok ? "ok" : "VIOLATED")
        << " (margin " << fixed12(diag.araki_lieb_margin) << ")\n";
    if (r.paper_claim_deviation) {
        const auto &dev = *r.paper_claim_deviation;
        out << "--- claimed vs computed: I0c ---\n"
            << "claimed  I0c = " << fixed12(dev.claimed) << "\n"
            << "computed I0c = " << fixed12(dev.computed) << "\n"
            << "delta        = " << fixed12(dev.delta) << "\n";
        if (std::abs(dev.delta) > 1e-9) {
            out << "WARNING: computed I0c differs from the claimed value "
                << format_g12(dev.claimed) << "\n";
        } else {
            out << "computed I0c matches the claimed value\n";
        }
    }
}

AttackSpec load_valid_attack(const std::string &path) {
    const AttackSpec spec = load_attack_file(path);  // IoError / parse_error
    const auto violations = validate_attack(spec);
    if (!violations.empty()) {
        throw Error(ErrorCode::invalid_state, "invalid attack: " + describe(violations));
    }
    return spec;
}

/// "start:stop:step" (inclusive of stop), a comma list, or "" for no points.
std::vector<double> parse_grid(const std::string &text) {
    std::vector<double> grid;
    if (text.empty()) return grid;
    auto number = [&](const std::string &cell) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(cell, &used);
        } catch (const std::exception &) {
            throw UsageError("bad grid value '" + cell + "'");
        }
        if (used != cell.size()) throw UsageError("bad grid value '" + cell + "'");
        return v;
    };
    if (text.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(text);
        std::string cell;
        while (std::getline(ss, cell, ':')) parts.push_back(cell);
        if (parts.size() != 3) throw UsageError("grid range must be start:stop:step");
        const double start = number(parts[0]), stop = number(parts[1]), step = number(parts[2]);
        if (!(step > 0.0) || stop < start) throw UsageError("grid range needs step > 0 and stop >= start");
        const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
        for (std::size_t i = 0; i < count; ++i) grid.push_back(start + static_cast<double>(i) * step);
    } else {
        std::stringstream ss(text);
        std::string cell;
        while (std::getline(ss, cell, ',')) grid.push_back(number(cell));
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] >= 0.0 && grid[i] <= 1.0)) throw UsageError("grid values must lie in [0, 1]");
        if (i > 0 && grid[i] < grid[i - 1]) throw UsageError("grid values must be sorted");
    }
    return grid;
}

std::vector<Objective> parse_objectives(const std::string &text) {
    if (text == "all") return {Objective::i0t, Objective::i0a, Objective::i0c};
    std::vector<Objective> out;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(parse_objective(cell));
    if (out.empty()) throw UsageError("no objective given");
    return out;
}

// ---------------------------------------------------------------------------

int cmd_demo(std::ostream &out) {
    const auto spec = builtin_attack(BuiltinAttack::paper_counterexample);
    const auto config = ProtocolConfig::simplified();
    const auto report = information_report(spec, config);
    out << "counterexample attack: chi = |+>, E = R (x) I, R = (1/sqrt2)[[1,-1],[1,1]]\n"
        << "mode = simplified, Bob sends |0>, encoding = {I, Z}\n";
    print_report(out, report);

    const bool d_ok = std::abs(report.d - 0.5) <= 1e-9;
    const bool t_ok = std::abs(report.i0t - 1.0) <= 1e-9;
    out << "check d = 1/2: " << (d_ok ? "reproduced" : "NOT reproduced") << "\n"
        << "check I0t = 1: " << (t_ok ? "reproduced" : "NOT reproduced") << "\n";
    return d_ok && t_ok ? kExitOk : kExitInternal;
}

int cmd_report(std::ostream &out, const std::string &path, Mode mode, EncodingSet enc, bool as_json) {
    const auto spec = load_valid_attack(path);
    const auto report = information_report(spec, ProtocolConfig::make(mode, enc));
    if (as_json) {
        auto j = report_to_json(report);
        const auto diag = entropy_inequality_check(report);
        j["subadditivity_ok"] = diag.subadditivity_ok;
        j["araki_lieb_ok"] = diag.araki_lieb_ok;
        j["subadditivity_margin"] = diag.subadditivity_margin;
        j["araki_lieb_margin"] = diag.araki_lieb_margin;
        j["mode"] = std::string(to_string(mode));
        j["encoding"] = std::string(to_string(enc));
        out << j.dump(2) << "\n";
    } else {
        out << "mode = " << to_string(mode) << ", encoding = " << to_string(enc) << "\n";
        print_report(out, report);
    }
    return kExitOk;
}

int cmd_simulate(std::ostream &out, const std::string &path, Mode mode, EncodingSet enc,
                 std::uint64_t rounds, std::uint64_t seed) {
    if (rounds < 1) throw UsageError("--rounds must be >= 1");
    const auto spec = load_valid_attack(path);
    const auto config = ProtocolConfig::make(mode, enc);
    const auto stats = monte_carlo(config, spec, rounds, seed);
    const double d = detection_probability(spec, config);
    const double n = static_cast<double>(stats.control_rounds);
    const double sigma = n > 0 ? std::sqrt(d * (1.0 - d) / n) : 0.0;
    const double diff = stats.empirical_d - d;
    double z = 0.0;
    if (sigma > 0.0) {
        z = diff / sigma;
    } else if (diff != 0.0) {
        z = std::copysign(INFINITY, diff);
    }

    out << "rounds = " << stats.rounds << "\n"
        << "control_rounds = " << stats.control_rounds << "\n"
        << "detections = " << stats.detections << "\n"
        << "message_rounds = " << stats.message_rounds << "\n"
        << "correct_decodes = " << stats.correct_decodes << "\n"
        << "undecodable = " << stats.undecodable << "\n"
        << "empirical_d = " << fixed12(stats.empirical_d) << "\n"
        << "analytic_d = " << fixed12(d) << "\n"
        << "sigma = " << fixed12(sigma) << "\n"
        << "z = " << (std::isfinite(z) ? fixed12(z) : std::string(z > 0 ? "inf" : "-inf")) << "\n"
        << "decode_accuracy = "
        << (stats.decode_accuracy ? fixed12(*stats.decode_accuracy) : std::string("n/a")) << "\n";
    return std::abs(z) <= 4.0 ? kExitOk : kExitInvalid;
}

struct SweepOptions {
    std::string grid;
    std::string objectives = "i0t";
    std::uint64_t seed = 0;
    std::string out_path;
    std::string family = "general";
    std::size_t ancilla_dim = 2;
    std::size_t restarts = 20;
    std::size_t budget = 2000;
    double tolerance = 1e-3;
    std::size_t threads = 0;
};

int cmd_sweep(std::ostream &out, const SweepOptions &o, Mode mode, EncodingSet enc) {
    SweepConfig cfg;
    cfg.d_grid = parse_grid(o.grid);
    cfg.objectives = parse_objectives(o.objectives);
    cfg.seed = o.seed;
    cfg.restarts = o.restarts;
    cfg.budget_per_restart = o.budget;
    cfg.detection_tolerance = o.tolerance;
    cfg.threads = o.threads;
    if (o.ancilla_dim < 1) throw UsageError("--ancilla-dim must be >= 1");
    const auto family = attack_family(o.family, o.ancilla_dim);

    const auto result = sweep(family, ProtocolConfig::make(mode, enc), cfg);
    const std::string csv = curve_csv(result.points);

    std::ostream *summary = &out;
    if (o.out_path.empty() || o.out_path == "-") {
        out << csv;
        summary = &std::cerr;
    } else {
        std::ofstream file(o.out_path, std::ios::binary);
        if (!file) throw IoError("cannot write '" + o.out_path + "'");
        file << csv;
        if (!file.flush()) throw IoError("cannot write '" + o.out_path + "'");
    }

    auto show = [](const std::optional<double> &v) { return v ? fixed12(*v) : std::string("n/a"); };
    *summary << "family = " << family.name << ", ancilla_dim = " << family.ancilla_dim
             << ", mode = " << to_string(mode) << ", encoding = " << to_string(enc) << "\n"
             << "values are the empirical max found over feasible attacks, not suprema\n";
    for (const auto &s : result.summary) {
        *summary << "d = " << format_g12(s.d_target) << ": I0t " << show(s.max_i0t) << ", I0a "
                 << show(s.max_i0a) << ", I0c " << show(s.max_i0c);
        if (!s.max_i0t) *summary << "  [no feasible attack found]";
        if (s.composite_exceeds_travel) *summary << "  [FLAG: I0c exceeds I0t]";
        if (s.ancilla_exceeds_travel) *summary << "  [FLAG: I0a exceeds I0t]";
        *summary << "\n";
    }
    *summary << "flagged grid points: " << result.flagged_count() << "\n";
    return kExitOk;
}

int cmd_verify(std::ostream &out, const std::string &fault) {
    VerifyOptions opts;
    if (fault == "entropy-natural-log") {
        opts.entropy = [](const DensityMatrix &rho) {
            double s = 0.0;
            for (double p : hermitian_eigenvalues(rho))
                if (p > 0.0) s -= p * std::log(p);
            return s;
        };
    } else if (!fault.empty()) {
        throw UsageError("unknown fault '" + fault + "'");
    }
    const auto results = run_invariant_suites(opts);
    std::size_t failed = 0;
    for (const auto &r : results) {
        out << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << "  cases=" << r.cases
            << "  max_dev=" << format_g12(r.max_deviation) << "  tol=" << format_g12(r.tolerance);
        if (!r.passed) {
            ++failed;
            out << "  (" << r.note << ")";
        }
        out << "\n";
    }
    out << results.size() << " suites, " << results.size() - failed << " passed, " << failed
        << " failed\n";
    return failed == 0 ? kExitOk : kExitInvalid;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Ping-pong protocol eavesdropping simulator"};
    app.require_subcommand(1);

    std::string mode_name = "simplified";
    std::string encoding_name = "iz";
    auto add_protocol_flags = [&](CLI::App *cmd) {
        cmd->add_option("--mode", mode_name, "protocol variant")
            ->check(CLI::IsMember({"simplified", "bell"}));
        cmd->add_option("--encoding", encoding_name, "encoding operation set")
            ->check(CLI::IsMember({"iz", "paulis"}));
    };

    auto *demo = app.add_subcommand("demo", "reproduce the counterexample attack");

    std::string attack_path;
    bool as_json = false;
    auto *report = app.add_subcommand("report", "information report for an attack file");
    report->add_option("attack", attack_path, "attack JSON file")->required();
    report->add_flag("--json", as_json, "machine-readable output");
    add_protocol_flags(report);

    std::uint64_t rounds = 100000;
    std::uint64_t seed = 0;
    auto *simulate = app.add_subcommand("simulate", "Monte Carlo protocol rounds");
    simulate->add_option("attack", attack_path, "attack JSON file")->required();
    simulate->add_option("--rounds", rounds, "number of rounds");
    simulate->add_option("--seed", seed, "random seed");
    add_protocol_flags(simulate);

    SweepOptions sweep_opts;
    auto *sweep_cmd = app.add_subcommand("sweep", "search the information/detection frontier");
    sweep_cmd->add_option("--grid", sweep_opts.grid, "start:stop:step or comma list")->required();
    sweep_cmd->add_option("--objective", sweep_opts.objectives, "i0t, i0a, i0c, a comma list, or all");
    sweep_cmd->add_option("--seed", sweep_opts.seed, "master seed");
    sweep_cmd->add_option("--out", sweep_opts.out_path, "CSV output path (default stdout)");
    sweep_cmd->add_option("--family", sweep_opts.family, "attack family")
        ->check(CLI::IsMember({"general", "product"}));
    sweep_cmd->add_option("--ancilla-dim", sweep_opts.ancilla_dim, "ancilla dimension");
    sweep_cmd->add_option("--restarts", sweep_opts.restarts, "random restarts per point");
    sweep_cmd->add_option("--budget", sweep_opts.budget, "objective evaluations per restart");
    sweep_cmd->add_option("--tolerance", sweep_opts.tolerance, "detection tolerance");
    sweep_cmd->add_option("--threads", sweep_opts.threads, "worker threads (0 = all cores)");
    add_protocol_flags(sweep_cmd);

    std::string fault;
    auto *verify = app.add_subcommand("verify", "run the invariant suites");
    verify->add_option("--inject-fault", fault, "deliberately break a routine (entropy-natural-log)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        const Mode mode = parse_mode(mode_name);
        const EncodingSet enc = parse_encoding_set(encoding_name);
        if (*demo) return cmd_demo(std::cout);
        if (*report) return cmd_report(std::cout, attack_path, mode, enc, as_json);
        if (*simulate) return cmd_simulate(std::cout, attack_path, mode, enc, rounds, seed);
        if (*sweep_cmd) return cmd_sweep(std::cout, sweep_opts, mode, enc);
        if (*verify) return cmd_verify(std::cout, fault);
    } catch (const UsageError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const IoError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.code()) {
            case ErrorCode::parse_error:
            case ErrorCode::invalid_state:
            case ErrorCode::not_unitary:
            case ErrorCode::dimension_mismatch:
                return kExitInvalid;
            case ErrorCode::unknown_name:
            case ErrorCode::out_of_range:
                return kExitUsage;
            default:
                return kExitInternal;
        }
    } catch (const std::exception &e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitInternal;
}
