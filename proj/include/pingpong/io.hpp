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

// File formats.
//
// Attack file (JSON). Complex numbers are [re, im] pairs:
//   {
//     "ancilla_dim": 2,
//     "chi": [[0.7071, 0], [0.7071, 0]],
//     "unitary": [[[0.7071, 0], [0, 0], [-0.7071, 0], [0, 0]], ...]   // row-major
//   }
//
// Curve CSV:
//   d_target,d_achieved,objective,best_value,evaluations
// Reals carry 12 significant digits; best_value is "nan" for a grid point
// where no feasible attack was found.

#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pingpong/attack.hpp"
#include "pingpong/attack_search.hpp"
#include "pingpong/info_metrics.hpp"

namespace pingpong {

using json = nlohmann::json;

namespace detail {

inline Complex parse_complex(const json &j, const std::string &field) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw Error(ErrorCode::parse_error,
                    "field '" + field + "': expected [re, im] pair, got " + j.dump());
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

inline json complex_to_json(Complex c) { return json::array({c.real(), c.imag()}); }

}  // namespace detail

/// Parses the attack document. Structural problems raise parse_error naming
/// the offending line or field; the numeric invariants (normalisation,
/// unitarity) are left to validate_attack.
inline AttackSpec parse_attack_json(const std::string &text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error &e) {
        throw Error(ErrorCode::parse_error, e.what());
    }
    if (!doc.is_object()) {
        throw Error(ErrorCode::parse_error, "top level must be an object");
    }
    for (const char *key : {"ancilla_dim", "chi", "unitary"}) {
        if (!doc.contains(key)) {
            throw Error(ErrorCode::parse_error, std::string("missing field '") + key + "'");
        }
    }
    AttackSpec spec;
    const json &dim = doc["ancilla_dim"];
    if (!dim.is_number_integer() || dim.get<long long>() < 1) {
        throw Error(ErrorCode::parse_error, "field 'ancilla_dim': expected integer >= 1");
    }
    spec.ancilla_dim = dim.get<std::size_t>();

    const json &chi = doc["chi"];
    if (!chi.is_array()) {
        throw Error(ErrorCode::parse_error, "field 'chi': expected array");
    }
    spec.chi = Vector(static_cast<Eigen::Index>(chi.size()));
    for (std::size_t i = 0; i < chi.size(); ++i) {
        spec.chi(static_cast<Eigen::Index>(i)) =
            detail::parse_complex(chi[i], "chi[" + std::to_string(i) + "]");
    }

    const json &u = doc["unitary"];
    if (!u.is_array() || u.empty()) {
        throw Error(ErrorCode::parse_error, "field 'unitary': expected non-empty array of rows");
    }
    const std::size_t cols = u[0].is_array() ? u[0].size() : 0;
    spec.unitary = Matrix(static_cast<Eigen::Index>(u.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < u.size(); ++r) {
        if (!u[r].is_array() || u[r].size() != cols) {
            throw Error(ErrorCode::parse_error, "field 'unitary[" + std::to_string(r) +
                                                    "]': expected row of " + std::to_string(cols) +
                                                    " entries");
        }
        for (std::size_t c = 0; c < cols; ++c) {
            spec.unitary(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                detail::parse_complex(u[r][c], "unitary[" + std::to_string(r) + "][" +
                                                   std::to_string(c) + "]");
        }
    }
    return spec;
}

inline std::string serialize_attack_json(const AttackSpec &spec) {
    json doc;
    doc["ancilla_dim"] = spec.ancilla_dim;
    doc["chi"] = json::array();
    for (Eigen::Index i = 0; i < spec.chi.size(); ++i) doc["chi"].push_back(detail::complex_to_json(spec.chi(i)));
    doc["unitary"] = json::array();
    for (Eigen::Index r = 0; r < spec.unitary.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < spec.unitary.cols(); ++c)
            row.push_back(detail::complex_to_json(spec.unitary(r, c)));
        doc["unitary"].push_back(std::move(row));
    }
    return doc.dump(2) + "\n";
}

/// Thrown when a file cannot be read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::string read_text_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline AttackSpec load_attack_file(const std::string &path) {
    return parse_attack_json(read_text_file(path));
}

// ---------------------------------------------------------------------------
// Curve CSV

inline constexpr std::string_view kCurveCsvHeader =
    "d_target,d_achieved,objective,best_value,evaluations";

/// %.12g without locale dependence.
inline std::string format_g12(double x) {
    if (std::isnan(x)) return "nan";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

inline std::string curve_csv(const std::vector<CurvePoint> &points) {
    std::string out(kCurveCsvHeader);
    out += '\n';
    for (const auto &p : points) {
        out += format_g12(p.d_target) + ',' + format_g12(p.d_achieved) + ',' +
               std::string(to_string(p.objective)) + ',' +
               format_g12(p.feasible ? p.best_value() : std::nan("")) + ',' +
               std::to_string(p.evaluations) + '\n';
    }
    return out;
}

struct CurveCsvRow {
    double d_target;
    double d_achieved;
    Objective objective;
    double best_value;
    std::size_t evaluations;
};

inline double parse_csv_double(const std::string &cell, std::size_t line) {
    if (cell == "nan") return std::nan("");
    double v = 0.0;
    const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
        throw Error(ErrorCode::parse_error,
                    "line " + std::to_string(line) + ": bad number '" + cell + "'");
    }
    return v;
}

inline std::vector<CurveCsvRow> parse_curve_csv(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kCurveCsvHeader) {
        throw Error(ErrorCode::parse_error, "line 1: missing curve CSV header");
    }
    std::vector<CurveCsvRow> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (cells.size() != 5) {
            throw Error(ErrorCode::parse_error,
                        "line " + std::to_string(lineno) + ": expected 5 columns");
        }
        rows.push_back({parse_csv_double(cells[0], lineno), parse_csv_double(cells[1], lineno),
                        parse_objective(cells[2]), parse_csv_double(cells[3], lineno),
                        static_cast<std::size_t>(std::stoull(cells[4]))});
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Report JSON

inline json report_to_json(const InfoReport &r) {
    json j;
    j["d"] = r.d;
    j["i0t"] = r.i0t;
    j["i0a"] = r.i0a;
    j["i0c"] = r.i0c;
    j["holevo_t"] = r.holevo_t;
    j["holevo_c"] = r.holevo_c;
    if (r.paper_claim_deviation) {
        j["paper_claim_deviation"] = {{"claimed", r.paper_claim_deviation->claimed},
                                      {"computed", r.paper_claim_deviation->computed},
                                      {"delta", r.paper_claim_deviation->delta}};
    } else {
        j["paper_claim_deviation"] = nullptr;
    }
    return j;
}

}  // namespace pingpong
