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

#include <stdexcept>
#include <string>
#include <string_view>

namespace pingpong {

enum class ErrorCode {
    kind_mismatch,
    dimension_mismatch,
    invalid_index,
    invalid_state,
    not_unitary,
    not_positive_semidefinite,
    not_square,
    not_orthonormal,
    out_of_range,
    unknown_name,
    parse_error,
};

inline std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::kind_mismatch: return "kind mismatch";
        case ErrorCode::dimension_mismatch: return "dimension mismatch";
        case ErrorCode::invalid_index: return "invalid index";
        case ErrorCode::invalid_state: return "invalid state";
        case ErrorCode::not_unitary: return "not unitary";
        case ErrorCode::not_positive_semidefinite: return "not positive semidefinite";
        case ErrorCode::not_square: return "not square";
        case ErrorCode::not_orthonormal: return "not orthonormal";
        case ErrorCode::out_of_range: return "out of range";
        case ErrorCode::unknown_name: return "unknown name";
        case ErrorCode::parse_error: return "parse error";
    }
    return "unknown error";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it onto a stable exit status.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string &what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace pingpong
