// Copyright 2026 The gmc-interferometer Authors
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

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "gmc/core.hpp"

namespace gmc::dsl {

/// Default transmission of `H` when no t= is given (half-silvered mirror).
inline constexpr double kDefaultTransmission = 0.7071067811865476;

/// Accepted deviation of a literal source from unit norm. Sources inside this
/// band but outside kTolerance are renormalized on parse.
inline constexpr double kSourceNormTolerance = 1e-6;

inline constexpr std::size_t kMaxModes = 4096;

class ParseError : public std::runtime_error {
  public:
    ParseError(std::size_t line, std::size_t column, std::string message, std::string snippet);

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }
    const std::string &message() const { return message_; }
    const std::string &snippet() const { return snippet_; }

    /// "line:col: message" followed by the snippet and a caret line.
    std::string render(std::string_view source_name = "<input>") const;

  private:
    std::size_t line_;
    std::size_t column_;
    std::string message_;
    std::string snippet_;
};

struct ExperimentDoc {
    std::string name;
    Apparatus apparatus;

    bool operator==(const ExperimentDoc &) const = default;
};

/// Parses the line-oriented experiment format:
///
///   experiment NAME
///   modes N
///   source mode K | source amps (re,im) ... (re,im)
///   H A B [t=T] | R A B | X A B | PHASE M phi=F
///   OP A B (re,im) (re,im) (re,im) (re,im)
///   DETECT LABEL@M[,M...] ...
///
/// '#' starts a comment; blank lines are ignored; '\r\n' is accepted.
/// Every failure is reported as ParseError pointing at the first offending
/// token.
ExperimentDoc parse(std::string_view text);

/// Canonical text: one statement per line, single spaces, 17 significant
/// digits, detectors sorted by label. Throws std::invalid_argument for
/// custom devices the grammar cannot express (anything but 2 x 2).
std::string serialize(const ExperimentDoc &doc);

bool is_identifier(std::string_view s);

}  // namespace gmc::dsl
