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
#include <cstdint>
#include <iosfwd>
#include <string>

namespace gmc::cli {

enum class Engine { Analytic, Sample };
enum class Format { Json, Csv };

/// Exit codes. Pass/fail is reported only through these.
inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;  // parse error, or a failed comparison
inline constexpr int kBadConfig = 2;

struct RunConfig {
    std::string builtin;  // exactly one of builtin / file
    std::string file;
    Engine engine = Engine::Analytic;
    std::uint64_t trials = 100000;
    std::uint64_t seed = 1;
    Format format = Format::Json;
    double alpha = 0.001;
    bool emit_dsl = false;
    std::string prediction;  // compare only: JSON object label -> probability
    std::size_t stage = 0;   // scan only: 1-based stage position
    std::size_t points = 0;  // scan only
};

/// Analytic: outcome -> probability. Sample: the ensemble report.
int cmd_run(const RunConfig &config, std::ostream &out, std::ostream &err);

/// Runs both engines and emits the verdict; kOk iff it passes.
int cmd_compare(const RunConfig &config, std::ostream &out, std::ostream &err);

/// Analytic distributions for phi = 2 pi k / points, k = 0..points-1, with a
/// PHASE device at 1-based position `stage`: an existing PHASE there is
/// reused, otherwise a PHASE on mode 1 is inserted before that stage.
int cmd_scan_phase(const RunConfig &config, std::ostream &out, std::ostream &err);

/// Full command line: `gmc run|compare|scan [flags]`.
int main(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace gmc::cli
