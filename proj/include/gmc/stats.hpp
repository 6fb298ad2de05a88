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

#include <cstdint>
#include <map>
#include <string>

#include "gmc/particle_engine.hpp"

namespace gmc::stats {

/// Categories with expected probability below this are excluded from the
/// statistic and must not be observed at all.
inline constexpr double kImpossible = 1e-12;

inline constexpr double kDefaultAlpha = 0.001;

/// Largest tolerated |frequency - p| / sigma for any single outcome.
inline constexpr double kMaxSigmaDistance = 5.0;

struct ChiSquare {
    double statistic = 0.0;
    int dof = 0;
};

/// Pearson statistic sum (count - n p)^2 / (n p) over categories with
/// p >= kImpossible; dof = categories - 1. Labels missing from `observed`
/// count as zero. Throws std::invalid_argument for n == 0, an empty category
/// set, or expected probabilities not summing to 1.
ChiSquare chi_square(const std::map<std::string, std::uint64_t> &observed,
                     const std::map<std::string, double> &expected, std::uint64_t n);

/// Upper tail of the chi-square distribution, Q(dof/2, statistic/2). For
/// dof 0 returns 1 when statistic <= 1e-12, else 0.
double chi_square_p_value(double statistic, int dof);

struct OutcomeCheck {
    double frequency = 0.0;
    double predicted = 0.0;
    /// |frequency - predicted| / sqrt(p (1 - p) / n); infinite when an
    /// outcome with sigma 0 is missed or hit.
    double sigma_distance = 0.0;
};

struct Verdict {
    bool pass = false;
    double chi_square = 0.0;
    int dof = 0;
    double p_value = 0.0;
    std::map<std::string, OutcomeCheck> per_outcome;
};

/// pass iff p_value > alpha and every sigma_distance <= kMaxSigmaDistance.
/// Uses report.predicted as the reference distribution.
Verdict compare(const EnsembleReport &report, double alpha = kDefaultAlpha);

}  // namespace gmc::stats
