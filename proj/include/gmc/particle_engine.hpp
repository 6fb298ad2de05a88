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
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "gmc/amplitude_engine.hpp"
#include "gmc/core.hpp"

namespace gmc {

struct DetectorFired {
    std::string label;
    bool operator==(const DetectorFired &) const = default;
};

struct PassedBank {
    std::size_t bank_index;
    bool operator==(const PassedBank &) const = default;
};

struct TrialEvent {
    std::size_t ordering_time;
    std::variant<DetectorFired, PassedBank> what;
    bool operator==(const TrialEvent &) const = default;
};

/// One run of one particle. Exactly one terminal outcome: a detector label
/// or UNDETECTED.
struct TrialRecord {
    std::uint64_t trial_index = 0;
    std::vector<TrialEvent> events;
    std::string terminal_outcome;
    bool operator==(const TrialRecord &) const = default;
};

struct EnsembleReport {
    std::uint64_t n_trials = 0;
    std::uint64_t seed = 0;
    std::map<std::string, std::uint64_t> counts;
    std::map<std::string, double> frequencies;
    OutcomeDistribution predicted;
    double chi_square = 0.0;
    int dof = 0;
};

/// Random slot used for a Detect stage is its bank index (0-based count of
/// Detect stages before it). Devices that lose norm draw from slot
/// kLossSlotBase + stage index.
inline constexpr std::uint64_t kLossSlotBase = std::uint64_t{1} << 32;

/// Probabilities at or above 1 - kForcedTolerance are taken without drawing.
inline constexpr double kForcedTolerance = 1e-12;

/// Simulates one particle. The normalized state is carried through devices
/// and only sampled at Detect banks: outcomes are ordered by detector label
/// with "continue" last and chosen by one variate from
/// uniform_variate(seed, trial_index, bank_index). On continue the detected
/// modes are zeroed and the state renormalized.
TrialRecord sample_trial(const Apparatus &a, std::uint64_t seed, std::uint64_t trial_index);

/// Runs trials 0..n_trials-1 and compares against enumerate_outcomes.
/// Throws std::invalid_argument if n_trials is 0.
EnsembleReport run_ensemble(const Apparatus &a, std::uint64_t n_trials, std::uint64_t seed,
                            unsigned threads = 0);

/// sum over outcomes of value(o) * frequency(o). Throws std::invalid_argument
/// if an outcome with nonzero count has no value.
double ensemble_expectation(const EnsembleReport &report, const std::map<std::string, double> &values);

}  // namespace gmc
