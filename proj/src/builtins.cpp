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

#include "gmc/builtins.hpp"

#include <stdexcept>

namespace gmc {

namespace {

DetectorBank bank(std::vector<Detector> detectors) { return DetectorBank(std::move(detectors)); }

}  // namespace

dsl::ExperimentDoc h_detectors() {
    return {"h_detectors",
            Apparatus(2, ProbabilityState::basis(2, 0),
                      {beam_splitter(dsl::kDefaultTransmission), reflector(),
                       bank({{"D1", {1}}, {"D2", {0}}})})};
}

dsl::ExperimentDoc mach_zehnder() {
    return {"mach_zehnder",
            Apparatus(2, ProbabilityState::basis(2, 0),
                      {beam_splitter(dsl::kDefaultTransmission), reflector(),
                       beam_splitter(dsl::kDefaultTransmission), bank({{"D1", {1}}, {"D2", {0}}})})};
}

dsl::ExperimentDoc ev_bomb() {
    return {"ev_bomb",
            Apparatus(2, ProbabilityState::basis(2, 0),
                      {beam_splitter(dsl::kDefaultTransmission), bank({{"D3", {1}}}), reflector(),
                       beam_splitter(dsl::kDefaultTransmission), bank({{"D1", {1}}, {"D2", {0}}})})};
}

dsl::ExperimentDoc bell() {
    const double h = dsl::kDefaultTransmission;
    return {"bell", Apparatus(4, ProbabilityState({0.0, h, h, 0.0}), {bank({{"A0", {0, 1}}, {"A1", {2, 3}}})})};
}

std::vector<std::string> builtin_names() { return {"bell", "ev-bomb", "h-detectors", "mach-zehnder"}; }

dsl::ExperimentDoc builtin(std::string_view name) {
    if (name == "h-detectors") {
        return h_detectors();
    }
    if (name == "mach-zehnder") {
        return mach_zehnder();
    }
    if (name == "ev-bomb") {
        return ev_bomb();
    }
    if (name == "bell") {
        return bell();
    }
    std::string valid;
    for (const auto &n : builtin_names()) {
        valid += (valid.empty() ? "" : ", ") + n;
    }
    throw std::invalid_argument("unknown builtin '" + std::string(name) + "' (valid: " + valid + ")");
}

}  // namespace gmc
