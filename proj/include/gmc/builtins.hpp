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

#include <string>
#include <string_view>
#include <vector>

#include "gmc/dsl.hpp"

namespace gmc {

/// Half-silvered mirror followed by a reflector, detectors on both outputs.
dsl::ExperimentDoc h_detectors();
/// H R H with detector II on mode 0 and detector I on mode 1.
dsl::ExperimentDoc mach_zehnder();
/// mach_zehnder with a third detector on the upper arm after the first H.
dsl::ExperimentDoc ev_bomb();
/// Two particles with two basis states each in the state (|01> + |10>)/sqrt2;
/// one bank measures particle A.
dsl::ExperimentDoc bell();

/// Sorted list of names accepted by builtin().
std::vector<std::string> builtin_names();

/// Throws std::invalid_argument naming the valid builtins.
dsl::ExperimentDoc builtin(std::string_view name);

}  // namespace gmc
