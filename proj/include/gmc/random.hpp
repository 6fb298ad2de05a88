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

namespace gmc {

/// Counter-based uniform stream. Each (seed, trial, slot) triple maps to one
/// variate with no shared state, so trials can run in any order or in
/// parallel and still reproduce bit for bit.
///
/// Construction (stable; golden counts depend on it):
///   h = mix64(mix64(mix64(seed) + trial) + slot)
///   u = (h >> 11) * 2^-53                        in [0, 1)
/// where mix64 is the SplitMix64 finalizer applied to x + 0x9E3779B97F4A7C15.
std::uint64_t mix64(std::uint64_t x);

double uniform_variate(std::uint64_t seed, std::uint64_t trial, std::uint64_t slot);

}  // namespace gmc
