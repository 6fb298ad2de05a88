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

namespace gmc {

/// Shortest faithful text for a double: 17 significant digits ("%.17g").
std::string format_real(double x);

/// format_real, but always reads as a floating literal ("1.0", not "1").
/// Non-finite values map to "null".
std::string format_json_real(double x);

/// Double-quoted JSON string with the mandatory escapes.
std::string json_quote(const std::string &s);

}  // namespace gmc
