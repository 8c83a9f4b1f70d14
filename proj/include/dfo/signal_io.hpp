/*
 Copyright 2026 The dfo Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#pragma once

#include <string>

#include "dfo/lti_system.hpp"

namespace dfo {

/// Reads a signal from CSV with header `t,z1,...,zsigma`, one row per time
/// step. Throws ConfigError naming the offending line on malformed input.
Signal read_signal_csv(const std::string& path);

/// Writes a signal in the same layout; values use round-trippable precision.
void write_signal_csv(const std::string& path, const Signal& z);

/// Formats a double so it reads back bit-identically.
std::string format_double(double v);

}  // namespace dfo
