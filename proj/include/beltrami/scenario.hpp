// Copyright 2026 the beltrami-lab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Scenario runner: a JSON config names a subcommand plus the geometric
// data; the result is a machine-readable report that echoes the fully
// resolved config and the library version.  Identical config and version
// produce byte-identical reports apart from the timestamp field.
//
// Subcommands: solve, spectrum, zeta-det, riemann-roch,
// check-chi-identity, check-factorization, cj.

#include <string>

namespace bel {

// Parses, validates and runs a scenario.  Throws ConfigError for invalid
// configs, SolverError / NumericalError for numerical failures.  Soft
// conditions (heat-trace fit instability, stretch-check misses) are
// reported in the "warnings" array of the report, not thrown.
std::string run_scenario(const std::string& config_json);

}  // namespace bel
