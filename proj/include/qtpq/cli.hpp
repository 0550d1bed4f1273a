// Copyright 2026 The qtpq Authors
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

// Command-line driver: spectrum, run, verify, estimate, clusters list.
//
// Exit codes: 0 success, 1 failed check or numerical failure, 2 usage or
// configuration error. Errors are reported on one stderr line:
//   error: kind=<kind> message="<text>"

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qtpq/config.hpp"
#include "qtpq/lattice.hpp"
#include "qtpq/spectrum.hpp"

namespace qtpq {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// A Hamiltonian with its extremal eigenvalues, before delta' is chosen.
struct BuiltModel {
    std::string name;
    std::optional<ClusterSpec> cluster;
    PauliSum hamiltonian;
    SpectrumResult spectrum;
};

BuiltModel build_model(const ModelConfig &config);
ModelInstance instantiate(const BuiltModel &built, double delta_prime, const ModelConfig &config);

/// "plaquettes" expands to every W_p of a honeycomb cluster; "W_p:a,b,c,d,e,f"
/// names one hexagon in cyclic order.
std::vector<ObservableSpec> resolve_observables(const BuiltModel &built, const std::vector<std::string> &names);

/// Verify-suite model entry: "heisenberg-dimer", "kitaev-bond", or
/// "<kind>:<cluster>" (e.g. "kitaev:honeycomb8").
ModelConfig model_from_entry(const std::string &entry, const ModelConfig &base);

/// Runs the driver on `args` (args[0] is the program name).
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace qtpq
