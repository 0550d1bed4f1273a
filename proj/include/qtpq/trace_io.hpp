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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "qtpq/lattice.hpp"
#include "qtpq/tpq.hpp"

namespace qtpq {

// Trace CSV:   sample,k,sq_norm_scaled,energy,beta,temperature,<obs...>
// Summary CSV: k,mean_sq_norm_scaled,mean_energy,mean_beta,mean_temperature,mean_<obs...>,
//                std_sq_norm_scaled,std_energy,std_beta,std_temperature,std_<obs...>
// All numbers use 17 significant digits.
void write_trace_csv(std::ostream &out, const TraceEnsemble &ensemble);
void write_summary_csv(std::ostream &out, const TraceEnsemble &ensemble);

/// FNV-1a 64 hash of the canonical text form of a Pauli sum, as 16 hex digits.
std::string model_hash(const PauliSum &sum);

}  // namespace qtpq
