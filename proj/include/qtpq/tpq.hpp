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

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qtpq/lattice.hpp"
#include "qtpq/pauli.hpp"

namespace qtpq {

/// The k-th microcanonical TPQ state, kept normalized.
///
/// The unnormalized state is (L - H)^k |psi_0>; its norm divided by scale^k is
/// carried in log form because it under- or overflows long before k = 50 N.
struct TpqState {
    Statevector vector;
    double log_norm_scaled = 0.0;  // log( ||(L-H)^k psi_0|| / scale^k )
    std::size_t k = 0;
    std::size_t sample_id = 0;
    std::uint64_t seed = 0;
};

/// Random initial state: i.i.d. standard complex normal amplitudes,
/// normalized, i.e. a uniformly random direction on the unit sphere.
TpqState random_state(std::size_t n_sites, std::uint64_t seed, std::size_t sample_id = 0);

/// One application of H' = L - H, renormalized. The norm is scaled by
/// `model.lambda`.
TpqState step(const TpqState &state, const ModelInstance &model);
/// Same recursion with an explicit normalization scale (e.g. alpha for the
/// unamplified baseline).
TpqState step(const TpqState &state, const PauliSum &h_prime, double scale);

struct TpqRecord {
    std::size_t sample_id = 0;
    std::size_t k = 0;
    double squared_norm_scaled = 1.0;      // <psi_k|psi_k> / scale^{2k}
    double log_squared_norm_scaled = 0.0;  // its natural log
    double energy = 0.0;                   // E_k
    double beta = 0.0;                     // 2k / (L - E_k), 0 at k = 0
    double temperature = 0.0;              // 1 / beta, +inf at k = 0
    std::map<std::string, double> observables;
};

TpqRecord measure(const TpqState &state, const ModelInstance &model, std::span<const ObservableSpec> observables = {});

struct EnsembleOptions {
    std::size_t samples = 25;
    std::size_t k_max = 1;
    std::uint64_t base_seed = 1;
    /// Per-sample seeds. When empty, sample i uses stream_seed(base_seed, i).
    std::vector<std::uint64_t> seeds;
    /// Normalization scale of the recorded norm; defaults to model.lambda.
    std::optional<double> scale;
    /// Worker threads over samples; 0 means hardware concurrency.
    std::size_t threads = 0;
};

struct FieldStats {
    double mean = 0.0;
    double std = 0.0;  // sample standard deviation (n - 1), 0 for one sample
};

struct KStatistics {
    std::size_t k = 0;
    FieldStats squared_norm_scaled;
    double log_mean_squared_norm_scaled = 0.0;  // log of the mean, underflow-safe
    FieldStats energy;
    FieldStats beta;
    FieldStats temperature;
    std::map<std::string, FieldStats> observables;
};

struct TraceEnsemble {
    std::vector<std::string> observable_names;
    std::vector<std::vector<TpqRecord>> traces;  // [sample][k]
    std::vector<KStatistics> stats;              // [k]
    double scale = 0.0;
    std::vector<std::uint64_t> seeds;
};

/// Per-k mean and standard deviation across samples. The result does not
/// depend on the order of `traces`.
std::vector<KStatistics> aggregate(const std::vector<std::vector<TpqRecord>> &traces,
                                   const std::vector<std::string> &observable_names);

/// Runs `samples` independent traces from k = 0 to k_max and aggregates them.
TraceEnsemble run_ensemble(const ModelInstance &model, const EnsembleOptions &options,
                           std::span<const ObservableSpec> observables = {});

}  // namespace qtpq
