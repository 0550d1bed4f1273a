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

// Gate-count and complexity arithmetic for the quantum TPQ algorithm.
//
// Every asymptotic expression is evaluated with an explicit multiplicative
// constant (default 1) and returned together with the formula it evaluates.
// The numbers compare parameter choices; they are not absolute gate counts.

#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "qtpq/lattice.hpp"
#include "qtpq/pauli.hpp"
#include "qtpq/quantum.hpp"

namespace qtpq {

struct CostConstants {
    double lcu = 1.0;            // C_U = lcu * N_U * C
    double amplification = 1.0;  // uniform spectral amplification
    double qet = 1.0;            // QET primitive gates
    double amplitude_amplification = 1.0;
};

struct CostModel {
    double c_u = 0.0;              // gates of the base encoding U
    std::size_t n_a = 0;           // LCU ancillas, ceil(log2(N_U + 1))
    std::size_t n_u = 0;           // Pauli strings in H' (identity excluded)
    double per_unitary_cost = 1.0; // C, gates per controlled Pauli string
    CostConstants constants;

    /// LCU costs of H': C = the largest Pauli weight unless given.
    static CostModel from_lcu(const PauliSum &h_prime, std::optional<double> per_unitary_cost = std::nullopt,
                              CostConstants constants = {});
};

struct GateCount {
    double value = 0.0;
    std::string formula;
};

/// const * (alpha/Lambda)(1/delta) ln((alpha/Lambda)/epsilon) * C_U.
/// Domain: 0 < Lambda <= alpha, delta in (0, 1], epsilon in (0, 1/2); when
/// `h_prime_norm` is given also delta <= 1 - ||H'||/Lambda.
GateCount amplification_cost(double alpha, double lambda, double delta, double epsilon, double c_u,
                             double constant = 1.0, std::optional<double> h_prime_norm = std::nullopt);

struct QetCost {
    std::size_t ancillas = 2;
    std::size_t controlled_calls = 0;  // k
    bool odd_plain_substitution = false;  // odd k: plain U~ instead of controlled-U~
    double primitive = 0.0;               // const * k * log2(max(N_a, 2))
    std::string formula;
};

QetCost qet_cost(std::size_t k, std::size_t n_a, double constant = 1.0);

/// (Lambda / ||H'||)^k, evaluated as exp(k log1p((Lambda - ||H'||)/||H'||)).
double amplification_prefactor(double lambda, double h_prime_norm, std::size_t k);

/// min(1 - ||H'||/Lambda, 1/k), or 1/k when Lambda = ||H'|| (delta' = 0).
double default_delta(const ModelInstance &model, std::size_t k);

struct ResourceEstimate {
    std::size_t k = 0;
    double delta = 0.0;
    double delta_prime = 0.0;
    double epsilon_prime = 0.0;
    double prefactor = 1.0;  // (Lambda/(L - E_min))^k
    std::size_t qubits = 0;  // N + N_a + 2
    std::size_t n_a = 0;

    // Exact-statistics form, present when power statistics were supplied.
    std::optional<double> epsilon_exact;
    std::optional<double> theorem_exact;
    // Replacement form: ||H'^{k-1}||_1 / sqrt(N_k) -> D / (L - E_max).
    double epsilon_replacement = 0.0;
    double theorem_replacement = 0.0;

    // Gate-level composition with the budget actually used (exact if
    // available, else replacement).
    double epsilon = 0.0;
    GateCount amplified_encoding;  // per call of U~
    QetCost qet;
    double per_v_cost = 0.0;  // k * cost(U~) + QET primitives
    std::size_t aa_steps = 0;
    std::string aa_source;  // "oracle-p" or "prefactor"
    double total = 0.0;     // aa_steps * per_v_cost

    std::string theorem_formula;
    std::string total_formula;
};

struct EstimateOptions {
    CostModel cost;
    /// Overrides default_delta.
    std::optional<double> delta;
    /// Lambda-scaled ||H'^{k-1}||_1 and N_k (see PowerStatistics).
    std::optional<PowerStatistics> statistics;
    /// Post-selection probability from the quantum layer, if known.
    std::optional<double> oracle_probability;
    EpsilonPrimeRange range;
};

ResourceEstimate total_complexity(const ModelInstance &model, std::size_t k, double epsilon_prime,
                                  const EstimateOptions &options);

struct ScalingEstimate {
    std::size_t n_sites = 0;
    double sqrt_d = 0.0;
    int polylog_exponent = 3;  // k * (1/delta) * C_U = O(N) O(N) O(N)
    double polylog = 0.0;      // N^polylog_exponent
    double log_factor = 0.0;   // ln(1/(eps' * gap))
    double value = 0.0;
    std::string formula;
};

/// sqrt(2^N) * N^3 * ln(1/(eps' * gap)) after alpha = O(N), N_U = O(N),
/// C = O(1), delta = O(1/k), Lambda = O(N), k = O(N).
ScalingEstimate spin_system_scaling(std::size_t n_sites, double epsilon_prime, double gap, double constant = 1.0);

}  // namespace qtpq
