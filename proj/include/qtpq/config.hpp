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

// Experiment configuration for the command-line driver.
//
// INI file, one section per subcommand:
//
//   [model]     kind, cluster, hamiltonian, coupling, eta_per_site
//   [run]       delta_prime, samples, k_max, seed, observables, threads, alpha_baseline
//   [verify]    models, checks, k, trials, epsilon_prime, epsilon, delta_prime, seed
//   [estimate]  mode, sweep, k, delta_prime, epsilon_prime, exact_statistics, n, gap, per_unitary_cost
//   [output]    dir
//
// Lists are comma separated; integer lists also accept ranges a:b or a:b:step.
// Precedence, lowest first: built-in defaults, $QTPQ_OUTPUT_DIR (output dir
// only), the config file, command-line flags.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qtpq {

inline constexpr const char *kOutputDirEnv = "QTPQ_OUTPUT_DIR";

struct ModelConfig {
    /// kitaev | kagome | heisenberg-dimer | kitaev-bond | pauli
    std::string kind = "kitaev";
    /// Cluster file path, or the stem of a bundled cluster (e.g. honeycomb12).
    std::string cluster = "honeycomb12";
    /// Pauli-sum file for kind = pauli.
    std::string hamiltonian;
    double coupling = 1.0;
    double eta_per_site = 0.001;
};

struct RunConfig {
    std::vector<double> delta_primes{0.0};
    std::size_t samples = 25;
    std::size_t k_max = 0;  // 0: 50 N
    std::uint64_t seed = 1;
    /// "plaquettes" (all W_p of a honeycomb cluster) or "W_p:s1,s2,...,s6" entries.
    std::vector<std::string> observables;
    std::size_t threads = 0;
    bool alpha_baseline = false;
};

struct VerifyConfig {
    std::vector<std::string> models{"heisenberg-dimer", "kitaev-bond"};
    std::vector<std::string> checks{"block", "amplified_block", "monomial", "bound", "closed_loop", "amplification"};
    std::vector<std::size_t> k{1, 3, 10};
    std::size_t trials = 1000;
    double epsilon_prime = 1e-3;
    std::optional<double> epsilon;  // injected amplification precision
    double delta_prime = 0.01;
    std::uint64_t seed = 1;
};

struct EstimateConfig {
    std::string mode = "table";  // table | scaling
    std::string sweep = "k";     // k | delta_prime
    std::vector<std::size_t> k{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::vector<double> delta_primes{0.0};
    double epsilon_prime = 1e-3;
    std::string exact_statistics = "auto";  // auto | on | off
    std::vector<std::size_t> n{12, 18, 24, 30};
    double gap = 0.03;
    std::optional<double> per_unitary_cost;
};

struct ExperimentConfig {
    ModelConfig model;
    RunConfig run;
    VerifyConfig verify;
    EstimateConfig estimate;
    std::string output_dir = ".";
};

/// Defaults with $QTPQ_OUTPUT_DIR applied.
ExperimentConfig default_config();

/// Overlays an INI file on `config`. Unknown sections or keys are errors.
void load_config_file(const std::string &path, ExperimentConfig &config);

/// Checks cross-field invariants (delta' >= 0, samples >= 1, files exist, ...).
void validate_config(const ExperimentConfig &config);

std::string config_to_json(const ExperimentConfig &config);
ExperimentConfig config_from_json(const std::string &text);

std::vector<double> parse_double_list(const std::string &text);
std::vector<std::size_t> parse_size_list(const std::string &text);
std::vector<std::string> parse_string_list(const std::string &text);

/// Resolves a cluster argument: an existing path, else <cluster dir>/<name>.txt.
std::string resolve_cluster_path(const std::string &cluster);

}  // namespace qtpq
