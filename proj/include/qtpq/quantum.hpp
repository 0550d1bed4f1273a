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

// Dense, desk-scale model of the quantum TPQ pipeline: LCU block encodings,
// an eigenvalue-level stand-in for uniform spectral amplification, the
// k-th power monomial with ancilla post-selection, amplitude amplification,
// and the trace-distance error bound that links eigenvalue error to state
// error.
//
// Register layout: ancilla qubits are the high-order bits, so the encoded
// block (<0|_a (x) I) U (|0>_a (x) I) is the leading D x D submatrix.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qtpq/lattice.hpp"
#include "qtpq/pauli.hpp"
#include "qtpq/spectrum.hpp"

namespace qtpq {

/// Default cap on ancilla + system qubits for explicit unitaries (4096^2
/// complex entries, 256 MiB).
inline constexpr std::size_t kDefaultBlockEncodingQubits = 12;

struct BlockEncoding {
    Eigen::MatrixXcd unitary;
    std::size_t n_ancilla = 0;
    std::size_t n_system = 0;
    double subnormalization = 1.0;
    std::string encoded;  // what the block holds, for reports

    Eigen::Index system_dimension() const {
        return Eigen::Index{1} << n_system;
    }
    /// (<0|_a (x) I) U (|0>_a (x) I).
    Eigen::MatrixXcd block() const {
        return unitary.topLeftCorner(system_dimension(), system_dimension());
    }
    /// max_ij |(U^dagger U - I)_ij|.
    double unitarity_residual() const;
    /// max_ij |block - target / subnormalization|.
    double block_residual(const Eigen::MatrixXcd &target) const;
};

/// PREPARE^dagger . SELECT . PREPARE for H' = sum_j w_j U_j, where the identity
/// part is one unitary and signs are absorbed into the U_j. Uses
/// ceil(log2(terms + 1)) ancillas; the subnormalization is alpha_lcu(h_prime).
BlockEncoding build_lcu_unitary(const PauliSum &h_prime, std::size_t max_total_qubits = kDefaultBlockEncodingQubits);

/// One-ancilla unitary [[B, S], [S, -B]] with S = sqrt(I - B^2) for a Hermitian
/// contraction B (||B|| <= 1).
BlockEncoding dilate_hermitian_contraction(const Eigen::MatrixXcd &block, double subnormalization,
                                           std::string encoded);

enum class PerturbationMode { Zero, Random, Adversarial };

std::string to_string(PerturbationMode mode);
PerturbationMode perturbation_mode_from_string(const std::string &name);

/// Eigenvalues of H' = L - H and a perturbed copy with |xi_n| <= epsilon * Lambda.
/// Index n follows the eigenbasis of H (E_n ascending, so E'_n descending).
struct PerturbedSpectrum {
    Eigen::VectorXd base;          // E'_n
    Eigen::VectorXd perturbation;  // xi_n
    Eigen::MatrixXcd eigenvectors;
    double lambda = 1.0;
    double epsilon = 0.0;

    Eigen::VectorXd perturbed() const {
        return base + perturbation;
    }
    double max_relative_error() const {
        return perturbation.size() == 0 ? 0.0 : perturbation.cwiseAbs().maxCoeff() / lambda;
    }
    /// The approximate matrix sum_n (E'_n + xi_n) |n><n|.
    Eigen::MatrixXcd perturbed_matrix() const;
};

/// Perturbation patterns:
///   Zero        xi_n = 0
///   Random      xi_n uniform in [-eps Lambda, eps Lambda], independent per n
///   Adversarial xi_n = -eps Lambda for even n, +eps Lambda for odd n
PerturbedSpectrum perturb_spectrum(const ModelInstance &model, const EigenSystem &h_eigen, double epsilon,
                                   PerturbationMode mode, std::uint64_t seed = 1);

struct AmplifiedEncoding {
    BlockEncoding encoding;
    PerturbedSpectrum spectrum;
};

/// Stand-in for the amplified encoding U~ with block H~'/Lambda: the spectrum
/// of H' is perturbed within epsilon * Lambda and the resulting contraction is
/// dilated exactly. Only the spectral guarantee is reproduced, not a circuit.
/// Fails if Lambda < ||H'|| or some |E~'_n| exceeds Lambda. Lambda > alpha is
/// accepted here; the cost model rejects it.
AmplifiedEncoding emulate_amplified_encoding(const ModelInstance &model, const EigenSystem &h_eigen, double epsilon,
                                             PerturbationMode mode, std::uint64_t seed = 1,
                                             std::size_t max_total_qubits = kDefaultBlockEncodingQubits);
AmplifiedEncoding emulate_amplified_encoding(const ModelInstance &model, double epsilon, PerturbationMode mode,
                                             std::uint64_t seed = 1);

struct MonomialResult {
    Statevector state;           // normalized B^k |psi_0>
    double success_probability;  // ||B^k |psi_0>||^2
};

/// Post-selected output of the QET monomial V, whose block is B^k for the
/// block B of `be`. `psi0` must be normalized.
MonomialResult apply_monomial(const BlockEncoding &be, std::size_t k, const Statevector &psi0);

/// floor((pi/4) / asin(sqrt(p))); 0 for p > 1/2.
std::size_t grover_iterations(double p);

struct AmplificationResult {
    std::size_t iterations = 0;
    double initial_probability = 0.0;
    double amplified_probability = 0.0;
    Statevector good_before{1};  // post-selected system state before amplification
    Statevector good_after{1};   // and after
};

/// Matrix-level amplitude amplification of A|0>_a|psi_0>, A = dilation of B^k,
/// "good" = ancilla in |0>. Uses the fewest iterations up to the standard count
/// that reach `target_probability`, else the standard count.
AmplificationResult amplitude_amplify(const BlockEncoding &be, std::size_t k, const Statevector &psi0,
                                      double target_probability = 1.0);

/// One evaluation of the trace-distance bound for W_k.
struct BoundReport {
    std::string perturbation;  // "random", "adversarial-alternating", ...
    std::size_t k = 0;
    double epsilon = 0.0;
    double lambda = 0.0;
    double lhs = 0.0;  // (1/2) ||W_k||_1
    double rhs = 0.0;  // 4 k Lambda eps ||H'^{k-1}||_1 / sqrt(N_k)
    // The remaining quantities are reported in units of Lambda^k (powers of
    // H'/Lambda) so they stay finite for large k; the inequalities are
    // homogeneous and unaffected.
    double trace_norm_power = 0.0;  // ||(H'/Lambda)^{k-1}||_1
    double eigen_diff_sum = 0.0;    // sum_n |e~_n^k - e_n^k|, e = E'/Lambda
    double eigen_diff_bound = 0.0;  // 2 k eps ||(H'/Lambda)^{k-1}||_1
    double n_k = 0.0;               // <psi|(H'/Lambda)^{2k}|psi>
    double n_k_tilde = 0.0;         // <psi|(H~'/Lambda)^{2k}|psi>
    bool satisfied = false;         // lhs <= rhs
    bool eigen_diff_ok = false;     // eigen_diff_sum <= eigen_diff_bound
    bool norm_ratio_ok = false;     // 1/sqrt(N~_k) <= 3/sqrt(N_k)

    bool all_ok() const {
        return satisfied && eigen_diff_ok && norm_ratio_ok;
    }
};

/// Largest epsilon the bound's derivation admits: (4/9)(L - E_max)/(k Lambda).
double trace_bound_epsilon_ceiling(const ModelInstance &model, std::size_t k);

/// Evaluates the bound for one perturbed spectrum. `psi` must be normalized.
BoundReport evaluate_trace_bound(const PerturbedSpectrum &spectrum, const Statevector &psi, std::size_t k,
                                 std::string label);

/// `trials` random perturbations plus three adversarial ones (alternating,
/// all +eps Lambda, all -eps Lambda). Rejects epsilon above the ceiling.
std::vector<BoundReport> verify_appendix_a(const ModelInstance &model, const EigenSystem &h_eigen,
                                           const Statevector &psi, std::size_t k, double epsilon, std::size_t trials,
                                           std::uint64_t seed = 1);

/// Accepted precision range is eps' in (0, gap_multiple * (L - E_max)].
struct EpsilonPrimeRange {
    double gap_multiple = 1.0;
};

/// min( eps' sqrt(N_k) / (4 k Lambda ||H'^{k-1}||_1), ceiling ). The statistics
/// are passed in Lambda-scaled form (see PowerStatistics), where the first
/// term reads eps' sqrt(n_k) / (4 k trace_norm_power).
double epsilon_budget(const ModelInstance &model, std::size_t k, double epsilon_prime, double trace_norm_power,
                      double n_k, EpsilonPrimeRange range = {});

/// Budget with statistics computed exactly from the eigenbasis.
double epsilon_for_target(const ModelInstance &model, const EigenSystem &h_eigen, const Statevector &psi0,
                          std::size_t k, double epsilon_prime, EpsilonPrimeRange range = {});

/// Budget without an eigenbasis: uses ||H'^{k-1}||_1 / sqrt(N_k) < D / (L - E_max).
double epsilon_for_target_replacement(const ModelInstance &model, std::size_t k, double epsilon_prime,
                                      EpsilonPrimeRange range = {});

/// Lambda-scaled ||H'^{k-1}||_1 and <psi|H'^{2k}|psi> from the eigenbasis.
struct PowerStatistics {
    double trace_norm_power = 0.0;  // sum_n |E'_n / Lambda|^{k-1}
    double n_k = 0.0;               // sum_n |c_n|^2 (E'_n / Lambda)^{2k}
};
PowerStatistics power_statistics(const ModelInstance &model, const EigenSystem &h_eigen, const Statevector &psi,
                                 std::size_t k);
/// Same with <psi|H'^{2k}|psi> replaced by its average over random psi,
/// Tr(H'^{2k}) / D.
PowerStatistics averaged_power_statistics(const ModelInstance &model, std::span<const double> h_eigenvalues,
                                          std::size_t k);

}  // namespace qtpq
