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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qtpq {

using Complex = std::complex<double>;

/// Largest register the matrix-free kernels address (bit masks are 64-bit,
/// statevectors of 2^34 amplitudes are already far past any host memory).
inline constexpr std::size_t kMaxSites = 34;

/// Default site limit for `dense_matrix`.
inline constexpr std::size_t kDefaultDenseSites = 14;

enum class Axis : std::uint8_t { X, Y, Z };

char to_char(Axis axis);
Axis axis_from_char(char c);

struct PauliOp {
    std::size_t site;
    Axis axis;

    bool operator==(const PauliOp &) const = default;
};

/// A real-weighted tensor product of single-site Pauli matrices.
///
/// Sites are strictly increasing, the coefficient is finite and nonzero. Site
/// `i` is bit `i` of a computational-basis index and sigma^z|0> = +|0>.
class PauliTerm {
   public:
    PauliTerm(double coefficient, std::vector<PauliOp> ops);

    double coefficient() const noexcept {
        return coefficient_;
    }
    std::span<const PauliOp> ops() const noexcept {
        return ops_;
    }
    std::size_t weight() const noexcept {
        return ops_.size();
    }
    std::size_t max_site() const noexcept {
        return ops_.back().site;
    }

    /// Sites carrying X or Y (bits flipped by the string).
    std::uint64_t x_mask() const noexcept {
        return x_mask_;
    }
    /// Sites carrying Z or Y (bits contributing a sign).
    std::uint64_t z_mask() const noexcept {
        return z_mask_;
    }
    std::size_t y_count() const noexcept {
        return y_count_;
    }

    PauliTerm scaled(double factor) const;

   private:
    double coefficient_;
    std::vector<PauliOp> ops_;
    std::uint64_t x_mask_ = 0;
    std::uint64_t z_mask_ = 0;
    std::size_t y_count_ = 0;
};

/// identity_shift * I + sum_j terms[j], acting on n_sites qubits.
///
/// Immutable once built. Construction precomputes the terms grouped by their
/// bit-flip mask so `apply` makes one pass over the amplitudes per group.
class PauliSum {
   public:
    PauliSum(std::size_t n_sites, double identity_shift = 0.0, std::vector<PauliTerm> terms = {});

    std::size_t n_sites() const noexcept {
        return n_sites_;
    }
    std::size_t dimension() const noexcept {
        return std::size_t{1} << n_sites_;
    }
    double identity_shift() const noexcept {
        return identity_shift_;
    }
    std::span<const PauliTerm> terms() const noexcept {
        return terms_;
    }

    /// True when every term has an even number of Y factors, i.e. the matrix is
    /// real symmetric in the computational basis.
    bool is_real() const noexcept {
        return is_real_;
    }

    /// shift * I - (*this).
    PauliSum shifted_negation(double shift) const;

    struct FlipGroup {
        std::uint64_t x_mask;
        std::vector<std::uint64_t> z_masks;
        std::vector<Complex> weights;  // coefficient * i^{y_count}
    };
    std::span<const FlipGroup> flip_groups() const noexcept {
        return groups_;
    }

   private:
    std::size_t n_sites_;
    double identity_shift_;
    std::vector<PauliTerm> terms_;
    std::vector<FlipGroup> groups_;
    bool is_real_ = true;
};

/// A 2^n_sites complex amplitude vector with finite entries.
class Statevector {
   public:
    /// The all-zero vector |0...0> with amplitude 1.
    explicit Statevector(std::size_t n_sites);
    Statevector(std::size_t n_sites, Eigen::VectorXcd amplitudes);

    static Statevector basis(std::size_t n_sites, std::uint64_t index);

    std::size_t n_sites() const noexcept {
        return n_sites_;
    }
    std::size_t dimension() const noexcept {
        return static_cast<std::size_t>(amplitudes_.size());
    }
    const Eigen::VectorXcd &amplitudes() const noexcept {
        return amplitudes_;
    }
    Complex operator[](std::size_t i) const {
        return amplitudes_[static_cast<Eigen::Index>(i)];
    }

    double norm() const {
        return amplitudes_.norm();
    }
    Statevector normalized() const;

   private:
    std::size_t n_sites_;
    Eigen::VectorXcd amplitudes_;
};

/// out = sum * in, matrix-free. `out` is overwritten; it must not alias `in`.
void apply_into(const PauliSum &sum, std::span<const Complex> in, std::span<Complex> out);

/// (identity_shift * I + sum_j c_j P_j) |v>.
Statevector apply(const PauliSum &sum, const Statevector &v);

/// <v| sum |v>, real by Hermiticity. `v` need not be normalized.
double expectation(const PauliSum &sum, const Statevector &v);

/// LCU subnormalization: |identity_shift| + sum_j |c_j|. The identity part is
/// one unitary of the decomposition, weighted by the magnitude of the shift.
double alpha_lcu(const PauliSum &sum);

/// Dense 2^n x 2^n matrix of the sum. Refuses n_sites > max_sites.
Eigen::MatrixXcd dense_matrix(const PauliSum &sum, std::size_t max_sites = kDefaultDenseSites);

/// Real dense matrix; requires `sum.is_real()`.
Eigen::MatrixXd dense_matrix_real(const PauliSum &sum, std::size_t max_sites = kDefaultDenseSites);

// Text format, one term per line:
//   # comment
//   sites <n>              (optional; default is max site + 1)
//   shift <value>          (identity part; repeated lines accumulate)
//   <coeff> <site>:<axis> [<site>:<axis> ...]
// Sites may appear in any order within a line.
PauliSum parse_pauli_sum(std::istream &in);
PauliSum read_pauli_sum_file(const std::string &path);
void write_pauli_sum(std::ostream &out, const PauliSum &sum);

}  // namespace qtpq
