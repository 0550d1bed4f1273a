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

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qtpq/error.hpp"
#include "qtpq/pauli.hpp"

namespace qtpq {

/// Default site limit for dense diagonalization (4096 x 4096).
inline constexpr std::size_t kDefaultSpectrumSites = 12;

struct LanczosOptions {
    double tol = 1e-10;          // on ||H x - theta x|| for both extremal Ritz pairs
    std::size_t max_iter = 500;  // total matrix-vector products
    std::size_t max_basis = 64;  // Krylov basis size before a thick restart
    std::size_t keep = 6;        // Ritz vectors kept at each end on restart
    std::uint64_t seed = 0x5eed5eedULL;
};

struct SpectrumResult {
    double e_min = 0.0;
    double e_max = 0.0;
    std::array<double, 2> residual_norms{};  // {min, max}
    std::size_t iterations = 0;
    std::optional<std::vector<double>> full_spectrum;
};

/// Thrown when Lanczos runs out of iterations. Carries the best estimates.
class ConvergenceError : public Error {
   public:
    ConvergenceError(const std::string &message, SpectrumResult best)
        : Error(ErrorKind::NotConverged, message), best_(std::move(best)) {
    }
    const SpectrumResult &best() const noexcept {
        return best_;
    }

   private:
    SpectrumResult best_;
};

/// Lowest and highest eigenvalue by thick-restart Lanczos with full
/// reorthogonalization, using only matrix-free products. Deterministic for a
/// fixed seed. The reported residuals are recomputed explicitly at the end.
SpectrumResult extremal_eigenvalues(const PauliSum &h, const LanczosOptions &options = {});

/// All 2^N eigenvalues, ascending.
std::vector<double> full_spectrum(const PauliSum &h, std::size_t max_sites = kDefaultSpectrumSites);

/// Eigenvalues (ascending) with an orthonormal eigenbasis in the columns of
/// `vectors`.
struct EigenSystem {
    Eigen::VectorXd values;
    Eigen::MatrixXcd vectors;
};
EigenSystem eigensystem(const PauliSum &h, std::size_t max_sites = kDefaultSpectrumSites);

/// Canonical-ensemble Tr(H e^{-beta H}) / Tr(e^{-beta H}) from a spectrum.
double canonical_energy(std::span<const double> eigenvalues, double beta);
/// Canonical variance <H^2> - <H>^2 (equals -d<H>/d beta).
double canonical_energy_variance(std::span<const double> eigenvalues, double beta);

}  // namespace qtpq
