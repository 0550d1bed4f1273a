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
#include <iosfwd>
#include <string>
#include <vector>

#include "qtpq/pauli.hpp"

namespace qtpq {

enum class LatticeKind { Kagome, Honeycomb };
enum class BondLabel { X, Y, Z, Heisenberg };

std::string to_string(LatticeKind kind);
std::string to_string(BondLabel label);

struct Bond {
    std::size_t i;
    std::size_t j;
    BondLabel label;
};

/// A finite periodic cluster. Validity (see `validate_cluster`):
///   kagome    - every site has exactly 4 bonds;
///   honeycomb - every site has exactly 3 bonds, one each labeled x, y, z.
struct ClusterSpec {
    std::string name;
    LatticeKind kind = LatticeKind::Kagome;
    std::size_t n_sites = 0;
    std::vector<Bond> bonds;
};

void validate_cluster(const ClusterSpec &cluster);

// Cluster file format:
//   # comment
//   <kagome|honeycomb> <n_sites>
//   <i> <j> <x|y|z|heis>      one line per bond
ClusterSpec parse_cluster(std::istream &in, std::string name);
ClusterSpec read_cluster_file(const std::string &path);
void write_cluster(std::ostream &out, const ClusterSpec &cluster);

/// J * sum over bonds of (XX + YY + ZZ). Labels are ignored. No coordination
/// check, so it also builds the two-site dimer.
PauliSum heisenberg_hamiltonian(std::size_t n_sites, const std::vector<Bond> &bonds, double J);
/// -J * sum over bonds of sigma^a sigma^a, a = bond label (x, y or z).
PauliSum kitaev_hamiltonian(std::size_t n_sites, const std::vector<Bond> &bonds, double J);

/// Validates a kagome cluster and returns its Heisenberg Hamiltonian (6N terms).
PauliSum build_kagome_heisenberg(const ClusterSpec &cluster, double J);
/// Validates a honeycomb cluster and returns its Kitaev Hamiltonian (3N/2 terms).
PauliSum build_kitaev(const ClusterSpec &cluster, double J);

/// J (XX + YY + ZZ) on two sites; spectrum {-3J, J, J, J}.
PauliSum heisenberg_dimer(double J);
/// -J sigma^a sigma^a on two sites.
PauliSum kitaev_bond(double J, Axis axis = Axis::X);

struct ShiftPolicy {
    double eta_per_site = 0.001;
};

/// A Hamiltonian together with the constants the TPQ iteration and its
/// quantum encoding need.
///
///   L      = E_max + eta,      eta = eta_per_site * N
///   H'     = L - H
///   Lambda = L - E_min (1 + s delta'),  s = -sign(E_min), so Lambda >= L - E_min
///   alpha  = alpha_lcu(H')
struct ModelInstance {
    PauliSum hamiltonian;
    PauliSum h_prime;
    double coupling = 1.0;
    double shift = 0.0;  // L
    double eta = 0.0;
    double e_min = 0.0;
    double e_max = 0.0;
    double lambda = 0.0;
    double delta_prime = 0.0;
    double alpha = 0.0;

    std::size_t n_sites() const noexcept {
        return hamiltonian.n_sites();
    }
    /// ||H'|| = L - E_min.
    double h_prime_norm() const noexcept {
        return shift - e_min;
    }
};

ModelInstance finalize_model(PauliSum hamiltonian, double e_min, double e_max, double delta_prime,
                             double coupling = 1.0, ShiftPolicy policy = {});

struct ObservableSpec {
    std::string name;
    PauliSum op;
};

/// W_p on a honeycomb hexagon. `sites` must be a 6-cycle of bonds in cyclic
/// order; each site carries the Pauli axis of its bond leaving the hexagon,
/// which runs x, y, z, x, y, z around a genuine plaquette.
ObservableSpec plaquette_observable(const ClusterSpec &cluster, const std::array<std::size_t, 6> &sites);

/// All plaquettes (hexagons with the x, y, z pattern) of a honeycomb cluster,
/// each in cyclic order starting from its smallest site.
std::vector<std::array<std::size_t, 6>> find_plaquettes(const ClusterSpec &cluster);

}  // namespace qtpq
