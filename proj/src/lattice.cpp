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

#include "qtpq/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <utility>

#include "qtpq/error.hpp"

namespace qtpq {

std::string to_string(LatticeKind kind) {
    return kind == LatticeKind::Kagome ? "kagome" : "honeycomb";
}

std::string to_string(BondLabel label) {
    switch (label) {
        case BondLabel::X:
            return "x";
        case BondLabel::Y:
            return "y";
        case BondLabel::Z:
            return "z";
        case BondLabel::Heisenberg:
            return "heis";
    }
    return "?";
}

namespace {

BondLabel label_from_string(const std::string &s, std::size_t line_no) {
    if (s == "x") return BondLabel::X;
    if (s == "y") return BondLabel::Y;
    if (s == "z") return BondLabel::Z;
    if (s == "heis") return BondLabel::Heisenberg;
    throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": unknown bond label '" + s + "'");
}

Axis axis_of(BondLabel label) {
    switch (label) {
        case BondLabel::X:
            return Axis::X;
        case BondLabel::Y:
            return Axis::Y;
        case BondLabel::Z:
            return Axis::Z;
        case BondLabel::Heisenberg:
            break;
    }
    throw Error(ErrorKind::InvalidArgument, "Kitaev bonds must be labeled x, y or z");
}

PauliTerm two_site(double coefficient, std::size_t i, std::size_t j, Axis axis) {
    if (i > j) {
        std::swap(i, j);
    }
    return PauliTerm(coefficient, {{i, axis}, {j, axis}});
}

void check_bond_endpoints(std::size_t n_sites, const std::vector<Bond> &bonds) {
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto &b : bonds) {
        if (b.i >= n_sites || b.j >= n_sites) {
            throw Error(ErrorKind::InvalidArgument, "bond (" + std::to_string(b.i) + ", " + std::to_string(b.j) +
                                                        ") out of range for " + std::to_string(n_sites) + " sites");
        }
        if (b.i == b.j) {
            throw Error(ErrorKind::InvalidArgument, "bond on a single site " + std::to_string(b.i));
        }
        if (!seen.emplace(std::min(b.i, b.j), std::max(b.i, b.j)).second) {
            throw Error(ErrorKind::InvalidArgument,
                        "duplicate bond (" + std::to_string(b.i) + ", " + std::to_string(b.j) + ")");
        }
    }
}

std::optional<BondLabel> bond_label(const ClusterSpec &cluster, std::size_t a, std::size_t b) {
    for (const auto &bond : cluster.bonds) {
        if ((bond.i == a && bond.j == b) || (bond.i == b && bond.j == a)) {
            return bond.label;
        }
    }
    return std::nullopt;
}

int axis_index(Axis a) {
    return static_cast<int>(a);
}

/// Axis per hexagon site, or nullopt when `sites` is not a plaquette.
std::optional<std::array<Axis, 6>> plaquette_axes(const ClusterSpec &cluster, const std::array<std::size_t, 6> &sites) {
    std::set<std::size_t> distinct(sites.begin(), sites.end());
    if (distinct.size() != 6) {
        return std::nullopt;
    }
    for (std::size_t s : sites) {
        if (s >= cluster.n_sites) {
            return std::nullopt;
        }
    }
    for (std::size_t p = 0; p < 6; ++p) {
        if (!bond_label(cluster, sites[p], sites[(p + 1) % 6])) {
            return std::nullopt;
        }
    }
    std::array<Axis, 6> axes{};
    for (std::size_t p = 0; p < 6; ++p) {
        const std::size_t s = sites[p];
        const std::size_t prev = sites[(p + 5) % 6];
        const std::size_t next = sites[(p + 1) % 6];
        std::optional<BondLabel> external;
        for (const auto &bond : cluster.bonds) {
            if (bond.i != s && bond.j != s) {
                continue;
            }
            const std::size_t other = bond.i == s ? bond.j : bond.i;
            if (other != prev && other != next) {
                external = bond.label;
            }
        }
        if (!external || *external == BondLabel::Heisenberg) {
            return std::nullopt;
        }
        axes[p] = axis_of(*external);
    }
    const int step = (axis_index(axes[1]) - axis_index(axes[0]) + 3) % 3;
    if (step == 0) {
        return std::nullopt;
    }
    for (std::size_t p = 0; p < 6; ++p) {
        if ((axis_index(axes[(p + 1) % 6]) - axis_index(axes[p]) + 3) % 3 != step) {
            return std::nullopt;
        }
    }
    return axes;
}

}  // namespace

void validate_cluster(const ClusterSpec &cluster) {
    if (cluster.n_sites == 0) {
        throw Error(ErrorKind::InvalidArgument, "cluster '" + cluster.name + "' has no sites");
    }
    check_bond_endpoints(cluster.n_sites, cluster.bonds);
    std::vector<std::size_t> degree(cluster.n_sites, 0);
    std::vector<std::array<int, 3>> label_count(cluster.n_sites, {0, 0, 0});
    for (const auto &b : cluster.bonds) {
        ++degree[b.i];
        ++degree[b.j];
        if (cluster.kind == LatticeKind::Kagome) {
            if (b.label != BondLabel::Heisenberg) {
                throw Error(ErrorKind::InvalidArgument, "kagome cluster '" + cluster.name + "' has a labeled bond");
            }
        } else {
            if (b.label == BondLabel::Heisenberg) {
                throw Error(ErrorKind::InvalidArgument,
                            "honeycomb cluster '" + cluster.name + "' has an unlabeled (heis) bond");
            }
            const int a = axis_index(axis_of(b.label));
            ++label_count[b.i][a];
            ++label_count[b.j][a];
        }
    }
    const std::size_t want = cluster.kind == LatticeKind::Kagome ? 4 : 3;
    for (std::size_t s = 0; s < cluster.n_sites; ++s) {
        if (degree[s] != want) {
            throw Error(ErrorKind::InvalidArgument, to_string(cluster.kind) + " cluster '" + cluster.name + "': site " +
                                                        std::to_string(s) + " has " + std::to_string(degree[s]) +
                                                        " bonds, expected " + std::to_string(want));
        }
        if (cluster.kind == LatticeKind::Honeycomb && label_count[s] != std::array<int, 3>{1, 1, 1}) {
            throw Error(ErrorKind::InvalidArgument, "honeycomb cluster '" + cluster.name + "': site " +
                                                        std::to_string(s) + " needs exactly one x, y and z bond");
        }
    }
}

ClusterSpec parse_cluster(std::istream &in, std::string name) {
    ClusterSpec cluster;
    cluster.name = std::move(name);
    bool have_header = false;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream fields(line);
        std::string first;
        if (!(fields >> first)) {
            continue;
        }
        if (!have_header) {
            if (first == "kagome") {
                cluster.kind = LatticeKind::Kagome;
            } else if (first == "honeycomb") {
                cluster.kind = LatticeKind::Honeycomb;
            } else {
                throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": unknown lattice kind '" + first + "'");
            }
            if (!(fields >> cluster.n_sites)) {
                throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": header needs a site count");
            }
            have_header = true;
            continue;
        }
        Bond b{};
        std::string label;
        std::istringstream bond_fields(line);
        if (!(bond_fields >> b.i >> b.j >> label)) {
            throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": expected 'i j label'");
        }
        b.label = label_from_string(label, line_no);
        cluster.bonds.push_back(b);
    }
    if (!have_header) {
        throw Error(ErrorKind::Parse, "cluster file has no header line");
    }
    return cluster;
}

ClusterSpec read_cluster_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::Io, "cannot open cluster file '" + path + "'");
    }
    std::string name = path;
    if (auto slash = name.find_last_of('/'); slash != std::string::npos) {
        name = name.substr(slash + 1);
    }
    if (auto dot = name.find_last_of('.'); dot != std::string::npos) {
        name = name.substr(0, dot);
    }
    return parse_cluster(in, name);
}

void write_cluster(std::ostream &out, const ClusterSpec &cluster) {
    out << to_string(cluster.kind) << ' ' << cluster.n_sites << "\n";
    for (const auto &b : cluster.bonds) {
        out << b.i << ' ' << b.j << ' ' << to_string(b.label) << "\n";
    }
}

PauliSum heisenberg_hamiltonian(std::size_t n_sites, const std::vector<Bond> &bonds, double J) {
    check_bond_endpoints(n_sites, bonds);
    std::vector<PauliTerm> terms;
    if (J != 0.0) {
        terms.reserve(3 * bonds.size());
        for (const auto &b : bonds) {
            for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
                terms.push_back(two_site(J, b.i, b.j, a));
            }
        }
    }
    return PauliSum(n_sites, 0.0, std::move(terms));
}

PauliSum kitaev_hamiltonian(std::size_t n_sites, const std::vector<Bond> &bonds, double J) {
    check_bond_endpoints(n_sites, bonds);
    std::vector<PauliTerm> terms;
    for (const auto &b : bonds) {
        const Axis a = axis_of(b.label);
        if (J != 0.0) {
            terms.push_back(two_site(-J, b.i, b.j, a));
        }
    }
    return PauliSum(n_sites, 0.0, std::move(terms));
}

PauliSum build_kagome_heisenberg(const ClusterSpec &cluster, double J) {
    if (cluster.kind != LatticeKind::Kagome) {
        throw Error(ErrorKind::InvalidArgument, "cluster '" + cluster.name + "' is not a kagome cluster");
    }
    validate_cluster(cluster);
    return heisenberg_hamiltonian(cluster.n_sites, cluster.bonds, J);
}

PauliSum build_kitaev(const ClusterSpec &cluster, double J) {
    if (cluster.kind != LatticeKind::Honeycomb) {
        throw Error(ErrorKind::InvalidArgument, "cluster '" + cluster.name + "' is not a honeycomb cluster");
    }
    validate_cluster(cluster);
    return kitaev_hamiltonian(cluster.n_sites, cluster.bonds, J);
}

PauliSum heisenberg_dimer(double J) {
    return heisenberg_hamiltonian(2, {{0, 1, BondLabel::Heisenberg}}, J);
}

PauliSum kitaev_bond(double J, Axis axis) {
    const BondLabel label = axis == Axis::X ? BondLabel::X : axis == Axis::Y ? BondLabel::Y : BondLabel::Z;
    return kitaev_hamiltonian(2, {{0, 1, label}}, J);
}

ModelInstance finalize_model(PauliSum hamiltonian, double e_min, double e_max, double delta_prime, double coupling,
                             ShiftPolicy policy) {
    if (!std::isfinite(delta_prime) || delta_prime < 0.0) {
        throw Error(ErrorKind::InvalidArgument, "delta_prime must be finite and >= 0");
    }
    if (!std::isfinite(e_min) || !std::isfinite(e_max) || e_min > e_max) {
        throw Error(ErrorKind::InvalidArgument, "need finite E_min <= E_max");
    }
    const double eta = policy.eta_per_site * static_cast<double>(hamiltonian.n_sites());
    if (!(eta > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "eta must be positive so that L > E_max");
    }
    const double shift = e_max + eta;
    // L - E_min (1 +/- delta') with the sign that moves Lambda above L - E_min.
    const double lambda = (shift - e_min) + std::abs(e_min) * delta_prime;
    PauliSum h_prime = hamiltonian.shifted_negation(shift);
    const double alpha = alpha_lcu(h_prime);
    return ModelInstance{std::move(hamiltonian), std::move(h_prime), coupling, shift, eta, e_min, e_max,
                         lambda,                 delta_prime,          alpha};
}

ObservableSpec plaquette_observable(const ClusterSpec &cluster, const std::array<std::size_t, 6> &sites) {
    if (cluster.kind != LatticeKind::Honeycomb) {
        throw Error(ErrorKind::InvalidArgument, "plaquette operators need a honeycomb cluster");
    }
    validate_cluster(cluster);
    const auto axes = plaquette_axes(cluster, sites);
    if (!axes) {
        throw Error(ErrorKind::InvalidArgument, "sites do not form a hexagonal plaquette in cyclic order");
    }
    std::vector<PauliOp> ops;
    for (std::size_t p = 0; p < 6; ++p) {
        ops.push_back(PauliOp{sites[p], (*axes)[p]});
    }
    std::sort(ops.begin(), ops.end(), [](const PauliOp &a, const PauliOp &b) { return a.site < b.site; });
    std::string name = "W_p";
    for (std::size_t s : sites) {
        name += "_" + std::to_string(s);
    }
    return ObservableSpec{name, PauliSum(cluster.n_sites, 0.0, {PauliTerm(1.0, std::move(ops))})};
}

std::vector<std::array<std::size_t, 6>> find_plaquettes(const ClusterSpec &cluster) {
    if (cluster.kind != LatticeKind::Honeycomb) {
        throw Error(ErrorKind::InvalidArgument, "plaquettes are defined on honeycomb clusters");
    }
    validate_cluster(cluster);
    std::vector<std::vector<std::size_t>> adjacency(cluster.n_sites);
    for (const auto &b : cluster.bonds) {
        adjacency[b.i].push_back(b.j);
        adjacency[b.j].push_back(b.i);
    }
    std::vector<std::array<std::size_t, 6>> found;
    std::array<std::size_t, 6> path{};
    std::function<void(std::size_t)> extend = [&](std::size_t depth) {
        const std::size_t last = path[depth - 1];
        if (depth == 6) {
            const auto &next = adjacency[last];
            if (std::find(next.begin(), next.end(), path[0]) != next.end() && path[1] < path[5] &&
                plaquette_axes(cluster, path)) {
                found.push_back(path);
            }
            return;
        }
        for (std::size_t n : adjacency[last]) {
            if (n <= path[0] || std::find(path.begin(), path.begin() + static_cast<long>(depth), n) !=
                                    path.begin() + static_cast<long>(depth)) {
                continue;
            }
            path[depth] = n;
            extend(depth + 1);
        }
    };
    for (std::size_t s = 0; s < cluster.n_sites; ++s) {
        path[0] = s;
        extend(1);
    }
    return found;
}

}  // namespace qtpq
