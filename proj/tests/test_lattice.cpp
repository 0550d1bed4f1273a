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

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "qtpq/error.hpp"
#include "qtpq/lattice.hpp"
#include "qtpq/pauli.hpp"
#include "qtpq/spectrum.hpp"

namespace qtpq {
namespace {

ClusterSpec bundled(const std::string &name) {
    return read_cluster_file(std::string(QTPQ_CLUSTER_DIR) + "/" + name + ".txt");
}

ModelInstance instance_for(const PauliSum &h, double delta_prime) {
    const std::vector<double> ev = full_spectrum(h);
    return finalize_model(h, ev.front(), ev.back(), delta_prime);
}

class BundledCluster : public ::testing::TestWithParam<std::string> {};

TEST_P(BundledCluster, Validates) {
    const ClusterSpec c = bundled(GetParam());
    EXPECT_NO_THROW(validate_cluster(c));
    EXPECT_EQ(c.name, GetParam());
}

TEST_P(BundledCluster, BondAndTermCounts) {
    const ClusterSpec c = bundled(GetParam());
    if (c.kind == LatticeKind::Kagome) {
        EXPECT_EQ(c.bonds.size(), 2 * c.n_sites);
        EXPECT_EQ(build_kagome_heisenberg(c, 1.0).terms().size(), 6 * c.n_sites);
    } else {
        EXPECT_EQ(c.bonds.size(), 3 * c.n_sites / 2);
        std::map<BondLabel, std::size_t> per_label;
        for (const Bond &b : c.bonds) {
            ++per_label[b.label];
        }
        EXPECT_EQ(per_label[BondLabel::X], c.n_sites / 2);
        EXPECT_EQ(per_label[BondLabel::Y], c.n_sites / 2);
        EXPECT_EQ(per_label[BondLabel::Z], c.n_sites / 2);
        EXPECT_EQ(build_kitaev(c, 1.0).terms().size(), 3 * c.n_sites / 2);
    }
}

TEST_P(BundledCluster, RoundTripsThroughText) {
    const ClusterSpec c = bundled(GetParam());
    std::stringstream buf;
    write_cluster(buf, c);
    const ClusterSpec back = parse_cluster(buf, c.name);
    EXPECT_EQ(back.kind, c.kind);
    EXPECT_EQ(back.n_sites, c.n_sites);
    ASSERT_EQ(back.bonds.size(), c.bonds.size());
    for (std::size_t b = 0; b < c.bonds.size(); ++b) {
        EXPECT_EQ(back.bonds[b].i, c.bonds[b].i);
        EXPECT_EQ(back.bonds[b].j, c.bonds[b].j);
        EXPECT_EQ(back.bonds[b].label, c.bonds[b].label);
    }
}

TEST_P(BundledCluster, AlphaMatchesDecomposition) {
    const ClusterSpec c = bundled(GetParam());
    const double J = 0.75;
    const double n = static_cast<double>(c.n_sites);
    const PauliSum h = c.kind == LatticeKind::Kagome ? build_kagome_heisenberg(c, J) : build_kitaev(c, J);
    // E_min, E_max are not needed for alpha; any consistent pair will do.
    const ModelInstance m = finalize_model(h, -10.0, 2.0, 0.0, J);
    const double expected = c.kind == LatticeKind::Kagome ? m.shift + 6.0 * n * J : m.shift + 1.5 * n * J;
    EXPECT_NEAR(m.alpha, expected, 1e-12 * expected);
}

INSTANTIATE_TEST_SUITE_P(Clusters, BundledCluster,
                         ::testing::Values("honeycomb8", "honeycomb12", "honeycomb18", "honeycomb24", "kagome12",
                                           "kagome18"));

TEST(Cluster, KitaevEighteenHasTwentySevenTerms) {
    EXPECT_EQ(build_kitaev(bundled("honeycomb18"), 1.0).terms().size(), 27u);
}

TEST(Cluster, RejectsWrongCoordination) {
    ClusterSpec c = bundled("kagome12");
    c.bonds.pop_back();
    EXPECT_THROW(validate_cluster(c), Error);
}

TEST(Cluster, RejectsRepeatedHoneycombLabel) {
    ClusterSpec c = bundled("honeycomb8");
    for (Bond &b : c.bonds) {
        if (b.label == BondLabel::X) {
            b.label = BondLabel::Y;
            break;
        }
    }
    EXPECT_THROW(validate_cluster(c), Error);
}

TEST(Cluster, RejectsSelfBondAndOutOfRangeSite) {
    ClusterSpec c = bundled("honeycomb8");
    c.bonds[0].j = c.bonds[0].i;
    EXPECT_THROW(validate_cluster(c), Error);
    c = bundled("honeycomb8");
    c.bonds[0].j = 99;
    EXPECT_THROW(validate_cluster(c), Error);
}

TEST(Cluster, KitaevBuilderRefusesKagome) {
    EXPECT_THROW(build_kitaev(bundled("kagome12"), 1.0), Error);
    EXPECT_THROW(build_kagome_heisenberg(bundled("honeycomb8"), 1.0), Error);
}

TEST(Cluster, ParseErrors) {
    std::istringstream bad_header("triangle 4\n");
    EXPECT_THROW(parse_cluster(bad_header, "t"), Error);
    std::istringstream bad_label("honeycomb 2\n0 1 w\n");
    EXPECT_THROW(parse_cluster(bad_label, "t"), Error);
    EXPECT_THROW(read_cluster_file("/nonexistent/cluster.txt"), Error);
}

TEST(Models, DimerSpectrum) {
    const std::vector<double> ev = full_spectrum(heisenberg_dimer(1.0));
    ASSERT_EQ(ev.size(), 4u);
    EXPECT_NEAR(ev[0], -3.0, 1e-12);
    for (int i = 1; i < 4; ++i) {
        EXPECT_NEAR(ev[i], 1.0, 1e-12);
    }
}

TEST(Models, KitaevBondSpectrum) {
    const std::vector<double> ev = full_spectrum(kitaev_bond(1.0, Axis::X));
    EXPECT_NEAR(ev[0], -1.0, 1e-12);
    EXPECT_NEAR(ev[1], -1.0, 1e-12);
    EXPECT_NEAR(ev[2], 1.0, 1e-12);
    EXPECT_NEAR(ev[3], 1.0, 1e-12);
}

TEST(Models, ZeroCouplingIsEmpty) {
    EXPECT_TRUE(heisenberg_dimer(0.0).terms().empty());
    EXPECT_TRUE(build_kitaev(bundled("honeycomb8"), 0.0).terms().empty());
}

TEST(Models, KitaevSignConvention) {
    const PauliSum h = kitaev_bond(2.0, Axis::Z);
    ASSERT_EQ(h.terms().size(), 1u);
    EXPECT_DOUBLE_EQ(h.terms()[0].coefficient(), -2.0);
}

TEST(Finalize, DimerConstants) {
    const ModelInstance m = instance_for(heisenberg_dimer(1.0), 0.0);
    EXPECT_NEAR(m.shift, 1.002, 1e-12);
    EXPECT_NEAR(m.eta, 0.002, 1e-15);
    EXPECT_NEAR(m.lambda, 4.002, 1e-12);
    EXPECT_NEAR(m.alpha, 4.002, 1e-12);
    EXPECT_NEAR(m.h_prime_norm(), 4.002, 1e-12);
}

TEST(Finalize, ZeroDeltaPrimeGivesExactNorm) {
    const ModelInstance m = finalize_model(heisenberg_dimer(1.0), -3.0, 1.0, 0.0);
    EXPECT_EQ(m.lambda, m.shift - m.e_min);
}

TEST(Finalize, KitaevBondLambda) {
    const ModelInstance m = finalize_model(kitaev_bond(1.0), -1.0, 1.0, 1e-2);
    EXPECT_NEAR(m.shift, 1.002, 1e-12);
    EXPECT_NEAR(m.lambda, 2.012, 1e-12);
    EXPECT_GT(m.lambda, m.h_prime_norm());
}

TEST(Finalize, PositiveGroundEnergyStillRaisesLambda) {
    const PauliSum h(1, 5.0, {PauliTerm(1.0, {{0, Axis::Z}})});
    const ModelInstance m = finalize_model(h, 4.0, 6.0, 0.1);
    EXPECT_NEAR(m.lambda, (m.shift - 4.0) + 0.4, 1e-12);
    EXPECT_GT(m.lambda, m.h_prime_norm());
}

TEST(Finalize, ZeroGroundEnergyGivesLambdaEqualL) {
    const PauliSum h(1, 1.0, {PauliTerm(1.0, {{0, Axis::Z}})});
    const ModelInstance m = finalize_model(h, 0.0, 2.0, 0.3);
    EXPECT_DOUBLE_EQ(m.lambda, m.shift);
}

TEST(Finalize, InvariantsOnClusters) {
    for (const char *name : {"honeycomb8", "kagome12"}) {
        const ClusterSpec c = bundled(name);
        const PauliSum h = c.kind == LatticeKind::Kagome ? build_kagome_heisenberg(c, 1.0) : build_kitaev(c, 1.0);
        for (double dp : {0.0, 1e-3, 0.1}) {
            const ModelInstance m = instance_for(h, dp);
            EXPECT_GT(m.shift, m.e_max);
            EXPECT_NEAR(m.eta, 0.001 * static_cast<double>(c.n_sites), 1e-15);
            EXPECT_GE(m.alpha, m.h_prime_norm() * (1.0 - 1e-12));
            if (dp == 0.0) {
                EXPECT_EQ(m.lambda, m.h_prime_norm());
            } else {
                EXPECT_GT(m.lambda, m.h_prime_norm());
            }
        }
    }
}

TEST(Finalize, HPrimeIsShiftMinusH) {
    const ModelInstance m = instance_for(heisenberg_dimer(1.0), 0.0);
    const Eigen::MatrixXcd h = dense_matrix(m.hamiltonian);
    const Eigen::MatrixXcd hp = dense_matrix(m.h_prime);
    const Eigen::MatrixXcd expected = m.shift * Eigen::MatrixXcd::Identity(4, 4) - h;
    EXPECT_LT((hp - expected).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Finalize, RejectsBadInput) {
    EXPECT_THROW(finalize_model(heisenberg_dimer(1.0), -3.0, 1.0, -0.1), Error);
    EXPECT_THROW(finalize_model(heisenberg_dimer(1.0), 2.0, 1.0, 0.0), Error);
    EXPECT_THROW(finalize_model(heisenberg_dimer(1.0), -3.0, 1.0, std::nan("")), Error);
    EXPECT_THROW(finalize_model(heisenberg_dimer(1.0), -3.0, 1.0, 0.0, 1.0, ShiftPolicy{0.0}), Error);
}

TEST(Plaquettes, CountsOnHoneycomb) {
    EXPECT_EQ(find_plaquettes(bundled("honeycomb8")).size(), 4u);
    EXPECT_EQ(find_plaquettes(bundled("honeycomb12")).size(), 6u);
    EXPECT_EQ(find_plaquettes(bundled("honeycomb18")).size(), 9u);
    EXPECT_EQ(find_plaquettes(bundled("honeycomb24")).size(), 12u);
}

TEST(Plaquettes, SquareToIdentityAndCommuteWithKitaev) {
    const ClusterSpec c = bundled("honeycomb8");
    const Eigen::MatrixXcd h = dense_matrix(build_kitaev(c, 1.0));
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(h.rows(), h.cols());
    for (const auto &sites : find_plaquettes(c)) {
        const ObservableSpec w = plaquette_observable(c, sites);
        EXPECT_EQ(w.op.terms().size(), 1u);
        EXPECT_EQ(w.op.terms()[0].weight(), 6u);
        const Eigen::MatrixXcd wm = dense_matrix(w.op);
        EXPECT_LT((wm * wm - id).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_LT((wm * h - h * wm).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Plaquettes, GroundSpaceHoldsOneFluxFreeStateOnTwelveSites) {
    // The twelve-site torus has a fourfold ground space mixing flux sectors.
    const ClusterSpec c = bundled("honeycomb12");
    const PauliSum h = build_kitaev(c, 1.0);
    const EigenSystem es = eigensystem(h);
    const double e0 = es.values[0];
    Eigen::Index deg = 0;
    while (deg < es.values.size() && es.values[deg] < e0 + 1e-8) {
        ++deg;
    }
    ASSERT_EQ(deg, 4);
    const Eigen::MatrixXcd g = es.vectors.leftCols(deg);
    Eigen::MatrixXcd projector = Eigen::MatrixXcd::Identity(deg, deg);
    for (const auto &sites : find_plaquettes(c)) {
        const ObservableSpec w = plaquette_observable(c, sites);
        Eigen::MatrixXcd wg(g.rows(), deg);
        for (Eigen::Index n = 0; n < deg; ++n) {
            wg.col(n) = apply(w.op, Statevector(12, g.col(n))).amplitudes();
        }
        const Eigen::MatrixXcd reduced = g.adjoint() * wg;
        EXPECT_NEAR(reduced.trace().real(), 0.0, 1e-8) << w.name;
        projector = projector * (Eigen::MatrixXcd::Identity(deg, deg) + reduced) * 0.5;
    }
    EXPECT_NEAR(projector.trace().real(), 1.0, 1e-8);
}

TEST(Plaquettes, RejectsNonHexagon) {
    const ClusterSpec c = bundled("honeycomb8");
    auto sites = find_plaquettes(c).front();
    std::swap(sites[1], sites[2]);
    EXPECT_THROW(plaquette_observable(c, sites), Error);
    EXPECT_THROW(plaquette_observable(bundled("kagome12"), {0, 1, 2, 3, 4, 5}), Error);
}

}  // namespace
}  // namespace qtpq
