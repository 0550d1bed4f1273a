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
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "qtpq/error.hpp"
#include "qtpq/lattice.hpp"
#include "qtpq/rng.hpp"
#include "qtpq/spectrum.hpp"
#include "qtpq/tpq.hpp"
#include "qtpq/trace_io.hpp"

namespace qtpq {
namespace {

ClusterSpec bundled(const std::string &name) {
    return read_cluster_file(std::string(QTPQ_CLUSTER_DIR) + "/" + name + ".txt");
}

ModelInstance dense_instance(const PauliSum &h, double delta_prime) {
    const std::vector<double> ev = full_spectrum(h);
    return finalize_model(h, ev.front(), ev.back(), delta_prime);
}

// sum_n |c_n|^2 ((L - E_n)/scale)^{2k} in the eigenbasis of H.
double eigen_expansion_sq_norm(const EigenSystem &es, const Statevector &psi0, double shift, double scale,
                               std::size_t k) {
    const Eigen::VectorXcd c = es.vectors.adjoint() * psi0.amplitudes();
    double total = 0.0;
    for (Eigen::Index n = 0; n < c.size(); ++n) {
        total += std::norm(c[n]) * std::pow((shift - es.values[n]) / scale, 2.0 * static_cast<double>(k));
    }
    return total;
}

TEST(RandomState, DeterministicPerSeed) {
    const TpqState a = random_state(5, 42);
    const TpqState b = random_state(5, 42);
    const TpqState c = random_state(5, 43);
    EXPECT_EQ(a.vector.amplitudes(), b.vector.amplitudes());
    EXPECT_NE(a.vector.amplitudes(), c.vector.amplitudes());
    EXPECT_EQ(a.k, 0u);
    EXPECT_EQ(a.log_norm_scaled, 0.0);
}

TEST(RandomState, UnitNorm) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        EXPECT_NEAR(random_state(6, seed).vector.norm(), 1.0, 1e-14);
    }
}

TEST(RandomState, UniformOverlapMean) {
    // E|<0|psi>|^2 = 1/D for a uniformly random direction.
    const std::size_t n = 4;
    const std::size_t samples = 1000;
    double mean = 0.0, sq = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
        const double p = std::norm(random_state(n, stream_seed(7, s)).vector[0]);
        mean += p;
        sq += p * p;
    }
    mean /= samples;
    const double var = sq / samples - mean * mean;
    EXPECT_NEAR(mean, 1.0 / 16.0, 4.0 * std::sqrt(var / samples));
    // Porter-Thomas second moment 2 / (D (D + 1)).
    EXPECT_NEAR(sq / samples, 2.0 / (16.0 * 17.0), 0.2 * 2.0 / (16.0 * 17.0));
}

TEST(Step, GroundStateIsFixedPoint) {
    const ModelInstance m = dense_instance(heisenberg_dimer(1.0), 0.05);
    const EigenSystem es = eigensystem(m.hamiltonian);
    TpqState s{Statevector(2, es.vectors.col(0)), 0.0, 0, 0, 0};
    const TpqState next = step(s, m);
    EXPECT_NEAR(std::abs(next.vector.amplitudes().dot(s.vector.amplitudes())), 1.0, 1e-12);
    EXPECT_NEAR(next.log_norm_scaled, std::log(m.h_prime_norm() / m.lambda), 1e-12);
    EXPECT_EQ(next.k, 1u);
}

TEST(Step, GroundStateWithExactLambdaKeepsNorm) {
    const ModelInstance m = dense_instance(heisenberg_dimer(1.0), 0.0);
    const EigenSystem es = eigensystem(m.hamiltonian);
    TpqState s{Statevector(2, es.vectors.col(0)), 0.0, 0, 0, 0};
    for (int i = 0; i < 10; ++i) {
        s = step(s, m);
    }
    EXPECT_NEAR(s.log_norm_scaled, 0.0, 1e-12);
}

TEST(Step, MatchesEigenExpansionOnDimer) {
    const ModelInstance m = dense_instance(heisenberg_dimer(1.0), 0.0);
    const EigenSystem es = eigensystem(m.hamiltonian);
    // Known coefficients: equal weight on all four eigenvectors.
    const Statevector psi0(2, es.vectors * Eigen::VectorXcd::Constant(4, 0.5));
    TpqState s{psi0, 0.0, 0, 0, 0};
    for (std::size_t k = 1; k <= 40; ++k) {
        s = step(s, m);
        const double expected = eigen_expansion_sq_norm(es, psi0, m.shift, m.lambda, k);
        EXPECT_NEAR(std::exp(2.0 * s.log_norm_scaled), expected, 1e-10 * expected) << "k " << k;
    }
}

TEST(Step, MatchesEigenExpansionOnKitaev) {
    const ModelInstance m = dense_instance(build_kitaev(bundled("honeycomb8"), 1.0), 0.01);
    const EigenSystem es = eigensystem(m.hamiltonian);
    TpqState s = random_state(8, 3);
    const Statevector psi0 = s.vector;
    for (std::size_t k = 1; k <= 100; ++k) {
        s = step(s, m);
        if (k % 10 == 0) {
            const double expected = eigen_expansion_sq_norm(es, psi0, m.shift, m.lambda, k);
            EXPECT_NEAR(2.0 * s.log_norm_scaled, std::log(expected), 1e-9) << "k " << k;
        }
    }
}

TEST(Step, ExplicitScaleOverload) {
    const ModelInstance m = dense_instance(heisenberg_dimer(1.0), 0.0);
    const TpqState s0 = random_state(2, 9);
    const TpqState a = step(s0, m);
    const TpqState b = step(s0, m.h_prime, m.alpha * 2.0);
    EXPECT_NEAR(a.log_norm_scaled - b.log_norm_scaled, std::log(2.0 * m.alpha / m.lambda), 1e-13);
}

TEST(Measure, RecordAtZero) {
    const ModelInstance m = dense_instance(heisenberg_dimer(1.0), 0.0);
    const TpqRecord r = measure(random_state(2, 1), m);
    EXPECT_EQ(r.k, 0u);
    EXPECT_EQ(r.squared_norm_scaled, 1.0);
    EXPECT_EQ(r.beta, 0.0);
    EXPECT_TRUE(std::isinf(r.temperature));
}

TEST(Measure, BetaDefinition) {
    const ModelInstance m = dense_instance(heisenberg_dimer(1.0), 0.0);
    TpqState s = random_state(2, 1);
    for (int i = 0; i < 7; ++i) {
        s = step(s, m);
    }
    const TpqRecord r = measure(s, m);
    EXPECT_NEAR(r.energy, expectation(m.hamiltonian, s.vector), 1e-14);
    EXPECT_NEAR(r.beta, 14.0 / (m.shift - r.energy), 1e-12);
    EXPECT_NEAR(r.temperature * r.beta, 1.0, 1e-14);
}

class EnsembleFixture : public ::testing::Test {
   protected:
    static void SetUpTestSuite() {
        cluster_ = new ClusterSpec(bundled("honeycomb8"));
        model_ = new ModelInstance(dense_instance(build_kitaev(*cluster_, 1.0), 0.0));
    }
    static void TearDownTestSuite() {
        delete cluster_;
        delete model_;
    }
    static ClusterSpec *cluster_;
    static ModelInstance *model_;
};
ClusterSpec *EnsembleFixture::cluster_ = nullptr;
ModelInstance *EnsembleFixture::model_ = nullptr;

TEST_F(EnsembleFixture, EnergyAndTemperatureDecrease) {
    EnsembleOptions opts;
    opts.samples = 8;
    opts.k_max = 400;
    const TraceEnsemble e = run_ensemble(*model_, opts);
    ASSERT_EQ(e.stats.size(), 401u);
    for (const auto &trace : e.traces) {
        for (std::size_t k = 1; k < trace.size(); ++k) {
            EXPECT_LE(trace[k].energy, trace[k - 1].energy + 1e-12);
        }
    }
    for (std::size_t k = 2; k < e.stats.size(); ++k) {
        EXPECT_LE(e.stats[k].temperature.mean, e.stats[k - 1].temperature.mean + 1e-9);
    }
    EXPECT_GT(e.stats[1].temperature.mean, 1.0);
    EXPECT_LT(e.stats.back().temperature.mean, 0.1);
}

TEST_F(EnsembleFixture, DeterministicAcrossThreadCounts) {
    EnsembleOptions opts;
    opts.samples = 5;
    opts.k_max = 30;
    opts.threads = 1;
    const TraceEnsemble a = run_ensemble(*model_, opts);
    opts.threads = 4;
    const TraceEnsemble b = run_ensemble(*model_, opts);
    std::ostringstream sa, sb;
    write_trace_csv(sa, a);
    write_trace_csv(sb, b);
    EXPECT_EQ(sa.str(), sb.str());
}

TEST_F(EnsembleFixture, SeedsFollowStreams) {
    EnsembleOptions opts;
    opts.samples = 3;
    opts.k_max = 2;
    opts.base_seed = 11;
    const TraceEnsemble e = run_ensemble(*model_, opts);
    ASSERT_EQ(e.seeds.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(e.seeds[i], stream_seed(11, i));
    }
    opts.seeds = {5, 6, 7};
    EXPECT_EQ(run_ensemble(*model_, opts).seeds, opts.seeds);
}

TEST_F(EnsembleFixture, SingleSampleHasZeroSpread) {
    EnsembleOptions opts;
    opts.samples = 1;
    opts.k_max = 5;
    const TraceEnsemble e = run_ensemble(*model_, opts);
    for (const KStatistics &s : e.stats) {
        EXPECT_EQ(s.energy.std, 0.0);
        EXPECT_EQ(s.energy.mean, e.traces[0][s.k].energy);
    }
}

TEST_F(EnsembleFixture, AggregateIgnoresSampleOrder) {
    EnsembleOptions opts;
    opts.samples = 6;
    opts.k_max = 10;
    const TraceEnsemble e = run_ensemble(*model_, opts);
    auto reversed = e.traces;
    std::reverse(reversed.begin(), reversed.end());
    const auto a = aggregate(e.traces, {});
    const auto b = aggregate(reversed, {});
    for (std::size_t k = 0; k < a.size(); ++k) {
        EXPECT_NEAR(a[k].energy.mean, b[k].energy.mean, 1e-13);
        EXPECT_NEAR(a[k].energy.std, b[k].energy.std, 1e-13);
        EXPECT_NEAR(a[k].squared_norm_scaled.mean, b[k].squared_norm_scaled.mean, 1e-13);
    }
}

TEST_F(EnsembleFixture, MeanNormNearInverseDimensionAtZeroDeltaPrime) {
    EnsembleOptions opts;
    opts.samples = 20;
    opts.k_max = 400;
    const TraceEnsemble e = run_ensemble(*model_, opts);
    const double d = 256.0;
    for (std::size_t k = 16; k <= 400; k += 16) {
        const double mean = std::exp(e.stats[k].log_mean_squared_norm_scaled);
        EXPECT_GT(mean, 1e-2 / d) << k;
        EXPECT_LT(mean, 1e2 / d) << k;
    }
}

TEST_F(EnsembleFixture, AlphaBaselineDecayRate) {
    // With scale alpha the log norm drops by 2 log(alpha / (L - E_min)) per
    // step once the ground state dominates.
    EnsembleOptions opts;
    opts.samples = 4;
    opts.k_max = 3000;
    opts.scale = model_->alpha;
    const TraceEnsemble e = run_ensemble(*model_, opts);
    const double expected = 2.0 * std::log(model_->alpha / model_->h_prime_norm());
    const double slope =
        (e.stats[2000].log_mean_squared_norm_scaled - e.stats[3000].log_mean_squared_norm_scaled) / 1000.0;
    EXPECT_NEAR(slope, expected, 0.01 * expected);
}

TEST_F(EnsembleFixture, PlaquetteObservablesRecorded) {
    std::vector<ObservableSpec> obs;
    for (const auto &p : find_plaquettes(*cluster_)) {
        obs.push_back(plaquette_observable(*cluster_, p));
    }
    EnsembleOptions opts;
    opts.samples = 2;
    opts.k_max = 3;
    const TraceEnsemble e = run_ensemble(*model_, opts, obs);
    ASSERT_EQ(e.observable_names.size(), obs.size());
    for (const auto &name : e.observable_names) {
        const double v = e.traces[0][3].observables.at(name);
        EXPECT_LE(std::abs(v), 1.0 + 1e-12);
        EXPECT_TRUE(e.stats[3].observables.count(name));
    }
}

TEST_F(EnsembleFixture, CsvHeaders) {
    std::vector<ObservableSpec> obs{plaquette_observable(*cluster_, find_plaquettes(*cluster_).front())};
    EnsembleOptions opts;
    opts.samples = 2;
    opts.k_max = 1;
    const TraceEnsemble e = run_ensemble(*model_, opts, obs);
    std::ostringstream trace, summary;
    write_trace_csv(trace, e);
    write_summary_csv(summary, e);
    const std::string name = obs[0].name;
    const std::string t = trace.str();
    const std::string u = summary.str();
    const std::string trace_header = t.substr(0, t.find('\n'));
    const std::string summary_header = u.substr(0, u.find('\n'));
    EXPECT_EQ(trace_header, "sample,k,sq_norm_scaled,energy,beta,temperature," + name);
    EXPECT_EQ(summary_header, "k,mean_sq_norm_scaled,mean_energy,mean_beta,mean_temperature,mean_" + name +
                                  ",std_sq_norm_scaled,std_energy,std_beta,std_temperature,std_" + name);
    EXPECT_EQ(std::count(t.begin(), t.end(), '\n'), 5);
    EXPECT_EQ(std::count(u.begin(), u.end(), '\n'), 3);
}

TEST(ModelHash, StableAndSensitive) {
    const std::string a = model_hash(heisenberg_dimer(1.0));
    EXPECT_EQ(a.size(), 16u);
    EXPECT_EQ(a, model_hash(heisenberg_dimer(1.0)));
    EXPECT_NE(a, model_hash(heisenberg_dimer(0.5)));
}

TEST(Ensemble, RejectsZeroSamples) {
    const ModelInstance m = dense_instance(heisenberg_dimer(1.0), 0.0);
    EnsembleOptions opts;
    opts.samples = 0;
    EXPECT_THROW((void)run_ensemble(m, opts), Error);
}

}  // namespace
}  // namespace qtpq
