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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
//
//   acceptance            run all criteria
//   acceptance 3 5        run a subset

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qtpq/error.hpp"
#include "qtpq/lattice.hpp"
#include "qtpq/quantum.hpp"
#include "qtpq/resources.hpp"
#include "qtpq/spectrum.hpp"
#include "qtpq/tpq.hpp"

namespace qtpq {
namespace {

struct Verdict {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string &what) {
        if (!ok) {
            if (pass) {
                detail << "first failure: ";
            }
            pass = false;
            detail << what << "; ";
        }
    }
};

ClusterSpec bundled(const std::string &name) {
    return read_cluster_file(std::string(QTPQ_CLUSTER_DIR) + "/" + name + ".txt");
}

ModelInstance instance(const PauliSum &h, double delta_prime) {
    const SpectrumResult s = extremal_eigenvalues(h);
    return finalize_model(h, s.e_min, s.e_max, delta_prime);
}

ModelInstance instance(const PauliSum &h, const EigenSystem &es, double delta_prime) {
    return finalize_model(h, es.values[0], es.values[es.values.size() - 1], delta_prime);
}

Statevector haar(std::size_t n, std::uint64_t seed) {
    return random_state(n, seed).vector;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

// ---------------------------------------------------------------------------

void ac1(Verdict &v) {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (const PauliSum &h : {heisenberg_dimer(1.0), kitaev_bond(1.0)}) {
        const ModelInstance m = instance(h, 0.0);
        const BlockEncoding be = build_lcu_unitary(m.h_prime);
        const double block = be.block_residual(dense_matrix(m.h_prime));
        const double unit = be.unitarity_residual();
        worst = std::max({worst, block, unit});
        v.require(block <= 1e-10, "block residual " + fmt(block));
        v.require(unit <= 1e-10, "unitarity residual " + fmt(unit));
        v.require(std::abs(be.subnormalization - m.alpha) <= 1e-12, "subnormalization != alpha");
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    v.require(secs < 1.0, "runtime " + fmt(secs) + " s");
    v.detail << "max residual " << fmt(worst) << ", " << fmt(secs) << " s";
}

void ac2(Verdict &v) {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    std::size_t cases = 0;
    const std::vector<PauliSum> models{heisenberg_dimer(1.0), kitaev_bond(1.0), build_kitaev(bundled("honeycomb8"), 1.0)};
    for (const PauliSum &h : models) {
        const EigenSystem es = eigensystem(h);
        const ModelInstance m = instance(h, es, 0.02);
        const double eps = 0.4 * (m.lambda - m.h_prime_norm()) / m.lambda;
        const Statevector psi = haar(h.n_sites(), 11);
        const Eigen::VectorXcd c = es.vectors.adjoint() * psi.amplitudes();
        for (PerturbationMode mode : {PerturbationMode::Zero, PerturbationMode::Random, PerturbationMode::Adversarial}) {
            const AmplifiedEncoding enc =
                emulate_amplified_encoding(m, es, mode == PerturbationMode::Zero ? 0.0 : eps, mode, 5);
            const Eigen::VectorXd e = enc.spectrum.perturbed() / m.lambda;
            for (std::size_t k : {1u, 3u, 10u}) {
                const double p = apply_monomial(enc.encoding, k, psi).success_probability;
                double oracle = 0.0;
                for (Eigen::Index n = 0; n < c.size(); ++n) {
                    oracle += std::norm(c[n]) * std::pow(e[n], 2.0 * static_cast<double>(k));
                }
                const double rel = std::abs(p - oracle) / oracle;
                worst = std::max(worst, rel);
                ++cases;
                v.require(rel <= 1e-10, "N=" + std::to_string(h.n_sites()) + " k=" + std::to_string(k) + " " +
                                            to_string(mode) + " rel " + fmt(rel));
            }
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    v.require(secs < 10.0, "runtime " + fmt(secs) + " s");
    v.detail << cases << " cases, max relative error " << fmt(worst) << ", " << fmt(secs) << " s";
}

void ac3(Verdict &v) {
    const PauliSum h = build_kitaev(bundled("honeycomb12"), 1.0);
    const std::size_t n = h.n_sites();
    const double d = static_cast<double>(h.dimension());
    const std::size_t k_max = 50 * n;
    EnsembleOptions opts;
    opts.samples = 25;
    opts.k_max = k_max;

    const ModelInstance m0 = instance(h, 0.0);
    const TraceEnsemble e0 = run_ensemble(m0, opts);
    double lo = 1e300;
    double hi = 0.0;
    for (std::size_t k = 2 * n; k <= k_max; ++k) {
        const double mean = std::exp(e0.stats[k].log_mean_squared_norm_scaled);
        lo = std::min(lo, mean * d);
        hi = std::max(hi, mean * d);
    }
    v.require(lo >= 1e-2 && hi <= 1e2, "(a) D * mean norm spans [" + fmt(lo) + ", " + fmt(hi) + "]");

    const ModelInstance m2 = instance(h, 1e-2);
    const TraceEnsemble e2 = run_ensemble(m2, opts);
    const double ratio =
        std::exp(e0.stats[k_max].log_mean_squared_norm_scaled - e2.stats[k_max].log_mean_squared_norm_scaled);
    v.require(ratio >= 10.0, "(b) suppression at 50N only " + fmt(ratio));

    EnsembleOptions base = opts;
    base.scale = m0.alpha;
    const TraceEnsemble ea = run_ensemble(m0, base);
    const std::size_t k1 = 40 * n;
    const double slope = (ea.stats[k1].log_mean_squared_norm_scaled - ea.stats[k_max].log_mean_squared_norm_scaled) /
                         static_cast<double>(k_max - k1);
    const double expected = 2.0 * std::log(m0.alpha / m0.h_prime_norm());
    const double rel = std::abs(slope - expected) / expected;
    v.require(rel <= 0.05, "(c) decay rate " + fmt(slope) + " vs " + fmt(expected));

    v.detail << "(a) D*norm in [" << fmt(lo) << ", " << fmt(hi) << "], (b) suppression " << fmt(ratio)
             << ", (c) rate " << fmt(slope) << " vs " << fmt(expected) << " (rel " << fmt(rel) << ")";
}

void ac4(Verdict &v) {
    const PauliSum h = build_kitaev(bundled("honeycomb12"), 1.0);
    const std::vector<double> ev = full_spectrum(h);
    const ModelInstance m = finalize_model(h, ev.front(), ev.back(), 0.0);
    const std::size_t k = 10 * h.n_sites();
    EnsembleOptions opts;
    opts.samples = 100;
    opts.k_max = k;
    const TraceEnsemble e = run_ensemble(m, opts);
    const KStatistics &st = e.stats[k];
    const double root_n = std::sqrt(static_cast<double>(opts.samples));
    const double beta = st.beta.mean;
    const double canonical = canonical_energy(ev, beta);
    const double slope = canonical_energy_variance(ev, beta);
    const double se = std::hypot(st.energy.std / root_n, slope * st.beta.std / root_n);
    const double z = std::abs(st.energy.mean - canonical) / se;
    v.require(z <= 3.0, "energy off by " + fmt(z) + " combined SE");

    double worst_rise = 0.0;
    for (std::size_t j = 2; j <= k; ++j) {
        worst_rise = std::max(worst_rise, e.stats[j].temperature.mean - e.stats[j - 1].temperature.mean);
    }
    v.require(worst_rise <= 1e-9, "temperature rises by " + fmt(worst_rise));
    v.detail << "E_k " << fmt(st.energy.mean) << " vs canonical " << fmt(canonical) << " at beta " << fmt(beta)
             << " (" << fmt(z) << " SE), max T rise " << fmt(worst_rise);
}

void ac5(Verdict &v) {
    EnsembleOptions opts;
    opts.samples = 25;

    const PauliSum hk = build_kitaev(bundled("honeycomb12"), 1.0);
    opts.k_max = 50 * hk.n_sites();
    const TraceEnsemble ek = run_ensemble(instance(hk, 0.0), opts);
    double tk = 1e300;
    for (const auto &st : ek.stats) {
        tk = std::min(tk, st.temperature.mean);
    }
    v.require(tk <= 0.05, "Kitaev T " + fmt(tk));

    const PauliSum hh = build_kagome_heisenberg(bundled("kagome12"), 1.0);
    opts.k_max = 15 * hh.n_sites();
    const TraceEnsemble eh = run_ensemble(instance(hh, 0.0), opts);
    double th = 1e300;
    for (const auto &st : eh.stats) {
        th = std::min(th, st.temperature.mean);
    }
    v.require(th <= 0.35, "kagome T " + fmt(th));
    v.detail << "Kitaev T(50N) " << fmt(tk) << ", kagome T(15N) " << fmt(th);
}

void ac6(Verdict &v) {
    const auto t0 = std::chrono::steady_clock::now();
    std::size_t reports = 0;
    std::size_t violations = 0;
    std::size_t closed = 0;
    double worst_ratio = 0.0;
    double worst_closed = 0.0;
    for (const PauliSum &h : {heisenberg_dimer(1.0), kitaev_bond(1.0)}) {
        const EigenSystem es = eigensystem(h);
        for (double dp : {0.0, 0.01}) {
            const ModelInstance m = instance(h, es, dp);
            for (std::size_t k = 1; k <= 20; ++k) {
                const Statevector psi = haar(h.n_sites(), 100 + k);
                const double ceiling = trace_bound_epsilon_ceiling(m, k);
                for (double eps : {ceiling, 0.1 * ceiling}) {
                    for (const auto &r : verify_appendix_a(m, es, psi, k, eps, 1000, k)) {
                        ++reports;
                        violations += r.all_ok() ? 0 : 1;
                        if (r.rhs > 0.0) {
                            worst_ratio = std::max(worst_ratio, r.lhs / r.rhs);
                        }
                    }
                }
                for (double target : {1e-3, 1e-4, 1e-6}) {
                    const double eps = epsilon_for_target(m, es, psi, k, target);
                    for (const auto &r : verify_appendix_a(m, es, psi, k, eps, 100, 7 * k)) {
                        ++closed;
                        worst_closed = std::max(worst_closed, r.lhs / target);
                        violations += r.lhs <= target ? 0 : 1;
                    }
                }
            }
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    v.require(violations == 0, std::to_string(violations) + " violations");
    v.require(secs < 60.0, "runtime " + fmt(secs) + " s");
    v.detail << reports << " bound reports, " << closed << " closed-loop reports, " << violations
             << " violations, max lhs/rhs " << fmt(worst_ratio) << ", max lhs/eps' " << fmt(worst_closed) << ", "
             << fmt(secs) << " s";
}

void ac7(Verdict &v) {
    Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(2, 2);
    b(0, 0) = 0.5;
    const AmplificationResult q = amplitude_amplify(dilate_hermitian_contraction(b, 1.0, "quarter"), 1,
                                                    Statevector::basis(1, 0));
    v.require(q.iterations == 1, "p=1/4 took " + std::to_string(q.iterations) + " iterations");
    v.require(std::abs(q.amplified_probability - 1.0) <= 1e-10, "p=1/4 reached " + fmt(q.amplified_probability));

    // Typical initial state: equal weight on every eigenvector, so p equals the
    // Haar average Tr((H~'/Lambda)^{2k}) / D.
    const PauliSum h = heisenberg_dimer(1.0);
    const EigenSystem es = eigensystem(h);
    const double d = static_cast<double>(h.dimension());
    const Statevector psi(h.n_sites(), es.vectors * Eigen::VectorXcd::Constant(es.vectors.cols(), 1.0 / std::sqrt(d)));
    double worst_fidelity = 1.0;
    double worst_factor = 1.0;
    for (double dp : {0.0, 0.1, 0.5}) {
        const ModelInstance m = instance(h, es, dp);
        const AmplifiedEncoding enc = emulate_amplified_encoding(m, es, 0.0, PerturbationMode::Zero);
        for (std::size_t k = 1; k <= 5; ++k) {
            const AmplificationResult r = amplitude_amplify(enc.encoding, k, psi);
            const double fid = std::norm(r.good_before.amplitudes().dot(r.good_after.amplitudes()));
            worst_fidelity = std::min(worst_fidelity, fid);
            v.require(fid >= 1.0 - 1e-9, "fidelity " + fmt(fid));
            const double predicted =
                std::sqrt(d) * amplification_prefactor(m.lambda, m.h_prime_norm(), k) * std::numbers::pi / 4.0;
            const double factor = std::max(static_cast<double>(r.iterations) / predicted,
                                           predicted / static_cast<double>(std::max<std::size_t>(r.iterations, 1)));
            worst_factor = std::max(worst_factor, factor);
            v.require(r.iterations >= 1 && factor <= 2.0, "delta'=" + fmt(dp) + " k=" + std::to_string(k) + ": " +
                                                               std::to_string(r.iterations) + " iterations vs " +
                                                               fmt(predicted));
        }
    }
    v.detail << "quarter case " << q.iterations << " iteration -> " << fmt(q.amplified_probability)
             << ", min fidelity " << fmt(worst_fidelity) << ", worst iteration factor " << fmt(worst_factor);
}

void ac8(Verdict &v) {
    double worst_e = 0.0;
    std::size_t checked = 0;
    const std::vector<PauliSum> models{heisenberg_dimer(1.0), kitaev_bond(1.0), build_kitaev(bundled("honeycomb12"), 1.0),
                                       build_kagome_heisenberg(bundled("kagome12"), 1.0)};
    std::vector<std::size_t> ks;
    for (std::size_t k = 1; k <= 1000; ++k) {
        ks.push_back(k);
    }
    for (double x = 3.0; x <= 6.0 + 1e-9; x += 0.125) {
        ks.push_back(static_cast<std::size_t>(std::llround(std::pow(10.0, x))));
    }
    for (const PauliSum &h : models) {
        const SpectrumResult s = extremal_eigenvalues(h);
        const ModelInstance zero = finalize_model(h, s.e_min, s.e_max, 0.0);
        for (std::size_t k : ks) {
            const ModelInstance m = finalize_model(h, s.e_min, s.e_max, 1.0 / static_cast<double>(k));
            const double p = amplification_prefactor(m.lambda, m.h_prime_norm(), k);
            worst_e = std::max(worst_e, p);
            v.require(p <= std::numbers::e, "prefactor " + fmt(p) + " at k=" + std::to_string(k));
            const double one = amplification_prefactor(zero.lambda, zero.h_prime_norm(), k);
            v.require(one == 1.0, "delta'=0 prefactor " + fmt(one));
            ++checked;
        }
    }

    const PauliSum h = heisenberg_dimer(1.0);
    const EigenSystem es = eigensystem(h);
    double worst_ratio = 0.0;
    {
        const ModelInstance m = instance(h, es, 0.0);
        const std::vector<double> ev(es.values.data(), es.values.data() + es.values.size());
        for (std::size_t k = 1; k <= 10; ++k) {
            for (int variant = 0; variant < 2; ++variant) {
                EstimateOptions o;
                o.cost = CostModel::from_lcu(m.h_prime);
                o.statistics = variant == 0 ? power_statistics(m, es, haar(2, 50 + k), k)
                                            : averaged_power_statistics(m, ev, k);
                const ResourceEstimate r = total_complexity(m, k, 1e-3, o);
                const double ratio = *r.theorem_exact / r.theorem_replacement;
                worst_ratio = std::max(worst_ratio, ratio);
                v.require(ratio <= 1.0, "exact/replacement " + fmt(ratio) + " at k=" + std::to_string(k));
            }
        }
    }
    v.detail << checked << " (model, k) pairs, max prefactor at delta'=1/k " << fmt(worst_e)
             << ", max exact/replacement " << fmt(worst_ratio);
}

// Mean beta linearly interpolated between measured k.
double beta_at(const TraceEnsemble &e, double k) {
    const auto i = static_cast<std::size_t>(std::floor(k));
    if (i + 1 >= e.stats.size()) {
        return e.stats.back().beta.mean;
    }
    const double t = k - static_cast<double>(i);
    return (1.0 - t) * e.stats[i].beta.mean + t * e.stats[i + 1].beta.mean;
}

void ac9(Verdict &v) {
    EnsembleOptions opts;
    opts.samples = 25;
    std::vector<TraceEnsemble> ens;
    std::vector<double> sizes;
    for (const char *name : {"honeycomb8", "honeycomb12"}) {
        const PauliSum h = build_kitaev(bundled(name), 1.0);
        opts.k_max = 60 * h.n_sites();
        ens.push_back(run_ensemble(instance(h, 0.0), opts));
        sizes.push_back(static_cast<double>(h.n_sites()));
    }
    double worst = 0.0;
    double t_lo = 1e300;
    double t_hi = 0.0;
    std::size_t points = 0;
    for (std::size_t a = 0; a < 2; ++a) {
        const std::size_t b = 1 - a;
        for (std::size_t k = 1; k < ens[a].stats.size(); ++k) {
            const double t = ens[a].stats[k].temperature.mean;
            if (t < 0.1 || t > 10.0) {
                continue;
            }
            const double kb = static_cast<double>(k) * sizes[b] / sizes[a];
            if (kb < 1.0 || kb > static_cast<double>(ens[b].stats.size() - 1)) {
                continue;
            }
            const double tb = 1.0 / beta_at(ens[b], kb);
            const double rel = std::abs(tb - t) / t;
            worst = std::max(worst, rel);
            t_lo = std::min(t_lo, t);
            t_hi = std::max(t_hi, t);
            ++points;
        }
    }
    v.require(points > 0, "no overlap");
    v.require(worst <= 0.10, "max relative T difference " + fmt(worst));
    v.detail << points << " points over T in [" << fmt(t_lo) << ", " << fmt(t_hi) << "], max relative difference "
             << fmt(worst);
}

struct Criterion {
    int id;
    const char *title;
    std::function<void(Verdict &)> run;
};

}  // namespace
}  // namespace qtpq

int main(int argc, char **argv) {
    using namespace qtpq;
    const std::vector<Criterion> all{
        {1, "block-encoding identity", ac1},
        {2, "post-selected monomial probability", ac2},
        {3, "squared norm vs k, Kitaev N=12", ac3},
        {4, "energy vs canonical ensemble, Kitaev N=12", ac4},
        {5, "cooling reach", ac5},
        {6, "trace-distance bound and closed loop", ac6},
        {7, "amplitude amplification", ac7},
        {8, "estimator algebra", ac8},
        {9, "temperature vs k/N collapse, Kitaev N=8,12", ac9},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) {
        selected.insert(std::atoi(argv[i]));
    }
    int failures = 0;
    for (const auto &c : all) {
        if (!selected.empty() && !selected.count(c.id)) {
            continue;
        }
        Verdict v;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c.run(v);
        } catch (const std::exception &e) {
            v.pass = false;
            v.detail << "exception: " << e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failures += v.pass ? 0 : 1;
        std::printf("AC%d %s  %s: %s [%.1f s]\n", c.id, v.pass ? "PASS" : "FAIL", c.title, v.detail.str().c_str(),
                    secs);
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
