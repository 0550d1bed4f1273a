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

#include "qtpq/tpq.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "qtpq/error.hpp"
#include "qtpq/rng.hpp"

namespace qtpq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void fill_thermo(TpqRecord &r, double shift) {
    r.squared_norm_scaled = std::exp(r.log_squared_norm_scaled);
    if (r.k == 0) {
        r.beta = 0.0;
        r.temperature = kInf;
    } else {
        r.beta = 2.0 * static_cast<double>(r.k) / (shift - r.energy);
        r.temperature = 1.0 / r.beta;
    }
}

FieldStats stats_of(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const auto n = static_cast<double>(values.size());
    if (values.front() == values.back()) {
        return {values.front(), 0.0};
    }
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    const double mean = sum / n;
    double ss = 0.0;
    for (double v : values) {
        ss += (v - mean) * (v - mean);
    }
    return {mean, values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0};
}

double log_mean_exp(std::vector<double> logs) {
    std::sort(logs.begin(), logs.end());
    const double top = logs.back();
    if (!std::isfinite(top)) {
        return top;
    }
    double acc = 0.0;
    for (double l : logs) {
        acc += std::exp(l - top);
    }
    return top + std::log(acc / static_cast<double>(logs.size()));
}

}  // namespace

TpqState random_state(std::size_t n_sites, std::uint64_t seed, std::size_t sample_id) {
    if (n_sites == 0 || n_sites > kMaxSites) {
        throw Error(ErrorKind::InvalidArgument, "random_state: n_sites out of range");
    }
    RandomSource rng(seed);
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n_sites);
    Eigen::VectorXcd amplitudes(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        amplitudes[i] = rng.complex_normal();
    }
    amplitudes.normalize();
    return TpqState{Statevector(n_sites, std::move(amplitudes)), 0.0, 0, sample_id, seed};
}

TpqState step(const TpqState &state, const PauliSum &h_prime, double scale) {
    if (!(scale > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "TPQ normalization scale must be positive");
    }
    Statevector w = apply(h_prime, state.vector);
    const double norm = w.norm();
    if (norm == 0.0 || !std::isfinite(norm)) {
        throw Error(ErrorKind::Numerical, "(L - H)|psi> vanished at k = " + std::to_string(state.k));
    }
    return TpqState{Statevector(w.n_sites(), w.amplitudes() / norm), state.log_norm_scaled + std::log(norm / scale),
                    state.k + 1, state.sample_id, state.seed};
}

TpqState step(const TpqState &state, const ModelInstance &model) {
    return step(state, model.h_prime, model.lambda);
}

TpqRecord measure(const TpqState &state, const ModelInstance &model, std::span<const ObservableSpec> observables) {
    if (state.vector.n_sites() != model.n_sites()) {
        throw Error(ErrorKind::DimensionMismatch, "measure: state and model sizes differ");
    }
    TpqRecord r;
    r.sample_id = state.sample_id;
    r.k = state.k;
    r.log_squared_norm_scaled = 2.0 * state.log_norm_scaled;
    r.energy = expectation(model.hamiltonian, state.vector);
    fill_thermo(r, model.shift);
    for (const auto &obs : observables) {
        r.observables[obs.name] = expectation(obs.op, state.vector);
    }
    return r;
}

std::vector<KStatistics> aggregate(const std::vector<std::vector<TpqRecord>> &traces,
                                   const std::vector<std::string> &observable_names) {
    if (traces.empty()) {
        throw Error(ErrorKind::InvalidArgument, "aggregate: no traces");
    }
    const std::size_t n_k = traces.front().size();
    for (const auto &t : traces) {
        if (t.size() != n_k) {
            throw Error(ErrorKind::InvalidArgument, "aggregate: traces have different lengths");
        }
    }
    std::vector<KStatistics> out(n_k);
    std::vector<double> buf(traces.size());
    auto collect = [&](std::size_t idx, auto field) {
        for (std::size_t s = 0; s < traces.size(); ++s) {
            buf[s] = field(traces[s][idx]);
        }
        return buf;
    };
    for (std::size_t idx = 0; idx < n_k; ++idx) {
        KStatistics &st = out[idx];
        st.k = traces.front()[idx].k;
        for (const auto &t : traces) {
            if (t[idx].k != st.k) {
                throw Error(ErrorKind::InvalidArgument, "aggregate: traces use different k grids");
            }
        }
        st.squared_norm_scaled = stats_of(collect(idx, [](const TpqRecord &r) { return r.squared_norm_scaled; }));
        st.log_mean_squared_norm_scaled =
            log_mean_exp(collect(idx, [](const TpqRecord &r) { return r.log_squared_norm_scaled; }));
        st.energy = stats_of(collect(idx, [](const TpqRecord &r) { return r.energy; }));
        st.beta = stats_of(collect(idx, [](const TpqRecord &r) { return r.beta; }));
        st.temperature = stats_of(collect(idx, [](const TpqRecord &r) { return r.temperature; }));
        for (const auto &name : observable_names) {
            st.observables[name] = stats_of(collect(idx, [&](const TpqRecord &r) { return r.observables.at(name); }));
        }
    }
    return out;
}

namespace {

std::vector<TpqRecord> run_trace(const ModelInstance &model, double scale, std::size_t k_max, std::size_t sample_id,
                                 std::uint64_t seed, std::span<const ObservableSpec> observables) {
    std::vector<TpqRecord> trace;
    trace.reserve(k_max + 1);
    TpqState state = random_state(model.n_sites(), seed, sample_id);
    const std::size_t dim = state.vector.dimension();
    Eigen::VectorXcd v = state.vector.amplitudes();
    Eigen::VectorXcd w(v.size());
    double log_norm = 0.0;
    for (std::size_t k = 0; k <= k_max; ++k) {
        try {
            apply_into(model.h_prime, {v.data(), dim}, {w.data(), dim});
            TpqRecord r;
            r.sample_id = sample_id;
            r.k = k;
            r.log_squared_norm_scaled = 2.0 * log_norm;
            // <v|H|v> = L - <v|H'|v> for unit v.
            r.energy = model.shift - v.dot(w).real();
            fill_thermo(r, model.shift);
            if (!observables.empty()) {
                const Statevector sv(model.n_sites(), v);
                for (const auto &obs : observables) {
                    r.observables[obs.name] = expectation(obs.op, sv);
                }
            }
            trace.push_back(std::move(r));
            if (k == k_max) {
                break;
            }
            const double norm = w.norm();
            if (norm == 0.0 || !std::isfinite(norm)) {
                throw Error(ErrorKind::Numerical, "(L - H)|psi> vanished");
            }
            log_norm += std::log(norm / scale);
            v = w / norm;
        } catch (const Error &e) {
            throw Error(e.kind(), "sample " + std::to_string(sample_id) + ", k " + std::to_string(k) + ": " + e.what());
        }
    }
    return trace;
}

}  // namespace

TraceEnsemble run_ensemble(const ModelInstance &model, const EnsembleOptions &options,
                           std::span<const ObservableSpec> observables) {
    if (options.samples == 0) {
        throw Error(ErrorKind::InvalidArgument, "run_ensemble: samples must be >= 1");
    }
    if (options.k_max == 0) {
        throw Error(ErrorKind::InvalidArgument, "run_ensemble: k_max must be >= 1");
    }
    if (!options.seeds.empty() && options.seeds.size() != options.samples) {
        throw Error(ErrorKind::InvalidArgument, "run_ensemble: seed list length must equal samples");
    }
    for (const auto &obs : observables) {
        if (obs.op.n_sites() != model.n_sites()) {
            throw Error(ErrorKind::DimensionMismatch, "observable '" + obs.name + "' acts on the wrong number of sites");
        }
    }
    TraceEnsemble ensemble;
    ensemble.scale = options.scale.value_or(model.lambda);
    if (!(ensemble.scale > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "run_ensemble: normalization scale must be positive");
    }
    for (const auto &obs : observables) {
        ensemble.observable_names.push_back(obs.name);
    }
    ensemble.seeds = options.seeds;
    if (ensemble.seeds.empty()) {
        for (std::size_t i = 0; i < options.samples; ++i) {
            ensemble.seeds.push_back(stream_seed(options.base_seed, i));
        }
    }

    ensemble.traces.resize(options.samples);
    std::vector<std::exception_ptr> failures(options.samples);
    const std::size_t hw = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    const std::size_t n_threads = std::min(options.samples, options.threads == 0 ? hw : options.threads);
    auto worker = [&](std::size_t first) {
        for (std::size_t s = first; s < options.samples; s += n_threads) {
            try {
                ensemble.traces[s] = run_trace(model, ensemble.scale, options.k_max, s, ensemble.seeds[s], observables);
            } catch (...) {
                failures[s] = std::current_exception();
            }
        }
    };
    if (n_threads <= 1) {
        worker(0);
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < n_threads; ++t) {
            pool.emplace_back(worker, t);
        }
    }
    for (const auto &f : failures) {
        if (f) {
            std::rethrow_exception(f);
        }
    }
    ensemble.stats = aggregate(ensemble.traces, ensemble.observable_names);
    return ensemble;
}

}  // namespace qtpq
