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

#include "qtpq/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qtpq/error.hpp"
#include "qtpq/numfmt.hpp"
#include "qtpq/quantum.hpp"
#include "qtpq/resources.hpp"
#include "qtpq/rng.hpp"
#include "qtpq/tpq.hpp"
#include "qtpq/trace_io.hpp"

#ifndef QTPQ_CLUSTER_DIR
#define QTPQ_CLUSTER_DIR "clusters"
#endif

namespace qtpq {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

std::string stem_of(const std::string &path) {
    return fs::path(path).stem().string();
}

std::string escape_quotes(const std::string &s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') {
            out += '\\';
        }
        out += (c == '\n') ? ' ' : c;
    }
    return out;
}

void report_error(std::ostream &err, std::string_view kind, const std::string &message) {
    err << "error: kind=" << kind << " message=\"" << escape_quotes(message) << "\"\n";
}

int exit_code_for(ErrorKind kind) {
    return (kind == ErrorKind::NotConverged || kind == ErrorKind::Numerical) ? kExitCheckFailed : kExitUsage;
}

std::string timestamp_utc() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string delta_tag(double dp) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", dp);
    return buf;
}

std::ofstream open_output(const fs::path &path) {
    std::ofstream f(path);
    if (!f) {
        throw Error(ErrorKind::Io, "cannot write " + path.string());
    }
    return f;
}

Json json_number(double v) {
    if (std::isfinite(v)) {
        return v;
    }
    return format_double(v);
}

}  // namespace

BuiltModel build_model(const ModelConfig &config) {
    BuiltModel b{"", std::nullopt, PauliSum(1), {}};
    if (config.kind == "heisenberg-dimer") {
        b.name = "heisenberg-dimer";
        b.hamiltonian = heisenberg_dimer(config.coupling);
    } else if (config.kind == "kitaev-bond") {
        b.name = "kitaev-bond";
        b.hamiltonian = kitaev_bond(config.coupling);
    } else if (config.kind == "kitaev" || config.kind == "kagome") {
        ClusterSpec cluster = read_cluster_file(resolve_cluster_path(config.cluster));
        if (config.kind == "kitaev") {
            if (cluster.kind != LatticeKind::Honeycomb) {
                throw Error(ErrorKind::InvalidArgument, "kitaev model needs a honeycomb cluster");
            }
            b.hamiltonian = build_kitaev(cluster, config.coupling);
        } else {
            if (cluster.kind != LatticeKind::Kagome) {
                throw Error(ErrorKind::InvalidArgument, "kagome model needs a kagome cluster");
            }
            b.hamiltonian = build_kagome_heisenberg(cluster, config.coupling);
        }
        b.name = config.kind + "_" + cluster.name;
        b.cluster = std::move(cluster);
    } else if (config.kind == "pauli") {
        b.hamiltonian = read_pauli_sum_file(config.hamiltonian);
        b.name = stem_of(config.hamiltonian);
    } else {
        throw Error(ErrorKind::InvalidArgument, "unknown model kind '" + config.kind + "'");
    }
    b.spectrum = extremal_eigenvalues(b.hamiltonian);
    return b;
}

ModelInstance instantiate(const BuiltModel &built, double delta_prime, const ModelConfig &config) {
    return finalize_model(built.hamiltonian, built.spectrum.e_min, built.spectrum.e_max, delta_prime, config.coupling,
                          ShiftPolicy{config.eta_per_site});
}

std::vector<ObservableSpec> resolve_observables(const BuiltModel &built, const std::vector<std::string> &names) {
    std::vector<ObservableSpec> out;
    for (const auto &name : names) {
        if (name == "plaquettes" || name.rfind("W_p:", 0) == 0) {
            if (!built.cluster || built.cluster->kind != LatticeKind::Honeycomb) {
                throw Error(ErrorKind::InvalidArgument, "plaquette observables need a honeycomb cluster");
            }
            if (name == "plaquettes") {
                for (const auto &p : find_plaquettes(*built.cluster)) {
                    out.push_back(plaquette_observable(*built.cluster, p));
                }
                continue;
            }
            const auto sites = parse_size_list(name.substr(4));
            if (sites.size() != 6) {
                throw Error(ErrorKind::InvalidArgument, "W_p needs exactly six sites: '" + name + "'");
            }
            std::array<std::size_t, 6> arr{};
            std::copy(sites.begin(), sites.end(), arr.begin());
            out.push_back(plaquette_observable(*built.cluster, arr));
            continue;
        }
        throw Error(ErrorKind::InvalidArgument, "unknown observable '" + name + "'");
    }
    return out;
}

ModelConfig model_from_entry(const std::string &entry, const ModelConfig &base) {
    ModelConfig m = base;
    const auto colon = entry.find(':');
    if (colon == std::string::npos) {
        m.kind = entry;
    } else {
        m.kind = entry.substr(0, colon);
        m.cluster = entry.substr(colon + 1);
    }
    return m;
}

namespace {

// ---------------------------------------------------------------- spectrum

int cmd_spectrum(const ExperimentConfig &cfg, bool full, std::ostream &out) {
    const BuiltModel built = build_model(cfg.model);
    Json j;
    j["model"] = built.name;
    j["n_sites"] = built.hamiltonian.n_sites();
    j["dimension"] = built.hamiltonian.dimension();
    j["e_min"] = built.spectrum.e_min;
    j["e_max"] = built.spectrum.e_max;
    j["residual_min"] = built.spectrum.residual_norms[0];
    j["residual_max"] = built.spectrum.residual_norms[1];
    j["matvecs"] = built.spectrum.iterations;
    Json rows = Json::array();
    for (double dp : cfg.run.delta_primes) {
        const ModelInstance m = instantiate(built, dp, cfg.model);
        rows.push_back({{"delta_prime", dp},
                        {"L", m.shift},
                        {"eta", m.eta},
                        {"lambda", m.lambda},
                        {"alpha", m.alpha},
                        {"h_prime_norm", m.h_prime_norm()}});
    }
    j["instances"] = rows;
    if (full) {
        j["eigenvalues"] = full_spectrum(built.hamiltonian);
    }
    out << j.dump() << '\n';
    return kExitOk;
}

// --------------------------------------------------------------------- run

Json metadata_json(const ExperimentConfig &cfg, const BuiltModel &built, const ModelInstance &m,
                   const TraceEnsemble &ens, std::size_t k_max, const Json &files) {
    Json j;
    j["model"] = built.name;
    j["model_hash"] = model_hash(m.hamiltonian);
    j["n_sites"] = m.n_sites();
    j["dimension"] = m.hamiltonian.dimension();
    j["delta_prime"] = m.delta_prime;
    j["coupling"] = m.coupling;
    j["L"] = m.shift;
    j["eta"] = m.eta;
    j["e_min"] = m.e_min;
    j["e_max"] = m.e_max;
    j["lambda"] = m.lambda;
    j["alpha"] = m.alpha;
    j["samples"] = cfg.run.samples;
    j["k_max"] = k_max;
    j["base_seed"] = cfg.run.seed;
    j["seeds"] = ens.seeds;
    j["generator"] = std::string(kGeneratorName);
    j["observables"] = ens.observable_names;
    j["files"] = files;
    j["config"] = Json::parse(config_to_json(cfg));
    j["timestamp"] = timestamp_utc();
    return j;
}

int cmd_run(const ExperimentConfig &cfg, std::ostream &out) {
    const BuiltModel built = build_model(cfg.model);
    const auto observables = resolve_observables(built, cfg.run.observables);
    const std::size_t k_max = cfg.run.k_max == 0 ? 50 * built.hamiltonian.n_sites() : cfg.run.k_max;
    const fs::path dir(cfg.output_dir);
    fs::create_directories(dir);

    for (double dp : cfg.run.delta_primes) {
        const ModelInstance m = instantiate(built, dp, cfg.model);
        EnsembleOptions opts;
        opts.samples = cfg.run.samples;
        opts.k_max = k_max;
        opts.base_seed = cfg.run.seed;
        opts.threads = cfg.run.threads;
        const TraceEnsemble ens = run_ensemble(m, opts, observables);

        const std::string prefix = built.name + "_dp" + delta_tag(dp);
        Json files;
        files["trace"] = prefix + "_trace.csv";
        files["summary"] = prefix + "_summary.csv";
        {
            auto f = open_output(dir / files["trace"].get<std::string>());
            write_trace_csv(f, ens);
        }
        {
            auto f = open_output(dir / files["summary"].get<std::string>());
            write_summary_csv(f, ens);
        }
        if (cfg.run.alpha_baseline) {
            EnsembleOptions base = opts;
            base.scale = m.alpha;
            const TraceEnsemble alpha_ens = run_ensemble(m, base, {});
            files["alpha_summary"] = prefix + "_alpha_summary.csv";
            auto f = open_output(dir / files["alpha_summary"].get<std::string>());
            write_summary_csv(f, alpha_ens);
        }
        files["metadata"] = prefix + "_meta.json";
        {
            auto f = open_output(dir / files["metadata"].get<std::string>());
            f << metadata_json(cfg, built, m, ens, k_max, files).dump(2) << '\n';
        }
        out << "wrote " << (dir / files["summary"].get<std::string>()).string() << '\n';
    }
    return kExitOk;
}

// ------------------------------------------------------------------ verify

struct VerifyTally {
    std::size_t passed = 0;
    std::size_t failed = 0;
    std::size_t informative = 0;
};

class VerifyReporter {
   public:
    VerifyReporter(std::ostream &out, VerifyTally &tally) : out_(out), tally_(tally) {
    }

    void emit(Json record, bool pass, bool informative = false) {
        record["pass"] = pass;
        if (informative) {
            record["informative"] = true;
            ++tally_.informative;
        } else if (pass) {
            ++tally_.passed;
        } else {
            ++tally_.failed;
        }
        out_ << record.dump() << '\n';
    }

   private:
    std::ostream &out_;
    VerifyTally &tally_;
};

Json base_record(const std::string &check, const std::string &model, std::optional<std::size_t> k,
                 std::optional<double> epsilon) {
    Json j;
    j["check"] = check;
    j["model"] = model;
    j["k"] = k ? Json(*k) : Json(nullptr);
    j["epsilon"] = epsilon ? json_number(*epsilon) : Json(nullptr);
    j["lhs"] = nullptr;
    j["rhs"] = nullptr;
    return j;
}

double emulation_epsilon(const ModelInstance &m) {
    return 0.5 * (m.lambda - m.h_prime_norm()) / m.lambda;
}

void verify_model(const ExperimentConfig &cfg, const ModelConfig &mc, VerifyReporter &rep) {
    const VerifyConfig &vc = cfg.verify;
    const auto has = [&](const char *name) {
        return std::find(vc.checks.begin(), vc.checks.end(), name) != vc.checks.end();
    };
    const BuiltModel built = build_model(mc);
    const ModelInstance m = instantiate(built, vc.delta_prime, mc);
    const EigenSystem es = eigensystem(m.hamiltonian, kDefaultBlockEncodingQubits - 1);
    const Statevector psi = random_state(m.n_sites(), vc.seed).vector;
    const std::string &name = built.name;
    constexpr double kTol = 1e-10;

    auto guarded = [&](Json record, auto &&body) {
        try {
            body(record);
        } catch (const Error &e) {
            record["error"] = std::string(to_string(e.kind())) + ": " + e.what();
            rep.emit(std::move(record), false);
        }
    };

    if (has("block")) {
        guarded(base_record("block", name, std::nullopt, std::nullopt), [&](Json &r) {
            const BlockEncoding be = build_lcu_unitary(m.h_prime);
            const double lhs = std::max(be.block_residual(dense_matrix(m.h_prime)), be.unitarity_residual());
            r["lhs"] = lhs;
            r["rhs"] = kTol;
            r["n_ancilla"] = be.n_ancilla;
            r["alpha"] = be.subnormalization;
            rep.emit(r, lhs <= kTol);
        });
    }
    const double eps_emul = emulation_epsilon(m);
    const PerturbationMode modes[] = {PerturbationMode::Zero, PerturbationMode::Random, PerturbationMode::Adversarial};
    if (has("amplified_block")) {
        for (PerturbationMode mode : modes) {
            const double eps = mode == PerturbationMode::Zero ? 0.0 : eps_emul;
            guarded(base_record("amplified_block", name, std::nullopt, eps), [&](Json &r) {
                const AmplifiedEncoding enc = emulate_amplified_encoding(m, es, eps, mode, vc.seed);
                const double lhs = std::max(enc.encoding.block_residual(enc.spectrum.perturbed_matrix()),
                                            enc.encoding.unitarity_residual());
                r["mode"] = to_string(mode);
                r["lhs"] = lhs;
                r["rhs"] = kTol;
                rep.emit(r, lhs <= kTol);
            });
        }
    }
    if (has("monomial")) {
        for (std::size_t k : vc.k) {
            for (PerturbationMode mode : modes) {
                const double eps = mode == PerturbationMode::Zero ? 0.0 : eps_emul;
                guarded(base_record("monomial", name, k, eps), [&](Json &r) {
                    const AmplifiedEncoding enc = emulate_amplified_encoding(m, es, eps, mode, vc.seed);
                    const MonomialResult res = apply_monomial(enc.encoding, k, psi);
                    const Eigen::VectorXcd c = es.vectors.adjoint() * psi.amplitudes();
                    const Eigen::VectorXd e = enc.spectrum.perturbed() / m.lambda;
                    double oracle = 0.0;
                    for (Eigen::Index n = 0; n < c.size(); ++n) {
                        oracle += std::norm(c[n]) * std::pow(e[n], 2.0 * static_cast<double>(k));
                    }
                    const double lhs = std::abs(res.success_probability - oracle) / oracle;
                    r["mode"] = to_string(mode);
                    r["lhs"] = lhs;
                    r["rhs"] = kTol;
                    r["success_probability"] = res.success_probability;
                    rep.emit(r, lhs <= kTol);
                });
            }
        }
    }
    if (has("bound")) {
        for (std::size_t k : vc.k) {
            const double eps = vc.epsilon.value_or(trace_bound_epsilon_ceiling(m, k));
            guarded(base_record("bound", name, k, eps), [&](Json &r) {
                const auto reports = verify_appendix_a(m, es, psi, k, eps, vc.trials, vc.seed);
                std::size_t violations = 0;
                const BoundReport *worst = &reports.front();
                for (const auto &rp : reports) {
                    violations += rp.all_ok() ? 0 : 1;
                    if (rp.lhs - rp.rhs > worst->lhs - worst->rhs) {
                        worst = &rp;
                    }
                }
                r["lhs"] = worst->lhs;
                r["rhs"] = worst->rhs;
                r["trials"] = reports.size();
                r["violations"] = violations;
                rep.emit(r, violations == 0);
            });
        }
    }
    if (has("closed_loop")) {
        for (std::size_t k : vc.k) {
            guarded(base_record("closed_loop", name, k, std::nullopt), [&](Json &r) {
                const double budget = epsilon_for_target(m, es, psi, k, vc.epsilon_prime);
                const double eps = vc.epsilon.value_or(budget);
                r["epsilon"] = eps;
                r["budget"] = budget;
                const auto reports = verify_appendix_a(m, es, psi, k, eps, vc.trials, vc.seed);
                double lhs = 0.0;
                for (const auto &rp : reports) {
                    lhs = std::max(lhs, rp.lhs);
                }
                r["lhs"] = lhs;
                r["rhs"] = vc.epsilon_prime;
                rep.emit(r, lhs <= vc.epsilon_prime, eps > budget);
            });
        }
    }
    if (has("amplification")) {
        for (std::size_t k : vc.k) {
            guarded(base_record("amplification", name, k, 0.0), [&](Json &r) {
                const AmplifiedEncoding enc = emulate_amplified_encoding(m, es, 0.0, PerturbationMode::Zero, vc.seed);
                const AmplificationResult res = amplitude_amplify(enc.encoding, k, psi);
                const double theta = std::asin(std::sqrt(res.initial_probability));
                const double predicted = std::pow(std::sin(static_cast<double>(2 * res.iterations + 1) * theta), 2);
                const double fidelity = std::norm(res.good_before.amplitudes().dot(res.good_after.amplitudes()));
                r["lhs"] = std::abs(res.amplified_probability - predicted);
                r["rhs"] = kTol;
                r["iterations"] = res.iterations;
                r["initial_probability"] = res.initial_probability;
                r["amplified_probability"] = res.amplified_probability;
                r["fidelity"] = fidelity;
                rep.emit(r, std::abs(res.amplified_probability - predicted) <= kTol && fidelity >= 1.0 - 1e-9);
            });
        }
    }
}

int cmd_verify(const ExperimentConfig &cfg, std::optional<ModelConfig> single, std::ostream &out) {
    VerifyTally tally;
    VerifyReporter rep(out, tally);
    if (!cfg.verify.checks.empty()) {
        std::vector<ModelConfig> models;
        if (single) {
            models.push_back(*single);
        } else {
            for (const auto &entry : cfg.verify.models) {
                models.push_back(model_from_entry(entry, cfg.model));
            }
        }
        for (const auto &mc : models) {
            verify_model(cfg, mc, rep);
        }
    }
    Json summary;
    summary["summary"] = true;
    summary["passed"] = tally.passed;
    summary["failed"] = tally.failed;
    summary["informative"] = tally.informative;
    out << summary.dump() << '\n';
    return tally.failed == 0 ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------- estimate

std::string csv_opt(const std::optional<double> &v) {
    return v ? format_double(*v) : std::string();
}

std::string csv_quote(const std::string &s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + "\"";
}

int cmd_estimate_scaling(const ExperimentConfig &cfg, std::ostream &out) {
    out << "n_sites,epsilon_prime,gap,sqrt_d,polylog_exponent,polylog,log_factor,value,formula,status\n";
    for (std::size_t n : cfg.estimate.n) {
        out << n << ',' << format_double(cfg.estimate.epsilon_prime) << ',' << format_double(cfg.estimate.gap) << ',';
        try {
            const ScalingEstimate s = spin_system_scaling(n, cfg.estimate.epsilon_prime, cfg.estimate.gap);
            out << format_double(s.sqrt_d) << ',' << s.polylog_exponent << ',' << format_double(s.polylog) << ','
                << format_double(s.log_factor) << ',' << format_double(s.value) << ',' << csv_quote(s.formula) << ','
                << csv_quote("ok") << '\n';
        } catch (const Error &e) {
            out << ",,,,,," << csv_quote(std::string("error: ") + std::string(to_string(e.kind())) + ": " + e.what())
                << '\n';
        }
    }
    return kExitOk;
}

int cmd_estimate(const ExperimentConfig &cfg, std::ostream &out) {
    const EstimateConfig &ec = cfg.estimate;
    if (ec.mode == "scaling") {
        return cmd_estimate_scaling(cfg, out);
    }
    const BuiltModel built = build_model(cfg.model);
    const std::size_t n = built.hamiltonian.n_sites();
    const bool exact = ec.exact_statistics == "on" || (ec.exact_statistics == "auto" && n <= 10);
    std::vector<double> eigenvalues;
    if (exact) {
        eigenvalues = full_spectrum(built.hamiltonian);
    }

    out << "model,n_sites,k,delta_prime,epsilon_prime,delta,prefactor,epsilon_exact,epsilon_replacement,epsilon,"
           "amplified_encoding_cost,qet_calls,qet_primitive,odd_k_plain,aa_steps,aa_source,per_v_cost,total,"
           "theorem_exact,theorem_replacement,n_a,qubits,status\n";

    std::vector<std::pair<std::size_t, double>> grid;
    if (ec.sweep == "k") {
        for (double dp : ec.delta_primes) {
            for (std::size_t k : ec.k) {
                grid.emplace_back(k, dp);
            }
        }
    } else {
        for (std::size_t k : ec.k) {
            for (double dp : ec.delta_primes) {
                grid.emplace_back(k, dp);
            }
        }
    }

    for (const auto &[k, dp] : grid) {
        const ModelInstance m = instantiate(built, dp, cfg.model);
        EstimateOptions opts;
        opts.cost = CostModel::from_lcu(m.h_prime, ec.per_unitary_cost);
        out << built.name << ',' << n << ',' << k << ',' << format_double(dp) << ','
            << format_double(ec.epsilon_prime) << ',';
        std::string prefactor;
        try {
            prefactor = format_double(amplification_prefactor(m.lambda, m.h_prime_norm(), k));
        } catch (const Error &) {
        }
        const std::size_t qubits = n + opts.cost.n_a + 2;
        try {
            if (k == 0) {
                throw Error(ErrorKind::InvalidArgument, "k must be >= 1");
            }
            if (exact) {
                opts.statistics = averaged_power_statistics(m, eigenvalues, k);
            }
            const ResourceEstimate r = total_complexity(m, k, ec.epsilon_prime, opts);
            out << format_double(r.delta) << ',' << prefactor << ',' << csv_opt(r.epsilon_exact) << ','
                << format_double(r.epsilon_replacement) << ',' << format_double(r.epsilon) << ','
                << format_double(r.amplified_encoding.value) << ',' << r.qet.controlled_calls << ','
                << format_double(r.qet.primitive) << ',' << (r.qet.odd_plain_substitution ? "true" : "false") << ','
                << r.aa_steps << ',' << r.aa_source << ',' << format_double(r.per_v_cost) << ','
                << format_double(r.total) << ',' << csv_opt(r.theorem_exact) << ','
                << format_double(r.theorem_replacement) << ',' << r.n_a << ',' << r.qubits << ',' << csv_quote("ok")
                << '\n';
        } catch (const Error &e) {
            out << ',' << prefactor << ",,,,,,,,,,,,,,," << opts.cost.n_a << ',' << qubits << ','
                << csv_quote(std::string("error: ") + std::string(to_string(e.kind())) + ": " + e.what()) << '\n';
        }
    }
    return kExitOk;
}

// ---------------------------------------------------------------- clusters

int cmd_clusters_list(std::ostream &out) {
    std::vector<fs::path> files;
    for (const auto &entry : fs::directory_iterator(QTPQ_CLUSTER_DIR)) {
        if (entry.path().extension() == ".txt") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    out << "name,kind,n_sites,bonds,plaquettes\n";
    for (const auto &p : files) {
        const ClusterSpec c = read_cluster_file(p.string());
        const std::size_t plaquettes = c.kind == LatticeKind::Honeycomb ? find_plaquettes(c).size() : 0;
        out << c.name << ',' << to_string(c.kind) << ',' << c.n_sites << ',' << c.bonds.size() << ',' << plaquettes
            << '\n';
    }
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"qtpq: microcanonical thermal pure quantum state simulation and verification"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", "qtpq 1.0.0");

    std::string config_path;
    std::string output_dir;
    std::string model_kind;
    std::string cluster;
    std::string hamiltonian;
    double coupling = 1.0;
    double eta_per_site = 0.001;
    app.add_option("-c,--config", config_path, "INI configuration file");
    app.add_option("-o,--output-dir", output_dir, "output directory (default $QTPQ_OUTPUT_DIR or .)");
    auto *o_kind = app.add_option("--model", model_kind, "kitaev | kagome | heisenberg-dimer | kitaev-bond | pauli");
    auto *o_cluster = app.add_option("--cluster", cluster, "cluster file or bundled cluster name");
    auto *o_ham = app.add_option("--hamiltonian", hamiltonian, "Pauli-sum file for --model pauli");
    auto *o_coupling = app.add_option("--coupling", coupling, "coupling J");
    auto *o_eta = app.add_option("--eta-per-site", eta_per_site, "L = E_max + eta_per_site * N");

    std::string delta_primes;
    auto *spectrum = app.add_subcommand("spectrum", "extremal eigenvalues and derived constants (JSON)");
    bool full = false;
    spectrum->add_flag("--full", full, "include all eigenvalues (N <= 12)");
    auto *o_sp_dp = spectrum->add_option("--delta-prime", delta_primes, "comma-separated delta' list");

    auto *run = app.add_subcommand("run", "TPQ ensemble; writes trace/summary CSVs and a metadata sidecar");
    std::string replay;
    std::size_t samples = 0;
    std::size_t k_max = 0;
    std::uint64_t seed = 0;
    std::string observables;
    std::size_t threads = 0;
    bool alpha_baseline = false;
    run->add_option("--replay", replay, "rerun the configuration stored in a metadata sidecar");
    auto *o_run_dp = run->add_option("--delta-prime", delta_primes, "comma-separated delta' list");
    auto *o_samples = run->add_option("--samples", samples, "independent samples");
    auto *o_kmax = run->add_option("--k-max", k_max, "last k (0: 50 N)");
    auto *o_seed = run->add_option("--seed", seed, "base seed");
    auto *o_obs = run->add_option("--observables", observables, "plaquettes | W_p:a,b,c,d,e,f");
    auto *o_threads = run->add_option("--threads", threads, "worker threads (0: all cores)");
    auto *o_alpha = run->add_flag("--alpha-baseline", alpha_baseline, "also record norms scaled by alpha");

    auto *verify = app.add_subcommand("verify", "quantum-layer checks (JSON lines)");
    std::string checks;
    std::string k_list;
    std::size_t trials = 0;
    double epsilon_prime = 0.0;
    double epsilon = 0.0;
    double verify_dp = 0.0;
    auto *o_checks = verify->add_option("--checks", checks, "comma-separated checks (empty: none)");
    auto *o_vk = verify->add_option("--k", k_list, "k values, e.g. 1,3,10 or 1:20");
    auto *o_trials = verify->add_option("--trials", trials, "random perturbations per bound check");
    auto *o_veps_p = verify->add_option("--epsilon-prime", epsilon_prime, "target trace distance eps'");
    auto *o_veps = verify->add_option("--epsilon", epsilon, "inject an amplification precision");
    auto *o_vdp = verify->add_option("--delta-prime", verify_dp, "delta'");
    auto *o_vseed = verify->add_option("--seed", seed, "seed");

    auto *estimate = app.add_subcommand("estimate", "resource estimates (CSV)");
    std::string mode;
    std::string sweep;
    std::string exact_stats;
    std::string n_list;
    double gap = 0.0;
    auto *o_mode = estimate->add_option("--mode", mode, "table | scaling");
    auto *o_sweep = estimate->add_option("--sweep", sweep, "k | delta_prime");
    auto *o_ek = estimate->add_option("--k", k_list, "k values, e.g. 12:600:12");
    auto *o_edp = estimate->add_option("--delta-prime", delta_primes, "comma-separated delta' list");
    auto *o_eeps = estimate->add_option("--epsilon-prime", epsilon_prime, "target precision eps'");
    auto *o_exact = estimate->add_option("--exact-statistics", exact_stats, "auto | on | off");
    auto *o_n = estimate->add_option("--n", n_list, "site counts for --mode scaling");
    auto *o_gap = estimate->add_option("--gap", gap, "L - E_max for --mode scaling");

    auto *clusters = app.add_subcommand("clusters", "bundled clusters");
    clusters->require_subcommand(1);
    auto *clusters_list = clusters->add_subcommand("list", "list bundled clusters (CSV)");

    std::vector<std::string> argv_rest(args.rbegin(), args.rend());
    if (!argv_rest.empty()) {
        argv_rest.pop_back();
    }
    try {
        app.parse(argv_rest);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        ExperimentConfig cfg = default_config();
        if (!replay.empty()) {
            std::ifstream f(replay);
            if (!f) {
                throw Error(ErrorKind::Io, "cannot read " + replay);
            }
            std::stringstream ss;
            ss << f.rdbuf();
            Json meta;
            try {
                meta = Json::parse(ss.str());
            } catch (const nlohmann::json::exception &e) {
                throw Error(ErrorKind::Parse, replay + ": " + e.what());
            }
            if (!meta.contains("config")) {
                throw Error(ErrorKind::Parse, replay + ": no config object");
            }
            cfg = config_from_json(meta["config"].dump());
        }
        if (!config_path.empty()) {
            load_config_file(config_path, cfg);
        }
        if (!output_dir.empty()) {
            cfg.output_dir = output_dir;
        }
        const bool model_flag = o_kind->count() > 0;
        if (model_flag) {
            cfg.model.kind = model_kind;
        }
        if (o_cluster->count() > 0) {
            cfg.model.cluster = cluster;
        }
        if (o_ham->count() > 0) {
            cfg.model.hamiltonian = hamiltonian;
        }
        if (o_coupling->count() > 0) {
            cfg.model.coupling = coupling;
        }
        if (o_eta->count() > 0) {
            cfg.model.eta_per_site = eta_per_site;
        }
        if (o_sp_dp->count() > 0 || o_run_dp->count() > 0) {
            cfg.run.delta_primes = parse_double_list(delta_primes);
        }
        if (o_samples->count() > 0) {
            cfg.run.samples = samples;
        }
        if (o_kmax->count() > 0) {
            cfg.run.k_max = k_max;
        }
        if (o_seed->count() > 0) {
            cfg.run.seed = seed;
        }
        if (o_obs->count() > 0) {
            cfg.run.observables = parse_string_list(observables);
        }
        if (o_threads->count() > 0) {
            cfg.run.threads = threads;
        }
        if (o_alpha->count() > 0) {
            cfg.run.alpha_baseline = alpha_baseline;
        }
        if (o_checks->count() > 0) {
            cfg.verify.checks = parse_string_list(checks);
        }
        if (o_vk->count() > 0) {
            cfg.verify.k = parse_size_list(k_list);
        }
        if (o_trials->count() > 0) {
            cfg.verify.trials = trials;
        }
        if (o_veps_p->count() > 0) {
            cfg.verify.epsilon_prime = epsilon_prime;
        }
        if (o_veps->count() > 0) {
            cfg.verify.epsilon = epsilon;
        }
        if (o_vdp->count() > 0) {
            cfg.verify.delta_prime = verify_dp;
        }
        if (o_vseed->count() > 0) {
            cfg.verify.seed = seed;
        }
        if (o_mode->count() > 0) {
            cfg.estimate.mode = mode;
        }
        if (o_sweep->count() > 0) {
            cfg.estimate.sweep = sweep;
        }
        if (o_ek->count() > 0) {
            cfg.estimate.k = parse_size_list(k_list);
        }
        if (o_edp->count() > 0) {
            cfg.estimate.delta_primes = parse_double_list(delta_primes);
        }
        if (o_eeps->count() > 0) {
            cfg.estimate.epsilon_prime = epsilon_prime;
        }
        if (o_exact->count() > 0) {
            cfg.estimate.exact_statistics = exact_stats;
        }
        if (o_n->count() > 0) {
            cfg.estimate.n = parse_size_list(n_list);
        }
        if (o_gap->count() > 0) {
            cfg.estimate.gap = gap;
        }
        validate_config(cfg);

        if (spectrum->parsed()) {
            return cmd_spectrum(cfg, full, out);
        }
        if (run->parsed()) {
            return cmd_run(cfg, out);
        }
        if (verify->parsed()) {
            return cmd_verify(cfg, model_flag ? std::optional<ModelConfig>(cfg.model) : std::nullopt, out);
        }
        if (estimate->parsed()) {
            return cmd_estimate(cfg, out);
        }
        if (clusters_list->parsed()) {
            return cmd_clusters_list(out);
        }
        report_error(err, "invalid_argument", "no subcommand");
        return kExitUsage;
    } catch (const Error &e) {
        report_error(err, to_string(e.kind()), e.what());
        return exit_code_for(e.kind());
    } catch (const std::exception &e) {
        report_error(err, "internal", e.what());
        return kExitCheckFailed;
    }
}

}  // namespace qtpq
