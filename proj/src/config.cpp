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

#include "qtpq/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <set>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <json.hpp>

#include "qtpq/error.hpp"

#ifndef QTPQ_CLUSTER_DIR
#define QTPQ_CLUSTER_DIR "clusters"
#endif

namespace qtpq {

namespace {

std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string &text, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        out.push_back(trim(text.substr(start, pos == std::string::npos ? std::string::npos : pos - start)));
        if (pos == std::string::npos) {
            break;
        }
        start = pos + 1;
    }
    return out;
}

double parse_double(const std::string &raw) {
    const std::string s = trim(raw);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw Error(ErrorKind::Parse, "not a finite number: '" + raw + "'");
    }
    return v;
}

std::uint64_t parse_u64(const std::string &raw) {
    const std::string s = trim(raw);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
        throw Error(ErrorKind::Parse, "not a non-negative integer: '" + raw + "'");
    }
    return v;
}

bool parse_bool(const std::string &raw) {
    const std::string s = trim(raw);
    if (s == "true" || s == "1" || s == "yes" || s == "on") {
        return true;
    }
    if (s == "false" || s == "0" || s == "no" || s == "off") {
        return false;
    }
    throw Error(ErrorKind::Parse, "not a boolean: '" + raw + "'");
}

using Setter = void (*)(ExperimentConfig &, const std::string &);

const std::map<std::string, std::map<std::string, Setter>> &setters() {
    static const std::map<std::string, std::map<std::string, Setter>> table = {
        {"model",
         {
             {"kind", [](ExperimentConfig &c, const std::string &v) { c.model.kind = trim(v); }},
             {"cluster", [](ExperimentConfig &c, const std::string &v) { c.model.cluster = trim(v); }},
             {"hamiltonian", [](ExperimentConfig &c, const std::string &v) { c.model.hamiltonian = trim(v); }},
             {"coupling", [](ExperimentConfig &c, const std::string &v) { c.model.coupling = parse_double(v); }},
             {"eta_per_site",
              [](ExperimentConfig &c, const std::string &v) { c.model.eta_per_site = parse_double(v); }},
         }},
        {"run",
         {
             {"delta_prime",
              [](ExperimentConfig &c, const std::string &v) { c.run.delta_primes = parse_double_list(v); }},
             {"samples", [](ExperimentConfig &c, const std::string &v) { c.run.samples = parse_u64(v); }},
             {"k_max", [](ExperimentConfig &c, const std::string &v) { c.run.k_max = parse_u64(v); }},
             {"seed", [](ExperimentConfig &c, const std::string &v) { c.run.seed = parse_u64(v); }},
             {"observables",
              [](ExperimentConfig &c, const std::string &v) { c.run.observables = parse_string_list(v); }},
             {"threads", [](ExperimentConfig &c, const std::string &v) { c.run.threads = parse_u64(v); }},
             {"alpha_baseline",
              [](ExperimentConfig &c, const std::string &v) { c.run.alpha_baseline = parse_bool(v); }},
         }},
        {"verify",
         {
             {"models", [](ExperimentConfig &c, const std::string &v) { c.verify.models = parse_string_list(v); }},
             {"checks", [](ExperimentConfig &c, const std::string &v) { c.verify.checks = parse_string_list(v); }},
             {"k", [](ExperimentConfig &c, const std::string &v) { c.verify.k = parse_size_list(v); }},
             {"trials", [](ExperimentConfig &c, const std::string &v) { c.verify.trials = parse_u64(v); }},
             {"epsilon_prime",
              [](ExperimentConfig &c, const std::string &v) { c.verify.epsilon_prime = parse_double(v); }},
             {"epsilon", [](ExperimentConfig &c, const std::string &v) { c.verify.epsilon = parse_double(v); }},
             {"delta_prime",
              [](ExperimentConfig &c, const std::string &v) { c.verify.delta_prime = parse_double(v); }},
             {"seed", [](ExperimentConfig &c, const std::string &v) { c.verify.seed = parse_u64(v); }},
         }},
        {"estimate",
         {
             {"mode", [](ExperimentConfig &c, const std::string &v) { c.estimate.mode = trim(v); }},
             {"sweep", [](ExperimentConfig &c, const std::string &v) { c.estimate.sweep = trim(v); }},
             {"k", [](ExperimentConfig &c, const std::string &v) { c.estimate.k = parse_size_list(v); }},
             {"delta_prime",
              [](ExperimentConfig &c, const std::string &v) { c.estimate.delta_primes = parse_double_list(v); }},
             {"epsilon_prime",
              [](ExperimentConfig &c, const std::string &v) { c.estimate.epsilon_prime = parse_double(v); }},
             {"exact_statistics",
              [](ExperimentConfig &c, const std::string &v) { c.estimate.exact_statistics = trim(v); }},
             {"n", [](ExperimentConfig &c, const std::string &v) { c.estimate.n = parse_size_list(v); }},
             {"gap", [](ExperimentConfig &c, const std::string &v) { c.estimate.gap = parse_double(v); }},
             {"per_unitary_cost",
              [](ExperimentConfig &c, const std::string &v) { c.estimate.per_unitary_cost = parse_double(v); }},
         }},
        {"output",
         {
             {"dir", [](ExperimentConfig &c, const std::string &v) { c.output_dir = trim(v); }},
         }},
    };
    return table;
}

}  // namespace

std::vector<double> parse_double_list(const std::string &text) {
    std::vector<double> out;
    if (trim(text).empty()) {
        return out;
    }
    for (const auto &item : split(text, ',')) {
        out.push_back(parse_double(item));
    }
    return out;
}

std::vector<std::size_t> parse_size_list(const std::string &text) {
    std::vector<std::size_t> out;
    if (trim(text).empty()) {
        return out;
    }
    for (const auto &item : split(text, ',')) {
        const auto parts = split(item, ':');
        if (parts.size() == 1) {
            out.push_back(parse_u64(parts[0]));
            continue;
        }
        if (parts.size() > 3) {
            throw Error(ErrorKind::Parse, "bad range '" + item + "' (expected a:b or a:b:step)");
        }
        const std::uint64_t a = parse_u64(parts[0]);
        const std::uint64_t b = parse_u64(parts[1]);
        const std::uint64_t step = parts.size() == 3 ? parse_u64(parts[2]) : 1;
        if (step == 0 || b < a) {
            throw Error(ErrorKind::Parse, "bad range '" + item + "'");
        }
        for (std::uint64_t v = a; v <= b; v += step) {
            out.push_back(v);
        }
    }
    return out;
}

std::vector<std::string> parse_string_list(const std::string &text) {
    std::vector<std::string> out;
    if (trim(text).empty()) {
        return out;
    }
    // W_p:0,1,2,3,4,5 contains commas; a new item starts at a non-digit token.
    for (const auto &item : split(text, ',')) {
        if (!out.empty() && !item.empty() && std::isdigit(static_cast<unsigned char>(item[0])) &&
            out.back().find(':') != std::string::npos) {
            out.back() += "," + item;
        } else {
            out.push_back(item);
        }
    }
    return out;
}

ExperimentConfig default_config() {
    ExperimentConfig c;
    if (const char *env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') {
        c.output_dir = env;
    }
    return c;
}

void load_config_file(const std::string &path, ExperimentConfig &config) {
    if (!std::filesystem::exists(path)) {
        throw Error(ErrorKind::Io, "config file not found: " + path);
    }
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::ini_parser::read_ini(path, tree);
    } catch (const boost::property_tree::ini_parser_error &e) {
        throw Error(ErrorKind::Parse, "config " + path + ": " + e.message() + " (line " + std::to_string(e.line()) + ")");
    }
    const auto &table = setters();
    for (const auto &[section, keys] : tree) {
        const auto sec = table.find(section);
        if (sec == table.end() || !keys.data().empty()) {
            throw Error(ErrorKind::Parse, "config " + path + ": unknown section or top-level key '" + section + "'");
        }
        for (const auto &[key, value] : keys) {
            const auto it = sec->second.find(key);
            if (it == sec->second.end()) {
                throw Error(ErrorKind::Parse, "config " + path + ": unknown key '" + section + "." + key + "'");
            }
            try {
                it->second(config, value.data());
            } catch (const Error &e) {
                throw Error(ErrorKind::Parse, "config " + path + ": " + section + "." + key + ": " + e.what());
            }
        }
    }
}

std::string resolve_cluster_path(const std::string &cluster) {
    if (std::filesystem::exists(cluster)) {
        return cluster;
    }
    const std::filesystem::path bundled = std::filesystem::path(QTPQ_CLUSTER_DIR) / (cluster + ".txt");
    if (std::filesystem::exists(bundled)) {
        return bundled.string();
    }
    throw Error(ErrorKind::Io, "cluster not found: '" + cluster + "' (neither a file nor a bundled cluster)");
}

void validate_config(const ExperimentConfig &c) {
    static const std::set<std::string> kinds{"kitaev", "kagome", "heisenberg-dimer", "kitaev-bond", "pauli"};
    if (!kinds.contains(c.model.kind)) {
        throw Error(ErrorKind::InvalidArgument, "unknown model kind '" + c.model.kind +
                                                    "' (kitaev, kagome, heisenberg-dimer, kitaev-bond, pauli)");
    }
    if (c.model.kind == "kitaev" || c.model.kind == "kagome") {
        resolve_cluster_path(c.model.cluster);
    }
    if (c.model.kind == "pauli" && !std::filesystem::exists(c.model.hamiltonian)) {
        throw Error(ErrorKind::Io, "hamiltonian file not found: '" + c.model.hamiltonian + "'");
    }
    if (!(c.model.eta_per_site > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "eta_per_site must be > 0");
    }
    for (double dp : c.run.delta_primes) {
        if (dp < 0.0) {
            throw Error(ErrorKind::InvalidArgument, "delta_prime must be >= 0");
        }
    }
    for (double dp : c.estimate.delta_primes) {
        if (dp < 0.0) {
            throw Error(ErrorKind::InvalidArgument, "delta_prime must be >= 0");
        }
    }
    if (c.verify.delta_prime < 0.0) {
        throw Error(ErrorKind::InvalidArgument, "delta_prime must be >= 0");
    }
    if (c.run.samples == 0) {
        throw Error(ErrorKind::InvalidArgument, "samples must be >= 1");
    }
    if (c.run.delta_primes.empty()) {
        throw Error(ErrorKind::InvalidArgument, "run needs at least one delta_prime");
    }
    if (c.estimate.mode != "table" && c.estimate.mode != "scaling") {
        throw Error(ErrorKind::InvalidArgument, "estimate mode must be table or scaling");
    }
    if (c.estimate.sweep != "k" && c.estimate.sweep != "delta_prime") {
        throw Error(ErrorKind::InvalidArgument, "estimate sweep must be k or delta_prime");
    }
    if (c.estimate.exact_statistics != "auto" && c.estimate.exact_statistics != "on" &&
        c.estimate.exact_statistics != "off") {
        throw Error(ErrorKind::InvalidArgument, "exact_statistics must be auto, on or off");
    }
    for (const auto &check : c.verify.checks) {
        static const std::set<std::string> names{"block",       "amplified_block", "monomial",
                                                 "bound",       "closed_loop",     "amplification"};
        if (!names.contains(check)) {
            throw Error(ErrorKind::InvalidArgument, "unknown verify check '" + check + "'");
        }
    }
}

std::string config_to_json(const ExperimentConfig &c) {
    nlohmann::ordered_json j;
    j["model"] = {{"kind", c.model.kind},
                  {"cluster", c.model.cluster},
                  {"hamiltonian", c.model.hamiltonian},
                  {"coupling", c.model.coupling},
                  {"eta_per_site", c.model.eta_per_site}};
    j["run"] = {{"delta_prime", c.run.delta_primes}, {"samples", c.run.samples},
                {"k_max", c.run.k_max},              {"seed", c.run.seed},
                {"observables", c.run.observables},  {"threads", c.run.threads},
                {"alpha_baseline", c.run.alpha_baseline}};
    j["verify"] = {{"models", c.verify.models},
                   {"checks", c.verify.checks},
                   {"k", c.verify.k},
                   {"trials", c.verify.trials},
                   {"epsilon_prime", c.verify.epsilon_prime},
                   {"epsilon", c.verify.epsilon ? nlohmann::ordered_json(*c.verify.epsilon) : nullptr},
                   {"delta_prime", c.verify.delta_prime},
                   {"seed", c.verify.seed}};
    j["estimate"] = {
        {"mode", c.estimate.mode},
        {"sweep", c.estimate.sweep},
        {"k", c.estimate.k},
        {"delta_prime", c.estimate.delta_primes},
        {"epsilon_prime", c.estimate.epsilon_prime},
        {"exact_statistics", c.estimate.exact_statistics},
        {"n", c.estimate.n},
        {"gap", c.estimate.gap},
        {"per_unitary_cost",
         c.estimate.per_unitary_cost ? nlohmann::ordered_json(*c.estimate.per_unitary_cost) : nullptr}};
    j["output"] = {{"dir", c.output_dir}};
    return j.dump();
}

ExperimentConfig config_from_json(const std::string &text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorKind::Parse, std::string("config JSON: ") + e.what());
    }
    ExperimentConfig c;
    try {
        const auto &m = j.at("model");
        c.model.kind = m.at("kind").get<std::string>();
        c.model.cluster = m.at("cluster").get<std::string>();
        c.model.hamiltonian = m.at("hamiltonian").get<std::string>();
        c.model.coupling = m.at("coupling").get<double>();
        c.model.eta_per_site = m.at("eta_per_site").get<double>();
        const auto &r = j.at("run");
        c.run.delta_primes = r.at("delta_prime").get<std::vector<double>>();
        c.run.samples = r.at("samples").get<std::size_t>();
        c.run.k_max = r.at("k_max").get<std::size_t>();
        c.run.seed = r.at("seed").get<std::uint64_t>();
        c.run.observables = r.at("observables").get<std::vector<std::string>>();
        c.run.threads = r.at("threads").get<std::size_t>();
        c.run.alpha_baseline = r.at("alpha_baseline").get<bool>();
        const auto &v = j.at("verify");
        c.verify.models = v.at("models").get<std::vector<std::string>>();
        c.verify.checks = v.at("checks").get<std::vector<std::string>>();
        c.verify.k = v.at("k").get<std::vector<std::size_t>>();
        c.verify.trials = v.at("trials").get<std::size_t>();
        c.verify.epsilon_prime = v.at("epsilon_prime").get<double>();
        if (!v.at("epsilon").is_null()) {
            c.verify.epsilon = v.at("epsilon").get<double>();
        }
        c.verify.delta_prime = v.at("delta_prime").get<double>();
        c.verify.seed = v.at("seed").get<std::uint64_t>();
        const auto &e = j.at("estimate");
        c.estimate.mode = e.at("mode").get<std::string>();
        c.estimate.sweep = e.at("sweep").get<std::string>();
        c.estimate.k = e.at("k").get<std::vector<std::size_t>>();
        c.estimate.delta_primes = e.at("delta_prime").get<std::vector<double>>();
        c.estimate.epsilon_prime = e.at("epsilon_prime").get<double>();
        c.estimate.exact_statistics = e.at("exact_statistics").get<std::string>();
        c.estimate.n = e.at("n").get<std::vector<std::size_t>>();
        c.estimate.gap = e.at("gap").get<double>();
        if (!e.at("per_unitary_cost").is_null()) {
            c.estimate.per_unitary_cost = e.at("per_unitary_cost").get<double>();
        }
        c.output_dir = j.at("output").at("dir").get<std::string>();
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorKind::Parse, std::string("config JSON: ") + e.what());
    }
    return c;
}

}  // namespace qtpq
