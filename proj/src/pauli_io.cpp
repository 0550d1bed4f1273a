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
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "qtpq/error.hpp"
#include "qtpq/numfmt.hpp"
#include "qtpq/pauli.hpp"

namespace qtpq {

std::string format_double(double value) {
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

namespace {

double parse_number(const std::string &token, std::size_t line_no) {
    try {
        std::size_t used = 0;
        const double v = std::stod(token, &used);
        if (used != token.size()) {
            throw std::invalid_argument(token);
        }
        return v;
    } catch (const std::exception &) {
        throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": bad number '" + token + "'");
    }
}

std::size_t parse_index(const std::string &token, std::size_t line_no) {
    if (token.empty() || !std::all_of(token.begin(), token.end(), [](char c) { return c >= '0' && c <= '9'; })) {
        throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": bad site index '" + token + "'");
    }
    return std::stoul(token);
}

}  // namespace

PauliSum parse_pauli_sum(std::istream &in) {
    std::optional<std::size_t> declared_sites;
    double shift = 0.0;
    std::vector<PauliTerm> terms;
    std::size_t max_site = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream fields(line);
        std::string head;
        if (!(fields >> head)) {
            continue;
        }
        if (head == "sites") {
            std::string n;
            if (!(fields >> n)) {
                throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": 'sites' needs a count");
            }
            declared_sites = parse_index(n, line_no);
            continue;
        }
        if (head == "shift") {
            std::string v;
            if (!(fields >> v)) {
                throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": 'shift' needs a value");
            }
            shift += parse_number(v, line_no);
            continue;
        }
        const double coeff = parse_number(head, line_no);
        std::vector<PauliOp> ops;
        std::string token;
        while (fields >> token) {
            const auto colon = token.find(':');
            if (colon == std::string::npos || colon + 2 != token.size()) {
                throw Error(ErrorKind::Parse,
                            "line " + std::to_string(line_no) + ": expected site:axis, got '" + token + "'");
            }
            Axis axis;
            try {
                axis = axis_from_char(token[colon + 1]);
            } catch (const Error &e) {
                throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": " + e.what());
            }
            ops.push_back(PauliOp{parse_index(token.substr(0, colon), line_no), axis});
        }
        if (ops.empty()) {
            throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": term has no Pauli factors");
        }
        std::sort(ops.begin(), ops.end(), [](const PauliOp &a, const PauliOp &b) { return a.site < b.site; });
        if (coeff == 0.0) {
            continue;
        }
        try {
            terms.emplace_back(coeff, std::move(ops));
        } catch (const Error &e) {
            throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": " + e.what());
        }
        max_site = std::max(max_site, terms.back().max_site());
    }
    const std::size_t inferred = terms.empty() ? 1 : max_site + 1;
    const std::size_t n_sites = declared_sites.value_or(inferred);
    if (n_sites < inferred) {
        throw Error(ErrorKind::Parse, "declared 'sites " + std::to_string(n_sites) + "' but a term uses site " +
                                          std::to_string(max_site));
    }
    return PauliSum(n_sites, shift, std::move(terms));
}

PauliSum read_pauli_sum_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::Io, "cannot open Pauli-sum file '" + path + "'");
    }
    return parse_pauli_sum(in);
}

void write_pauli_sum(std::ostream &out, const PauliSum &sum) {
    out << "sites " << sum.n_sites() << "\n";
    out << "shift " << format_double(sum.identity_shift()) << "\n";
    for (const auto &term : sum.terms()) {
        out << format_double(term.coefficient());
        for (const auto &op : term.ops()) {
            out << ' ' << op.site << ':' << to_char(op.axis);
        }
        out << "\n";
    }
}

}  // namespace qtpq
