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

#include "qtpq/trace_io.hpp"

#include <cstdio>
#include <ostream>
#include <sstream>

#include "qtpq/numfmt.hpp"

namespace qtpq {

void write_trace_csv(std::ostream &out, const TraceEnsemble &ensemble) {
    out << "sample,k,sq_norm_scaled,energy,beta,temperature";
    for (const auto &name : ensemble.observable_names) {
        out << ',' << name;
    }
    out << '\n';
    for (const auto &trace : ensemble.traces) {
        for (const auto &r : trace) {
            out << r.sample_id << ',' << r.k << ',' << format_double(r.squared_norm_scaled) << ','
                << format_double(r.energy) << ',' << format_double(r.beta) << ',' << format_double(r.temperature);
            for (const auto &name : ensemble.observable_names) {
                out << ',' << format_double(r.observables.at(name));
            }
            out << '\n';
        }
    }
}

void write_summary_csv(std::ostream &out, const TraceEnsemble &ensemble) {
    out << "k";
    for (const char *prefix : {"mean_", "std_"}) {
        out << ',' << prefix << "sq_norm_scaled," << prefix << "energy," << prefix << "beta," << prefix
            << "temperature";
        for (const auto &name : ensemble.observable_names) {
            out << ',' << prefix << name;
        }
    }
    out << '\n';
    for (const auto &st : ensemble.stats) {
        out << st.k;
        out << ',' << format_double(st.squared_norm_scaled.mean) << ',' << format_double(st.energy.mean) << ','
            << format_double(st.beta.mean) << ',' << format_double(st.temperature.mean);
        for (const auto &name : ensemble.observable_names) {
            out << ',' << format_double(st.observables.at(name).mean);
        }
        out << ',' << format_double(st.squared_norm_scaled.std) << ',' << format_double(st.energy.std) << ','
            << format_double(st.beta.std) << ',' << format_double(st.temperature.std);
        for (const auto &name : ensemble.observable_names) {
            out << ',' << format_double(st.observables.at(name).std);
        }
        out << '\n';
    }
}

std::string model_hash(const PauliSum &sum) {
    std::ostringstream text;
    write_pauli_sum(text, sum);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text.str()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace qtpq
