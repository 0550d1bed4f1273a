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

#include "qtpq/resources.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "qtpq/error.hpp"

namespace qtpq {

namespace {

constexpr double kRelTol = 1e-12;

void require_positive(double v, const char *name) {
    if (!std::isfinite(v) || v <= 0.0) {
        throw Error(ErrorKind::Domain, std::string(name) + " must be finite and > 0");
    }
}

}  // namespace

CostModel CostModel::from_lcu(const PauliSum &h_prime, std::optional<double> per_unitary_cost,
                              CostConstants constants) {
    CostModel m;
    m.constants = constants;
    m.n_u = h_prime.terms().size();
    m.n_a = m.n_u == 0 ? 0 : static_cast<std::size_t>(std::bit_width(m.n_u));
    std::size_t max_weight = 1;
    for (const auto &t : h_prime.terms()) {
        max_weight = std::max(max_weight, t.weight());
    }
    m.per_unitary_cost = per_unitary_cost.value_or(static_cast<double>(max_weight));
    if (!std::isfinite(m.per_unitary_cost) || m.per_unitary_cost < 0.0) {
        throw Error(ErrorKind::Domain, "per-unitary cost C must be >= 0");
    }
    m.c_u = constants.lcu * static_cast<double>(std::max<std::size_t>(m.n_u, 1)) * m.per_unitary_cost;
    return m;
}

GateCount amplification_cost(double alpha, double lambda, double delta, double epsilon, double c_u, double constant,
                             std::optional<double> h_prime_norm) {
    require_positive(lambda, "Lambda");
    require_positive(alpha, "alpha");
    if (lambda > alpha * (1.0 + kRelTol)) {
        throw Error(ErrorKind::Domain, "Lambda must not exceed alpha");
    }
    if (!std::isfinite(delta) || delta <= 0.0 || delta > 1.0) {
        throw Error(ErrorKind::Domain, "delta must lie in (0, 1]");
    }
    if (h_prime_norm) {
        const double cap = 1.0 - *h_prime_norm / lambda;
        if (delta > cap * (1.0 + kRelTol) + kRelTol) {
            throw Error(ErrorKind::Domain, "delta must lie in (0, 1 - ||H'||/Lambda] = (0, " + std::to_string(cap) + "]");
        }
    }
    if (!std::isfinite(epsilon) || epsilon <= 0.0 || epsilon >= 0.5) {
        throw Error(ErrorKind::Domain, "epsilon must lie in (0, 1/2)");
    }
    if (!std::isfinite(c_u) || c_u < 0.0) {
        throw Error(ErrorKind::Domain, "C_U must be >= 0");
    }
    const double ratio = alpha / lambda;
    return GateCount{constant * ratio / delta * std::log(ratio / epsilon) * c_u,
                     "const * (alpha/Lambda) * (1/delta) * ln((alpha/Lambda)/epsilon) * C_U"};
}

QetCost qet_cost(std::size_t k, std::size_t n_a, double constant) {
    if (k == 0) {
        throw Error(ErrorKind::InvalidArgument, "k must be >= 1");
    }
    QetCost c;
    c.ancillas = 2;
    c.controlled_calls = k;
    c.odd_plain_substitution = (k % 2) == 1;
    c.primitive = constant * static_cast<double>(k) * std::log2(static_cast<double>(std::max<std::size_t>(n_a, 2)));
    c.formula = "2 ancillas; k controlled-U~ calls; const * k * log2(max(N_a, 2)) primitive gates";
    if (c.odd_plain_substitution) {
        c.formula += "; odd k: plain U~ may replace controlled-U~";
    }
    return c;
}

double amplification_prefactor(double lambda, double h_prime_norm, std::size_t k) {
    require_positive(h_prime_norm, "||H'||");
    if (!std::isfinite(lambda) || lambda < h_prime_norm) {
        throw Error(ErrorKind::Domain, "Lambda must be >= ||H'||");
    }
    return std::exp(static_cast<double>(k) * std::log1p((lambda - h_prime_norm) / h_prime_norm));
}

double default_delta(const ModelInstance &model, std::size_t k) {
    if (k == 0) {
        throw Error(ErrorKind::InvalidArgument, "k must be >= 1");
    }
    const double cap = 1.0 - model.h_prime_norm() / model.lambda;
    const double inv_k = 1.0 / static_cast<double>(k);
    return cap > kRelTol ? std::min(cap, inv_k) : inv_k;
}

ResourceEstimate total_complexity(const ModelInstance &model, std::size_t k, double epsilon_prime,
                                  const EstimateOptions &options) {
    if (k == 0) {
        throw Error(ErrorKind::InvalidArgument, "k must be >= 1");
    }
    const CostModel &cost = options.cost;
    const double kd = static_cast<double>(k);
    const double d = static_cast<double>(model.hamiltonian.dimension());
    const double alpha = model.alpha;
    const double lam = model.lambda;
    const double gap = model.shift - model.e_max;

    ResourceEstimate r;
    r.k = k;
    r.delta_prime = model.delta_prime;
    r.epsilon_prime = epsilon_prime;
    r.n_a = cost.n_a;
    r.qubits = model.n_sites() + cost.n_a + 2;
    r.prefactor = amplification_prefactor(lam, model.h_prime_norm(), k);
    r.delta = options.delta.value_or(default_delta(model, k));

    r.epsilon_replacement = epsilon_for_target_replacement(model, k, epsilon_prime, options.range);
    r.epsilon = r.epsilon_replacement;
    if (options.statistics) {
        r.epsilon_exact = epsilon_budget(model, k, epsilon_prime, options.statistics->trace_norm_power,
                                         options.statistics->n_k, options.range);
        r.epsilon = *r.epsilon_exact;
    }

    const double c_amp = cost.constants.amplification;
    const bool capped = 1.0 - model.h_prime_norm() / lam > kRelTol;
    r.amplified_encoding = amplification_cost(alpha, lam, r.delta, r.epsilon, cost.c_u, c_amp,
                                              capped ? std::optional<double>(model.h_prime_norm()) : std::nullopt);
    r.qet = qet_cost(k, cost.n_a, cost.constants.qet);
    r.per_v_cost = kd * r.amplified_encoding.value + r.qet.primitive;

    if (options.oracle_probability) {
        r.aa_steps = std::max<std::size_t>(1, grover_iterations(*options.oracle_probability));
        r.aa_source = "oracle-p";
    } else {
        r.aa_steps = static_cast<std::size_t>(
            std::max(1.0, std::ceil(cost.constants.amplitude_amplification * std::sqrt(d) * r.prefactor)));
        r.aa_source = "prefactor";
    }
    r.total = static_cast<double>(r.aa_steps) * r.per_v_cost;
    r.total_formula = "aa_steps * (k * cost(U~) + QET primitives)";

    // Closed form: prefactor sqrt(D) k (alpha/Lambda)(1/delta) ln(k alpha R / eps') C_U with
    // R = ||H'^{k-1}||_1 / sqrt(N_k) (exact) or D / (L - E_max) (replacement).
    const double common = c_amp * r.prefactor * std::sqrt(d) * kd * (alpha / lam) / r.delta * cost.c_u;
    auto theorem = [&](double ratio) {
        const double lg = std::log(kd * alpha * ratio / epsilon_prime);
        if (!(lg > 0.0)) {
            throw Error(ErrorKind::Domain, "log factor of the complexity is not positive");
        }
        return common * lg;
    };
    r.theorem_replacement = theorem(d / gap);
    if (options.statistics) {
        // Lambda-scaled statistics: ||H'^{k-1}||_1 / sqrt(N_k) = t / (Lambda sqrt(n)).
        r.theorem_exact = theorem(options.statistics->trace_norm_power / (lam * std::sqrt(options.statistics->n_k)));
    }
    r.theorem_formula =
        "const * (Lambda/(L-E_min))^k * sqrt(D) * k * (alpha/Lambda) * (1/delta) * "
        "ln(k*alpha*R/eps') * C_U; R = ||H'^(k-1)||_1/sqrt(N_k) or D/(L-E_max)";
    return r;
}

ScalingEstimate spin_system_scaling(std::size_t n_sites, double epsilon_prime, double gap, double constant) {
    if (n_sites == 0) {
        throw Error(ErrorKind::InvalidArgument, "N must be >= 1");
    }
    if (!std::isfinite(gap) || gap <= 0.0) {
        throw Error(ErrorKind::Domain, "gap L - E_max must be > 0");
    }
    require_positive(epsilon_prime, "eps'");
    if (epsilon_prime * gap >= 1.0) {
        throw Error(ErrorKind::Domain, "eps' * (L - E_max) must be < 1 for a positive log factor");
    }
    ScalingEstimate s;
    s.n_sites = n_sites;
    const double n = static_cast<double>(n_sites);
    s.sqrt_d = std::exp2(0.5 * n);
    s.polylog_exponent = 3;
    s.polylog = std::pow(n, s.polylog_exponent);
    s.log_factor = std::log(1.0 / (epsilon_prime * gap));
    s.value = constant * s.sqrt_d * s.polylog * s.log_factor;
    s.formula = "const * sqrt(2^N) * N^3 * ln(1/(eps' * (L - E_max)))";
    return s;
}

}  // namespace qtpq
