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

#include "qtpq/quantum.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>

#include "qtpq/error.hpp"
#include "qtpq/rng.hpp"

namespace qtpq {

namespace {

constexpr double kRelTol = 1e-12;

std::size_t ceil_log2(std::size_t m) {
    return m <= 1 ? 0 : static_cast<std::size_t>(std::bit_width(m - 1));
}

void require_normalized(const Statevector &psi, const char *who) {
    if (std::abs(psi.norm() - 1.0) > 1e-10) {
        throw Error(ErrorKind::InvalidArgument, std::string(who) + ": input state must be normalized");
    }
}

// [[B, S], [S, -B]] from B = V diag(b) V^dagger.
Eigen::MatrixXcd dilation_from_eigen(const Eigen::MatrixXcd &vectors, const Eigen::VectorXd &b) {
    const Eigen::Index d = b.size();
    Eigen::VectorXd s(d);
    for (Eigen::Index i = 0; i < d; ++i) {
        const double x = std::clamp(b[i], -1.0, 1.0);
        s[i] = std::sqrt(std::max(0.0, 1.0 - x * x));
    }
    const Eigen::MatrixXcd block = vectors * b.cast<Complex>().asDiagonal() * vectors.adjoint();
    const Eigen::MatrixXcd comp = vectors * s.cast<Complex>().asDiagonal() * vectors.adjoint();
    Eigen::MatrixXcd u(2 * d, 2 * d);
    u.topLeftCorner(d, d) = block;
    u.topRightCorner(d, d) = comp;
    u.bottomLeftCorner(d, d) = comp;
    u.bottomRightCorner(d, d) = -block;
    return u;
}

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> hermitian_eigen(const Eigen::MatrixXcd &m) {
    const Eigen::MatrixXcd h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorKind::Numerical, "Hermitian eigensolver failed");
    }
    return solver;
}

void check_contraction(const Eigen::VectorXd &b) {
    if (b.size() > 0 && b.cwiseAbs().maxCoeff() > 1.0 + kRelTol) {
        throw Error(ErrorKind::Domain, "block is not a contraction: ||B|| = " + std::to_string(b.cwiseAbs().maxCoeff()));
    }
}

}  // namespace

double BlockEncoding::unitarity_residual() const {
    const Eigen::MatrixXcd g = unitary.adjoint() * unitary;
    return (g - Eigen::MatrixXcd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

double BlockEncoding::block_residual(const Eigen::MatrixXcd &target) const {
    if (target.rows() != system_dimension() || target.cols() != system_dimension()) {
        throw Error(ErrorKind::DimensionMismatch, "block_residual: target has the wrong shape");
    }
    return (block() - target / subnormalization).cwiseAbs().maxCoeff();
}

BlockEncoding build_lcu_unitary(const PauliSum &h_prime, std::size_t max_total_qubits) {
    const std::size_t n = h_prime.n_sites();
    const auto terms = h_prime.terms();
    const std::size_t n_unitaries = terms.size() + 1;
    const std::size_t n_anc = ceil_log2(n_unitaries);
    if (n + n_anc > max_total_qubits) {
        throw Error(ErrorKind::SizeLimit, "LCU unitary needs " + std::to_string(n + n_anc) + " qubits, limit is " +
                                              std::to_string(max_total_qubits));
    }
    const double alpha = alpha_lcu(h_prime);
    if (!(alpha > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "cannot block-encode the zero operator");
    }

    const Eigen::Index da = Eigen::Index{1} << n_anc;
    const Eigen::Index d = Eigen::Index{1} << n;

    // Weights: slot 0 holds the identity part, slot j >= 1 holds term j - 1.
    Eigen::VectorXd target = Eigen::VectorXd::Zero(da);
    target[0] = std::sqrt(std::abs(h_prime.identity_shift()) / alpha);
    for (std::size_t j = 0; j < terms.size(); ++j) {
        target[static_cast<Eigen::Index>(j + 1)] = std::sqrt(std::abs(terms[j].coefficient()) / alpha);
    }
    target.normalize();

    // PREPARE: real Householder reflection with PREP e_0 = target.
    Eigen::MatrixXd prep = Eigen::MatrixXd::Identity(da, da);
    Eigen::VectorXd v = -target;
    v[0] += 1.0;
    if (v.squaredNorm() > 1e-30) {
        prep -= 2.0 * v * v.transpose() / v.squaredNorm();
    }

    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(da * d, da * d);
    // U = sum_j (PREP^T |j><j| PREP) (x) U_j; slots past the term list hold I.
    for (Eigen::Index j = 0; j < da; ++j) {
        std::uint64_t x_mask = 0;
        std::uint64_t z_mask = 0;
        Complex phase = 1.0;
        if (j == 0) {
            phase = h_prime.identity_shift() < 0.0 ? -1.0 : 1.0;
        } else if (static_cast<std::size_t>(j) <= terms.size()) {
            const PauliTerm &t = terms[static_cast<std::size_t>(j - 1)];
            x_mask = t.x_mask();
            z_mask = t.z_mask();
            static constexpr Complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
            phase = (t.coefficient() < 0.0 ? -1.0 : 1.0) * kIPow[t.y_count() % 4];
        }
        for (Eigen::Index a = 0; a < da; ++a) {
            for (Eigen::Index b = 0; b < da; ++b) {
                const double c = prep(j, a) * prep(j, b);
                if (c == 0.0) {
                    continue;
                }
                for (Eigen::Index col = 0; col < d; ++col) {
                    const auto s = static_cast<std::uint64_t>(col);
                    const double sign = (std::popcount(s & z_mask) & 1) ? -1.0 : 1.0;
                    const auto row = static_cast<Eigen::Index>(s ^ x_mask);
                    u(a * d + row, b * d + col) += c * sign * phase;
                }
            }
        }
    }
    return BlockEncoding{std::move(u), n_anc, n, alpha, "H'/alpha (LCU)"};
}

BlockEncoding dilate_hermitian_contraction(const Eigen::MatrixXcd &block, double subnormalization,
                                           std::string encoded) {
    if (block.rows() != block.cols() || block.rows() == 0 || !std::has_single_bit(static_cast<std::size_t>(block.rows()))) {
        throw Error(ErrorKind::DimensionMismatch, "dilation needs a square block of power-of-two size");
    }
    if ((block - block.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, block.cwiseAbs().maxCoeff())) {
        throw Error(ErrorKind::InvalidArgument, "dilation needs a Hermitian block");
    }
    const auto solver = hermitian_eigen(block);
    check_contraction(solver.eigenvalues());
    const auto n = static_cast<std::size_t>(std::countr_zero(static_cast<std::size_t>(block.rows())));
    return BlockEncoding{dilation_from_eigen(solver.eigenvectors(), solver.eigenvalues()), 1, n, subnormalization,
                         std::move(encoded)};
}

std::string to_string(PerturbationMode mode) {
    switch (mode) {
        case PerturbationMode::Zero:
            return "zero";
        case PerturbationMode::Random:
            return "random";
        case PerturbationMode::Adversarial:
            return "adversarial";
    }
    return "unknown";
}

PerturbationMode perturbation_mode_from_string(const std::string &name) {
    if (name == "zero") {
        return PerturbationMode::Zero;
    }
    if (name == "random") {
        return PerturbationMode::Random;
    }
    if (name == "adversarial") {
        return PerturbationMode::Adversarial;
    }
    throw Error(ErrorKind::InvalidArgument, "unknown perturbation mode '" + name + "' (zero, random, adversarial)");
}

Eigen::MatrixXcd PerturbedSpectrum::perturbed_matrix() const {
    return eigenvectors * perturbed().cast<Complex>().asDiagonal() * eigenvectors.adjoint();
}

PerturbedSpectrum perturb_spectrum(const ModelInstance &model, const EigenSystem &h_eigen, double epsilon,
                                   PerturbationMode mode, std::uint64_t seed) {
    const auto d = static_cast<Eigen::Index>(model.hamiltonian.dimension());
    if (h_eigen.values.size() != d || h_eigen.vectors.rows() != d || h_eigen.vectors.cols() != d) {
        throw Error(ErrorKind::DimensionMismatch, "eigensystem does not match the model dimension");
    }
    if (!std::isfinite(epsilon) || epsilon < 0.0) {
        throw Error(ErrorKind::InvalidArgument, "epsilon must be finite and >= 0");
    }
    PerturbedSpectrum out;
    out.base = (model.shift - h_eigen.values.array()).matrix();
    out.eigenvectors = h_eigen.vectors;
    out.lambda = model.lambda;
    out.epsilon = epsilon;
    out.perturbation = Eigen::VectorXd::Zero(d);
    const double amp = epsilon * model.lambda;
    switch (mode) {
        case PerturbationMode::Zero:
            break;
        case PerturbationMode::Random: {
            RandomSource rng(seed);
            for (Eigen::Index i = 0; i < d; ++i) {
                out.perturbation[i] = rng.uniform(-amp, amp);
            }
            break;
        }
        case PerturbationMode::Adversarial:
            for (Eigen::Index i = 0; i < d; ++i) {
                out.perturbation[i] = (i % 2 == 0) ? -amp : amp;
            }
            break;
    }
    return out;
}

AmplifiedEncoding emulate_amplified_encoding(const ModelInstance &model, const EigenSystem &h_eigen, double epsilon,
                                             PerturbationMode mode, std::uint64_t seed,
                                             std::size_t max_total_qubits) {
    if (!std::isfinite(epsilon) || epsilon < 0.0 || epsilon >= 0.5) {
        throw Error(ErrorKind::Domain, "amplification precision epsilon must lie in [0, 1/2)");
    }
    if (model.lambda < model.h_prime_norm() * (1.0 - kRelTol)) {
        throw Error(ErrorKind::Domain, "Lambda is below ||H'||");
    }
    if (model.n_sites() + 1 > max_total_qubits) {
        throw Error(ErrorKind::SizeLimit, "amplified encoding needs " + std::to_string(model.n_sites() + 1) +
                                              " qubits, limit is " + std::to_string(max_total_qubits));
    }
    PerturbedSpectrum spectrum = perturb_spectrum(model, h_eigen, epsilon, mode, seed);
    const Eigen::VectorXd b = spectrum.perturbed() / model.lambda;
    if (b.cwiseAbs().maxCoeff() > 1.0 + kRelTol) {
        throw Error(ErrorKind::Domain, "perturbed spectrum leaves [-Lambda, Lambda]; lower epsilon or raise delta'");
    }
    BlockEncoding be{dilation_from_eigen(spectrum.eigenvectors, b), 1, model.n_sites(), model.lambda,
                     "H~'/Lambda (emulated amplification, " + to_string(mode) + ")"};
    return AmplifiedEncoding{std::move(be), std::move(spectrum)};
}

AmplifiedEncoding emulate_amplified_encoding(const ModelInstance &model, double epsilon, PerturbationMode mode,
                                             std::uint64_t seed) {
    const EigenSystem es = eigensystem(model.hamiltonian, kDefaultBlockEncodingQubits - 1);
    return emulate_amplified_encoding(model, es, epsilon, mode, seed);
}

MonomialResult apply_monomial(const BlockEncoding &be, std::size_t k, const Statevector &psi0) {
    if (psi0.n_sites() != be.n_system) {
        throw Error(ErrorKind::DimensionMismatch, "apply_monomial: state and encoding sizes differ");
    }
    require_normalized(psi0, "apply_monomial");
    const Eigen::MatrixXcd b = be.block();
    Eigen::VectorXcd v = psi0.amplitudes();
    for (std::size_t i = 0; i < k; ++i) {
        v = b * v;
    }
    const double p = v.squaredNorm();
    if (!(p > 0.0) || !std::isfinite(p)) {
        throw Error(ErrorKind::Numerical, "post-selection probability vanished");
    }
    return MonomialResult{Statevector(psi0.n_sites(), v / std::sqrt(p)), p};
}

std::size_t grover_iterations(double p) {
    if (!std::isfinite(p) || p <= 0.0 || p > 1.0) {
        throw Error(ErrorKind::Domain, "success probability must lie in (0, 1]");
    }
    if (p > 0.5) {
        return 0;
    }
    return static_cast<std::size_t>(std::floor((std::numbers::pi / 4.0) / std::asin(std::sqrt(p))));
}

AmplificationResult amplitude_amplify(const BlockEncoding &be, std::size_t k, const Statevector &psi0,
                                      double target_probability) {
    if (psi0.n_sites() != be.n_system) {
        throw Error(ErrorKind::DimensionMismatch, "amplitude_amplify: state and encoding sizes differ");
    }
    require_normalized(psi0, "amplitude_amplify");
    if (!(target_probability > 0.0) || target_probability > 1.0) {
        throw Error(ErrorKind::InvalidArgument, "target probability must lie in (0, 1]");
    }
    const Eigen::MatrixXcd b = be.block();
    const Eigen::Index d = b.rows();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(d, d);
    for (std::size_t i = 0; i < k; ++i) {
        m = b * m;
    }
    const auto solver = hermitian_eigen(m);
    check_contraction(solver.eigenvalues());
    const Eigen::MatrixXcd a = dilation_from_eigen(solver.eigenvectors(), solver.eigenvalues());

    Eigen::VectorXcd init = Eigen::VectorXcd::Zero(2 * d);
    init.head(d) = psi0.amplitudes();
    Eigen::VectorXcd phi = a * init;
    const double p = phi.head(d).squaredNorm();
    const std::size_t standard = grover_iterations(p);

    const double theta = std::asin(std::sqrt(p));
    std::size_t chosen = standard;
    for (std::size_t mm = 0; mm <= standard; ++mm) {
        const double s = std::sin(static_cast<double>(2 * mm + 1) * theta);
        if (s * s >= target_probability - 1e-12) {
            chosen = mm;
            break;
        }
    }

    AmplificationResult r;
    r.iterations = chosen;
    r.initial_probability = p;
    r.good_before = Statevector(psi0.n_sites(), phi.head(d) / std::sqrt(p));
    // Q = -A S_0 A^dagger S_good, S_good flips the ancilla-|0> half, S_0 = I - 2|init><init|.
    for (std::size_t it = 0; it < chosen; ++it) {
        phi.head(d) = -phi.head(d);
        Eigen::VectorXcd w = a.adjoint() * phi;
        w -= 2.0 * init * init.dot(w);
        phi = -(a * w);
    }
    r.amplified_probability = phi.head(d).squaredNorm();
    r.good_after = Statevector(psi0.n_sites(), phi.head(d) / std::sqrt(r.amplified_probability));
    return r;
}

double trace_bound_epsilon_ceiling(const ModelInstance &model, std::size_t k) {
    if (k == 0) {
        throw Error(ErrorKind::InvalidArgument, "k must be >= 1");
    }
    return (4.0 / 9.0) * (model.shift - model.e_max) / (static_cast<double>(k) * model.lambda);
}

BoundReport evaluate_trace_bound(const PerturbedSpectrum &spectrum, const Statevector &psi, std::size_t k,
                                 std::string label) {
    if (k == 0) {
        throw Error(ErrorKind::InvalidArgument, "k must be >= 1");
    }
    const Eigen::Index d = spectrum.base.size();
    if (static_cast<Eigen::Index>(psi.dimension()) != d) {
        throw Error(ErrorKind::DimensionMismatch, "evaluate_trace_bound: state and spectrum sizes differ");
    }
    require_normalized(psi, "evaluate_trace_bound");
    const double lam = spectrum.lambda;
    const auto kd = static_cast<double>(k);
    const Eigen::VectorXcd c = spectrum.eigenvectors.adjoint() * psi.amplitudes();

    BoundReport r;
    r.perturbation = std::move(label);
    r.k = k;
    r.epsilon = spectrum.epsilon;
    r.lambda = lam;

    Eigen::VectorXcd a(d);
    Eigen::VectorXcd at(d);
    for (Eigen::Index n = 0; n < d; ++n) {
        const double e = spectrum.base[n] / lam;
        const double et = (spectrum.base[n] + spectrum.perturbation[n]) / lam;
        const double ek = std::pow(e, kd);
        const double etk = std::pow(et, kd);
        a[n] = ek * c[n];
        at[n] = etk * c[n];
        r.trace_norm_power += std::pow(std::abs(e), kd - 1.0);
        r.eigen_diff_sum += std::abs(etk - ek);
    }
    r.n_k = a.squaredNorm();
    r.n_k_tilde = at.squaredNorm();
    if (!(r.n_k > 0.0) || !(r.n_k_tilde > 0.0)) {
        throw Error(ErrorKind::Numerical, "N_k vanished; the state has no weight on nonzero eigenvalues");
    }

    // rho - rho~ has rank <= 2: project onto span{v, u}.
    const Eigen::VectorXcd v = a / std::sqrt(r.n_k);
    const Eigen::VectorXcd u = at / std::sqrt(r.n_k_tilde);
    const Complex ov = v.dot(u);
    const double perp = (u - ov * v).norm();
    Eigen::Matrix2cd w;
    w << std::norm(ov) - 1.0, ov * perp, std::conj(ov) * perp, perp * perp;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> small(w);
    r.lhs = 0.5 * small.eigenvalues().cwiseAbs().sum();

    r.rhs = 4.0 * kd * spectrum.epsilon * r.trace_norm_power / std::sqrt(r.n_k);
    r.eigen_diff_bound = 2.0 * kd * spectrum.epsilon * r.trace_norm_power;
    // Few-ulp absolute slack for the eps = 0 equality case.
    constexpr double kUlp = 8.0 * std::numeric_limits<double>::epsilon();
    r.satisfied = r.lhs <= r.rhs * (1.0 + kRelTol) + kUlp;
    r.eigen_diff_ok = r.eigen_diff_sum <= r.eigen_diff_bound * (1.0 + kRelTol) + kUlp * r.trace_norm_power;
    r.norm_ratio_ok = std::sqrt(r.n_k) <= 3.0 * std::sqrt(r.n_k_tilde) * (1.0 + kRelTol);
    return r;
}

std::vector<BoundReport> verify_appendix_a(const ModelInstance &model, const EigenSystem &h_eigen,
                                           const Statevector &psi, std::size_t k, double epsilon, std::size_t trials,
                                           std::uint64_t seed) {
    const double ceiling = trace_bound_epsilon_ceiling(model, k);
    if (!std::isfinite(epsilon) || epsilon < 0.0) {
        throw Error(ErrorKind::InvalidArgument, "epsilon must be finite and >= 0");
    }
    if (epsilon > ceiling * (1.0 + kRelTol)) {
        throw Error(ErrorKind::Domain, "epsilon exceeds the bound's precondition (4/9)(L - E_max)/(k Lambda) = " +
                                           std::to_string(ceiling));
    }
    std::vector<BoundReport> out;
    out.reserve(trials + 3);
    for (std::size_t t = 0; t < trials; ++t) {
        const auto spec = perturb_spectrum(model, h_eigen, epsilon, PerturbationMode::Random, stream_seed(seed, t));
        out.push_back(evaluate_trace_bound(spec, psi, k, "random"));
    }
    PerturbedSpectrum spec = perturb_spectrum(model, h_eigen, epsilon, PerturbationMode::Adversarial, seed);
    out.push_back(evaluate_trace_bound(spec, psi, k, "adversarial-alternating"));
    const double amp = epsilon * model.lambda;
    spec.perturbation.setConstant(amp);
    out.push_back(evaluate_trace_bound(spec, psi, k, "adversarial-all-plus"));
    spec.perturbation.setConstant(-amp);
    out.push_back(evaluate_trace_bound(spec, psi, k, "adversarial-all-minus"));
    return out;
}

namespace {

void check_epsilon_prime(const ModelInstance &model, double epsilon_prime, EpsilonPrimeRange range) {
    const double hi = range.gap_multiple * (model.shift - model.e_max);
    if (!std::isfinite(epsilon_prime) || epsilon_prime <= 0.0 || epsilon_prime > hi * (1.0 + kRelTol)) {
        throw Error(ErrorKind::Domain, "target precision eps' must lie in (0, " + std::to_string(hi) + "]");
    }
}

}  // namespace

double epsilon_budget(const ModelInstance &model, std::size_t k, double epsilon_prime, double trace_norm_power,
                      double n_k, EpsilonPrimeRange range) {
    check_epsilon_prime(model, epsilon_prime, range);
    if (!(trace_norm_power > 0.0) || !(n_k > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "power statistics must be positive");
    }
    const double ceiling = trace_bound_epsilon_ceiling(model, k);
    return std::min(epsilon_prime * std::sqrt(n_k) / (4.0 * static_cast<double>(k) * trace_norm_power), ceiling);
}

double epsilon_for_target(const ModelInstance &model, const EigenSystem &h_eigen, const Statevector &psi0,
                          std::size_t k, double epsilon_prime, EpsilonPrimeRange range) {
    const PowerStatistics st = power_statistics(model, h_eigen, psi0, k);
    return epsilon_budget(model, k, epsilon_prime, st.trace_norm_power, st.n_k, range);
}

double epsilon_for_target_replacement(const ModelInstance &model, std::size_t k, double epsilon_prime,
                                      EpsilonPrimeRange range) {
    check_epsilon_prime(model, epsilon_prime, range);
    const double ceiling = trace_bound_epsilon_ceiling(model, k);
    const auto d = static_cast<double>(model.hamiltonian.dimension());
    return std::min(epsilon_prime * (model.shift - model.e_max) / (4.0 * static_cast<double>(k) * model.lambda * d),
                    ceiling);
}

PowerStatistics power_statistics(const ModelInstance &model, const EigenSystem &h_eigen, const Statevector &psi,
                                 std::size_t k) {
    if (k == 0) {
        throw Error(ErrorKind::InvalidArgument, "k must be >= 1");
    }
    const auto d = static_cast<Eigen::Index>(model.hamiltonian.dimension());
    if (h_eigen.values.size() != d || static_cast<Eigen::Index>(psi.dimension()) != d) {
        throw Error(ErrorKind::DimensionMismatch, "power_statistics: sizes differ");
    }
    const Eigen::VectorXcd c = h_eigen.vectors.adjoint() * psi.amplitudes();
    const auto kd = static_cast<double>(k);
    PowerStatistics st;
    for (Eigen::Index n = 0; n < d; ++n) {
        const double e = (model.shift - h_eigen.values[n]) / model.lambda;
        st.trace_norm_power += std::pow(std::abs(e), kd - 1.0);
        st.n_k += std::norm(c[n]) * std::pow(e, 2.0 * kd);
    }
    return st;
}

PowerStatistics averaged_power_statistics(const ModelInstance &model, std::span<const double> h_eigenvalues,
                                          std::size_t k) {
    if (k == 0) {
        throw Error(ErrorKind::InvalidArgument, "k must be >= 1");
    }
    if (h_eigenvalues.size() != model.hamiltonian.dimension()) {
        throw Error(ErrorKind::DimensionMismatch, "averaged_power_statistics: spectrum size differs from dimension");
    }
    const auto kd = static_cast<double>(k);
    PowerStatistics st;
    for (double en : h_eigenvalues) {
        const double e = (model.shift - en) / model.lambda;
        st.trace_norm_power += std::pow(std::abs(e), kd - 1.0);
        st.n_k += std::pow(e, 2.0 * kd);
    }
    st.n_k /= static_cast<double>(h_eigenvalues.size());
    return st;
}

}  // namespace qtpq
