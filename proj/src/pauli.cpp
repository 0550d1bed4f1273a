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

#include "qtpq/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <string>

#include "qtpq/error.hpp"

namespace qtpq {

namespace {

Complex i_power(std::size_t n) {
    switch (n % 4) {
        case 0:
            return {1.0, 0.0};
        case 1:
            return {0.0, 1.0};
        case 2:
            return {-1.0, 0.0};
        default:
            return {0.0, -1.0};
    }
}

inline double parity_sign(std::uint64_t bits) {
    return (std::popcount(bits) & 1) ? -1.0 : 1.0;
}

void check_sites(std::size_t n_sites) {
    if (n_sites == 0 || n_sites > kMaxSites) {
        throw Error(ErrorKind::InvalidArgument,
                    "n_sites must be in [1, " + std::to_string(kMaxSites) + "], got " + std::to_string(n_sites));
    }
}

}  // namespace

char to_char(Axis axis) {
    switch (axis) {
        case Axis::X:
            return 'x';
        case Axis::Y:
            return 'y';
        case Axis::Z:
            return 'z';
    }
    return '?';
}

Axis axis_from_char(char c) {
    switch (c) {
        case 'x':
        case 'X':
            return Axis::X;
        case 'y':
        case 'Y':
            return Axis::Y;
        case 'z':
        case 'Z':
            return Axis::Z;
        default:
            throw Error(ErrorKind::Parse, std::string("unknown Pauli axis '") + c + "'");
    }
}

PauliTerm::PauliTerm(double coefficient, std::vector<PauliOp> ops) : coefficient_(coefficient), ops_(std::move(ops)) {
    if (!std::isfinite(coefficient_) || coefficient_ == 0.0) {
        throw Error(ErrorKind::InvalidArgument, "Pauli term coefficient must be finite and nonzero");
    }
    if (ops_.empty()) {
        throw Error(ErrorKind::InvalidArgument, "Pauli term needs at least one site; use identity_shift for I");
    }
    for (std::size_t i = 0; i < ops_.size(); ++i) {
        if (ops_[i].site >= kMaxSites) {
            throw Error(ErrorKind::InvalidArgument, "Pauli term site index out of range");
        }
        if (i > 0 && ops_[i].site <= ops_[i - 1].site) {
            throw Error(ErrorKind::InvalidArgument, "Pauli term sites must be strictly increasing");
        }
        const std::uint64_t bit = std::uint64_t{1} << ops_[i].site;
        switch (ops_[i].axis) {
            case Axis::X:
                x_mask_ |= bit;
                break;
            case Axis::Y:
                x_mask_ |= bit;
                z_mask_ |= bit;
                ++y_count_;
                break;
            case Axis::Z:
                z_mask_ |= bit;
                break;
        }
    }
}

PauliTerm PauliTerm::scaled(double factor) const {
    return PauliTerm(coefficient_ * factor, ops_);
}

PauliSum::PauliSum(std::size_t n_sites, double identity_shift, std::vector<PauliTerm> terms)
    : n_sites_(n_sites), identity_shift_(identity_shift), terms_(std::move(terms)) {
    check_sites(n_sites_);
    if (!std::isfinite(identity_shift_)) {
        throw Error(ErrorKind::InvalidArgument, "identity shift must be finite");
    }
    std::map<std::uint64_t, std::size_t> group_of_mask;
    for (const auto &term : terms_) {
        if (term.max_site() >= n_sites_) {
            throw Error(ErrorKind::InvalidArgument, "Pauli term references site " + std::to_string(term.max_site()) +
                                                        " in a " + std::to_string(n_sites_) + "-site sum");
        }
        if (term.y_count() % 2 != 0) {
            is_real_ = false;
        }
        auto [it, inserted] = group_of_mask.try_emplace(term.x_mask(), groups_.size());
        if (inserted) {
            groups_.push_back(FlipGroup{term.x_mask(), {}, {}});
        }
        auto &group = groups_[it->second];
        group.z_masks.push_back(term.z_mask());
        group.weights.push_back(term.coefficient() * i_power(term.y_count()));
    }
}

PauliSum PauliSum::shifted_negation(double shift) const {
    std::vector<PauliTerm> negated;
    negated.reserve(terms_.size());
    for (const auto &term : terms_) {
        negated.push_back(term.scaled(-1.0));
    }
    return PauliSum(n_sites_, shift - identity_shift_, std::move(negated));
}

Statevector::Statevector(std::size_t n_sites) : n_sites_(n_sites) {
    check_sites(n_sites_);
    amplitudes_ = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(std::size_t{1} << n_sites_));
    amplitudes_[0] = 1.0;
}

Statevector::Statevector(std::size_t n_sites, Eigen::VectorXcd amplitudes)
    : n_sites_(n_sites), amplitudes_(std::move(amplitudes)) {
    check_sites(n_sites_);
    if (static_cast<std::size_t>(amplitudes_.size()) != (std::size_t{1} << n_sites_)) {
        throw Error(ErrorKind::DimensionMismatch, "statevector length " + std::to_string(amplitudes_.size()) +
                                                      " is not 2^" + std::to_string(n_sites_));
    }
    if (!amplitudes_.allFinite()) {
        throw Error(ErrorKind::Numerical, "statevector has non-finite amplitudes");
    }
}

Statevector Statevector::basis(std::size_t n_sites, std::uint64_t index) {
    check_sites(n_sites);
    if (index >= (std::uint64_t{1} << n_sites)) {
        throw Error(ErrorKind::InvalidArgument, "basis index out of range");
    }
    Eigen::VectorXcd amplitudes = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(std::size_t{1} << n_sites));
    amplitudes[static_cast<Eigen::Index>(index)] = 1.0;
    return Statevector(n_sites, std::move(amplitudes));
}

Statevector Statevector::normalized() const {
    const double n = norm();
    if (n == 0.0) {
        throw Error(ErrorKind::Numerical, "cannot normalize the zero vector");
    }
    return Statevector(n_sites_, amplitudes_ / n);
}

void apply_into(const PauliSum &sum, std::span<const Complex> in, std::span<Complex> out) {
    const std::size_t dim = sum.dimension();
    if (in.size() != dim || out.size() != dim) {
        throw Error(ErrorKind::DimensionMismatch, "apply: vector length does not match 2^n_sites of the sum");
    }
    const double shift = sum.identity_shift();
    for (std::size_t t = 0; t < dim; ++t) {
        out[t] = shift * in[t];
    }
    for (const auto &group : sum.flip_groups()) {
        const std::size_t n_terms = group.z_masks.size();
        const std::uint64_t x = group.x_mask;
        for (std::uint64_t t = 0; t < dim; ++t) {
            const std::uint64_t s = t ^ x;
            Complex acc = 0.0;
            for (std::size_t j = 0; j < n_terms; ++j) {
                acc += parity_sign(s & group.z_masks[j]) * group.weights[j];
            }
            out[t] += acc * in[s];
        }
    }
}

Statevector apply(const PauliSum &sum, const Statevector &v) {
    if (v.n_sites() != sum.n_sites()) {
        throw Error(ErrorKind::DimensionMismatch, "apply: statevector has " + std::to_string(v.n_sites()) +
                                                      " sites, sum has " + std::to_string(sum.n_sites()));
    }
    Eigen::VectorXcd out(v.amplitudes().size());
    apply_into(sum, {v.amplitudes().data(), v.dimension()}, {out.data(), v.dimension()});
    return Statevector(v.n_sites(), std::move(out));
}

double expectation(const PauliSum &sum, const Statevector &v) {
    const Statevector hv = apply(sum, v);
    return v.amplitudes().dot(hv.amplitudes()).real();
}

double alpha_lcu(const PauliSum &sum) {
    double alpha = std::abs(sum.identity_shift());
    for (const auto &term : sum.terms()) {
        alpha += std::abs(term.coefficient());
    }
    return alpha;
}

Eigen::MatrixXcd dense_matrix(const PauliSum &sum, std::size_t max_sites) {
    if (sum.n_sites() > max_sites) {
        throw Error(ErrorKind::SizeLimit, "dense_matrix refuses " + std::to_string(sum.n_sites()) +
                                              " sites (limit " + std::to_string(max_sites) + ")");
    }
    const auto dim = static_cast<Eigen::Index>(sum.dimension());
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(dim, dim) * sum.identity_shift();
    for (const auto &group : sum.flip_groups()) {
        for (std::uint64_t s = 0; s < sum.dimension(); ++s) {
            Complex acc = 0.0;
            for (std::size_t j = 0; j < group.z_masks.size(); ++j) {
                acc += parity_sign(s & group.z_masks[j]) * group.weights[j];
            }
            m(static_cast<Eigen::Index>(s ^ group.x_mask), static_cast<Eigen::Index>(s)) += acc;
        }
    }
    return m;
}

Eigen::MatrixXd dense_matrix_real(const PauliSum &sum, std::size_t max_sites) {
    if (!sum.is_real()) {
        throw Error(ErrorKind::InvalidArgument, "dense_matrix_real: sum has terms with an odd number of Y factors");
    }
    if (sum.n_sites() > max_sites) {
        throw Error(ErrorKind::SizeLimit, "dense_matrix_real refuses " + std::to_string(sum.n_sites()) +
                                              " sites (limit " + std::to_string(max_sites) + ")");
    }
    const auto dim = static_cast<Eigen::Index>(sum.dimension());
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(dim, dim) * sum.identity_shift();
    for (const auto &group : sum.flip_groups()) {
        for (std::uint64_t s = 0; s < sum.dimension(); ++s) {
            double acc = 0.0;
            for (std::size_t j = 0; j < group.z_masks.size(); ++j) {
                acc += parity_sign(s & group.z_masks[j]) * group.weights[j].real();
            }
            m(static_cast<Eigen::Index>(s ^ group.x_mask), static_cast<Eigen::Index>(s)) += acc;
        }
    }
    return m;
}

}  // namespace qtpq
