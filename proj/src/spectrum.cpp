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

#include "qtpq/spectrum.hpp"

#include <dlfcn.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "qtpq/rng.hpp"

namespace qtpq {

namespace {

Eigen::VectorXcd apply_vec(const PauliSum &h, const Eigen::VectorXcd &v) {
    Eigen::VectorXcd out(v.size());
    apply_into(h, {v.data(), static_cast<std::size_t>(v.size())}, {out.data(), static_cast<std::size_t>(out.size())});
    return out;
}

void check_dense_limit(const PauliSum &h, std::size_t max_sites, const char *what) {
    if (h.n_sites() > max_sites) {
        throw Error(ErrorKind::SizeLimit, std::string(what) + " refuses " + std::to_string(h.n_sites()) +
                                              " sites (dense limit " + std::to_string(max_sites) + ")");
    }
}

// LAPACK is resolved at run time so the OpenBLAS kernel can be chosen before
// the library initializes: OPENBLAS_CORETYPE defaults to Haswell on x86-64
// unless already set. Every dense result is checked and recomputed with Eigen
// if the check fails or no LAPACK is found.

using DsyevdFn = void (*)(const char *, const char *, const int *, double *, const int *, double *, double *,
                          const int *, int *, const int *, int *, std::size_t, std::size_t);
using ZheevdFn = void (*)(const char *, const char *, const int *, Complex *, const int *, double *, Complex *,
                          const int *, double *, const int *, int *, const int *, int *, std::size_t, std::size_t);

struct LapackRoutines {
    DsyevdFn dsyevd = nullptr;
    ZheevdFn zheevd = nullptr;
};

const LapackRoutines &lapack() {
    static const LapackRoutines routines = [] {
#if defined(__x86_64__)
        setenv("OPENBLAS_CORETYPE", "Haswell", 0);
#endif
        for (const char *name : {"liblapack.so.3", "libopenblas.so.0", "liblapack.so"}) {
            void *handle = dlopen(name, RTLD_NOW | RTLD_LOCAL);
            if (handle == nullptr) {
                continue;
            }
            LapackRoutines r{reinterpret_cast<DsyevdFn>(dlsym(handle, "dsyevd_")),
                             reinterpret_cast<ZheevdFn>(dlsym(handle, "zheevd_"))};
            if (r.dsyevd != nullptr && r.zheevd != nullptr) {
                return r;
            }
        }
        return LapackRoutines{};
    }();
    return routines;
}

// In place: eigenvectors replace `a` when `vectors`. False if unavailable or failed.
bool lapack_eigh(Eigen::MatrixXd &a, Eigen::VectorXd &w, bool vectors) {
    if (lapack().dsyevd == nullptr || a.rows() > std::numeric_limits<int>::max()) {
        return false;
    }
    const int n = static_cast<int>(a.rows());
    const char jobz = vectors ? 'V' : 'N', uplo = 'U';
    int info = 0, lwork = -1, liwork = -1, iwork_query = 0;
    double work_query = 0.0;
    lapack().dsyevd(&jobz, &uplo, &n, a.data(), &n, w.data(), &work_query, &lwork, &iwork_query, &liwork, &info, 1,
                    1);
    if (info != 0) {
        return false;
    }
    lwork = static_cast<int>(work_query);
    liwork = iwork_query;
    std::vector<double> work(static_cast<std::size_t>(std::max(lwork, 1)));
    std::vector<int> iwork(static_cast<std::size_t>(std::max(liwork, 1)));
    lapack().dsyevd(&jobz, &uplo, &n, a.data(), &n, w.data(), work.data(), &lwork, iwork.data(), &liwork, &info, 1,
                    1);
    return info == 0;
}

bool lapack_eigh(Eigen::MatrixXcd &a, Eigen::VectorXd &w, bool vectors) {
    if (lapack().zheevd == nullptr || a.rows() > std::numeric_limits<int>::max()) {
        return false;
    }
    const int n = static_cast<int>(a.rows());
    const char jobz = vectors ? 'V' : 'N', uplo = 'U';
    int info = 0, lwork = -1, lrwork = -1, liwork = -1, iwork_query = 0;
    Complex work_query = 0.0;
    double rwork_query = 0.0;
    lapack().zheevd(&jobz, &uplo, &n, a.data(), &n, w.data(), &work_query, &lwork, &rwork_query, &lrwork,
                    &iwork_query, &liwork, &info, 1, 1);
    if (info != 0) {
        return false;
    }
    lwork = static_cast<int>(work_query.real());
    lrwork = static_cast<int>(rwork_query);
    liwork = iwork_query;
    std::vector<Complex> work(static_cast<std::size_t>(std::max(lwork, 1)));
    std::vector<double> rwork(static_cast<std::size_t>(std::max(lrwork, 1)));
    std::vector<int> iwork(static_cast<std::size_t>(std::max(liwork, 1)));
    lapack().zheevd(&jobz, &uplo, &n, a.data(), &n, w.data(), work.data(), &lwork, rwork.data(), &lrwork,
                    iwork.data(), &liwork, &info, 1, 1);
    return info == 0;
}

// Sum and sum of squares of the eigenvalues against trace and Frobenius norm.
template <class Matrix>
bool eigenvalues_consistent(const Matrix &a, const Eigen::VectorXd &w) {
    if (!w.allFinite()) {
        return false;
    }
    const double fro2 = a.cwiseAbs2().sum();
    const double scale = std::max(1.0, std::sqrt(fro2));
    const double n = static_cast<double>(a.rows());
    const double trace = a.diagonal().real().sum();
    return std::abs(w.sum() - trace) <= 1e-10 * n * scale && std::abs(w.squaredNorm() - fro2) <= 1e-10 * n * scale * scale;
}

// Residual and orthonormality on a spread of columns.
template <class Matrix>
bool eigenpairs_consistent(const Matrix &a, const Matrix &v, const Eigen::VectorXd &w) {
    if (!eigenvalues_consistent(a, w) || !v.allFinite()) {
        return false;
    }
    const Eigen::Index n = a.rows();
    const double scale = std::max(1.0, w.cwiseAbs().maxCoeff());
    const Eigen::Index samples = std::min<Eigen::Index>(n, 16);
    std::vector<Eigen::Index> cols;
    for (Eigen::Index s = 0; s < samples; ++s) {
        cols.push_back(samples == 1 ? 0 : s * (n - 1) / (samples - 1));
    }
    for (Eigen::Index c : cols) {
        if ((a * v.col(c) - w[c] * v.col(c)).norm() > 1e-9 * scale) {
            return false;
        }
        for (Eigen::Index d : cols) {
            const double target = c == d ? 1.0 : 0.0;
            if (std::abs(std::abs(v.col(c).dot(v.col(d))) - target) > 1e-9) {
                return false;
            }
        }
    }
    return true;
}

template <class Matrix>
Eigen::VectorXd dense_eigenvalues(const Matrix &a) {
    Matrix work = a;
    Eigen::VectorXd w(a.rows());
    if (lapack_eigh(work, w, false) && eigenvalues_consistent(a, w)) {
        return w;
    }
    return Eigen::SelfAdjointEigenSolver<Matrix>(a, Eigen::EigenvaluesOnly).eigenvalues();
}

template <class Matrix>
std::pair<Eigen::VectorXd, Matrix> dense_eigenpairs(const Matrix &a) {
    Matrix v = a;
    Eigen::VectorXd w(a.rows());
    if (lapack_eigh(v, w, true) && eigenpairs_consistent(a, v, w)) {
        return {std::move(w), std::move(v)};
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(a);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorKind::Numerical, "dense eigensolver failed");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

}  // namespace

SpectrumResult extremal_eigenvalues(const PauliSum &h, const LanczosOptions &options) {
    if (!(options.tol > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "Lanczos tolerance must be positive");
    }
    if (options.max_basis < 2 * options.keep + 2) {
        throw Error(ErrorKind::InvalidArgument, "Lanczos max_basis must exceed 2 * keep + 1");
    }
    const auto dim = static_cast<Eigen::Index>(h.dimension());
    const std::size_t basis_cap = std::min<std::size_t>(options.max_basis, h.dimension());

    RandomSource rng(options.seed);
    Eigen::VectorXcd start(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        start[i] = rng.complex_normal();
    }
    start.normalize();

    std::vector<Eigen::VectorXcd> basis{start};
    Eigen::MatrixXcd projected(0, 0);
    SpectrumResult best;
    best.e_min = best.e_max = std::nan("");
    best.residual_norms = {INFINITY, INFINITY};

    while (true) {
        const std::size_t j = basis.size() - 1;
        Eigen::VectorXcd w = apply_vec(h, basis[j]);
        ++best.iterations;

        Eigen::VectorXcd coeff = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(j + 1));
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t i = 0; i <= j; ++i) {
                const Complex c = basis[i].dot(w);
                coeff[static_cast<Eigen::Index>(i)] += c;
                w -= c * basis[i];
            }
        }
        const auto m = static_cast<Eigen::Index>(j + 1);
        projected.conservativeResize(m, m);
        for (Eigen::Index i = 0; i < m - 1; ++i) {
            projected(i, m - 1) = coeff[i];
            projected(m - 1, i) = std::conj(coeff[i]);
        }
        projected(m - 1, m - 1) = coeff[m - 1].real();
        const double beta = w.norm();

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ritz(projected);
        const auto &theta = ritz.eigenvalues();
        const auto &s = ritz.eigenvectors();
        best.e_min = theta[0];
        best.e_max = theta[m - 1];
        best.residual_norms = {beta * std::abs(s(m - 1, 0)), beta * std::abs(s(m - 1, m - 1))};

        const double scale = std::max({1.0, std::abs(best.e_min), std::abs(best.e_max)});
        const bool breakdown = beta <= 1e-13 * scale || basis.size() == h.dimension();
        if (breakdown || (best.residual_norms[0] <= options.tol && best.residual_norms[1] <= options.tol)) {
            // Confirm with explicit residuals of the Ritz vectors.
            std::array<Eigen::VectorXcd, 2> x{Eigen::VectorXcd::Zero(dim), Eigen::VectorXcd::Zero(dim)};
            for (std::size_t l = 0; l <= j; ++l) {
                x[0] += s(static_cast<Eigen::Index>(l), 0) * basis[l];
                x[1] += s(static_cast<Eigen::Index>(l), m - 1) * basis[l];
            }
            std::array<double, 2> explicit_residual{};
            for (int e = 0; e < 2; ++e) {
                x[e].normalize();
                const Eigen::VectorXcd hx = apply_vec(h, x[e]);
                const double rq = x[e].dot(hx).real();
                explicit_residual[e] = (hx - rq * x[e]).norm();
                (e == 0 ? best.e_min : best.e_max) = rq;
            }
            best.residual_norms = explicit_residual;
            if (breakdown || (explicit_residual[0] <= options.tol && explicit_residual[1] <= options.tol)) {
                if (best.residual_norms[0] > options.tol || best.residual_norms[1] > options.tol) {
                    throw ConvergenceError("Lanczos stalled in an invariant subspace with residuals above tolerance",
                                           best);
                }
                return best;
            }
        }
        if (best.iterations >= options.max_iter) {
            throw ConvergenceError("Lanczos did not converge in " + std::to_string(options.max_iter) +
                                       " iterations (residuals " + std::to_string(best.residual_norms[0]) + ", " +
                                       std::to_string(best.residual_norms[1]) + ")",
                                   best);
        }

        Eigen::VectorXcd next = w / beta;
        if (basis.size() == basis_cap) {
            // Thick restart: keep the extremal Ritz vectors at both ends.
            std::vector<Eigen::Index> kept;
            for (std::size_t e = 0; e < options.keep; ++e) {
                kept.push_back(static_cast<Eigen::Index>(e));
                kept.push_back(m - 1 - static_cast<Eigen::Index>(e));
            }
            std::sort(kept.begin(), kept.end());
            kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
            std::vector<Eigen::VectorXcd> restarted;
            Eigen::MatrixXcd diag = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(kept.size()),
                                                           static_cast<Eigen::Index>(kept.size()));
            for (std::size_t r = 0; r < kept.size(); ++r) {
                Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
                for (std::size_t l = 0; l <= j; ++l) {
                    v += s(static_cast<Eigen::Index>(l), kept[r]) * basis[l];
                }
                restarted.push_back(std::move(v));
                diag(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r)) = theta[kept[r]];
            }
            basis = std::move(restarted);
            projected = std::move(diag);
        }
        basis.push_back(std::move(next));
    }
}

std::vector<double> full_spectrum(const PauliSum &h, std::size_t max_sites) {
    check_dense_limit(h, max_sites, "full_spectrum");
    const Eigen::VectorXd w =
        h.is_real() ? dense_eigenvalues(dense_matrix_real(h, max_sites)) : dense_eigenvalues(dense_matrix(h, max_sites));
    return std::vector<double>(w.begin(), w.end());
}

EigenSystem eigensystem(const PauliSum &h, std::size_t max_sites) {
    check_dense_limit(h, max_sites, "eigensystem");
    EigenSystem result;
    if (h.is_real()) {
        auto [w, v] = dense_eigenpairs(dense_matrix_real(h, max_sites));
        result.values = std::move(w);
        result.vectors = v.cast<Complex>();
    } else {
        auto [w, v] = dense_eigenpairs(dense_matrix(h, max_sites));
        result.values = std::move(w);
        result.vectors = std::move(v);
    }
    return result;
}

namespace {

struct CanonicalMoments {
    double mean;
    double variance;
};

CanonicalMoments canonical_moments(std::span<const double> eigenvalues, double beta) {
    if (eigenvalues.empty()) {
        throw Error(ErrorKind::InvalidArgument, "canonical average of an empty spectrum");
    }
    const double e0 = *std::min_element(eigenvalues.begin(), eigenvalues.end());
    double z = 0.0, e1 = 0.0, e2 = 0.0;
    for (double e : eigenvalues) {
        const double w = std::exp(-beta * (e - e0));
        z += w;
        e1 += w * (e - e0);
        e2 += w * (e - e0) * (e - e0);
    }
    const double mean = e1 / z;
    return {e0 + mean, e2 / z - mean * mean};
}

}  // namespace

double canonical_energy(std::span<const double> eigenvalues, double beta) {
    return canonical_moments(eigenvalues, beta).mean;
}

double canonical_energy_variance(std::span<const double> eigenvalues, double beta) {
    return canonical_moments(eigenvalues, beta).variance;
}

}  // namespace qtpq
