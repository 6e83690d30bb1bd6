// SPDX-License-Identifier: Apache-2.0
//
// latred - lattice-reduction-aided MIMO detection toolkit
// Copyright (C) 2026 The latred authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "latred/gaussian_int.hpp"

#include <cmath>
#include <utility>

#include "latred/error.hpp"

namespace latred {

GaussInt to_gauss_int(Complex c) {
    if (!is_gaussian_integer(c) || std::abs(c.real()) > 9.0e15 || std::abs(c.imag()) > 9.0e15) {
        throw NotUnimodular("entry is not a Gaussian integer");
    }
    return {static_cast<std::int64_t>(c.real()), static_cast<std::int64_t>(c.imag())};
}

GaussInt exact_div(GaussInt a, GaussInt b) {
    if (b.is_zero()) {
        throw NotUnimodular("division by zero in Z[i]");
    }
    const GaussInt num = a * b.conj();
    const std::int64_t den = b.norm();
    if (num.re % den != 0 || num.im % den != 0) {
        throw NotUnimodular("inexact division in Z[i]");
    }
    return {num.re / den, num.im / den};
}

GaussIntMatrix GaussIntMatrix::identity(std::size_t n) {
    GaussIntMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = {1, 0};
    }
    return m;
}

GaussIntMatrix GaussIntMatrix::from_complex(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) {
        throw DimensionError("GaussIntMatrix: matrix not square");
    }
    GaussIntMatrix g(m.rows());
    for (std::size_t j = 0; j < m.cols(); ++j) {
        for (std::size_t i = 0; i < m.rows(); ++i) {
            g(i, j) = to_gauss_int(m(i, j));
        }
    }
    return g;
}

void GaussIntMatrix::swap_cols(std::size_t a, std::size_t b) {
    for (std::size_t i = 0; i < n_; ++i) {
        std::swap((*this)(i, a), (*this)(i, b));
    }
}

void GaussIntMatrix::axpy_col(std::size_t k, GaussInt mu, std::size_t l) {
    for (std::size_t i = 0; i < n_; ++i) {
        (*this)(i, k) = (*this)(i, k) - mu * (*this)(i, l);
    }
}

ComplexMatrix GaussIntMatrix::to_complex() const {
    ComplexMatrix m(n_, n_);
    for (std::size_t j = 0; j < n_; ++j) {
        for (std::size_t i = 0; i < n_; ++i) {
            m(i, j) = (*this)(i, j).to_complex();
        }
    }
    return m;
}

GaussIntMatrix operator*(const GaussIntMatrix& a, const GaussIntMatrix& b) {
    if (a.size() != b.size()) {
        throw DimensionError("GaussIntMatrix product: sizes differ");
    }
    const std::size_t n = a.size();
    GaussIntMatrix c(n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
            const GaussInt bkj = b(k, j);
            for (std::size_t i = 0; i < n; ++i) {
                c(i, j) = c(i, j) + a(i, k) * bkj;
            }
        }
    }
    return c;
}

namespace {

// Fraction-free Gauss-Jordan on the augmented rows [a | I]. Every
// intermediate entry is a minor of a, so each division by the previous
// pivot is exact. After step k the first k+1 diagonal entries all equal the
// step-k pivot, so at the end the left block is pivot * I and the right block
// pivot * a^-1. Returns det a.
GaussInt fraction_free_gauss_jordan(std::vector<std::vector<GaussInt>>& m, std::size_t n) {
    GaussInt prev{1, 0};
    GaussInt sign{1, 0};
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        while (piv < n && m[piv][k].is_zero()) {
            ++piv;
        }
        if (piv == n) {
            return {0, 0};
        }
        if (piv != k) {
            std::swap(m[piv], m[k]);
            sign = -sign;
        }
        const GaussInt p = m[k][k];
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k) {
                continue;
            }
            const GaussInt f = m[i][k];
            for (std::size_t j = 0; j < m[i].size(); ++j) {
                m[i][j] = exact_div(p * m[i][j] - f * m[k][j], prev);
            }
        }
        prev = p;
    }
    return prev * sign;
}

std::vector<std::vector<GaussInt>> augmented_rows(const GaussIntMatrix& a, bool with_identity) {
    const std::size_t n = a.size();
    std::vector<std::vector<GaussInt>> m(n, std::vector<GaussInt>(with_identity ? 2 * n : n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            m[i][j] = a(i, j);
        }
        if (with_identity) {
            m[i][n + i] = {1, 0};
        }
    }
    return m;
}

} // namespace

GaussInt determinant(const GaussIntMatrix& a) {
    auto m = augmented_rows(a, false);
    return fraction_free_gauss_jordan(m, a.size());
}

GaussIntMatrix inverse_unimodular(const GaussIntMatrix& a) {
    const std::size_t n = a.size();
    auto m = augmented_rows(a, true);
    const GaussInt det = fraction_free_gauss_jordan(m, n);
    if (!det.is_unit()) {
        throw NotUnimodular("inverse_unimodular: determinant is not a unit");
    }
    // Row swaps act on the augmented rows too: the left block is pivot * I
    // with pivot = +-det.
    const GaussInt pivot = m[n - 1][n - 1];
    GaussIntMatrix inv(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            inv(i, j) = exact_div(m[i][n + j], pivot);
        }
    }
    if (!(a * inv == GaussIntMatrix::identity(n))) {
        throw NotUnimodular("inverse_unimodular: verification failed");
    }
    return inv;
}

} // namespace latred
