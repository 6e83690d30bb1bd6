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

#include "latred/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "latred/error.hpp"

namespace latred {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.resize(rows_ * cols_);
    std::size_t i = 0;
    for (const auto& row : rows) {
        if (row.size() != cols_) {
            throw DimensionError("ragged matrix literal");
        }
        std::size_t j = 0;
        for (const auto& v : row) {
            (*this)(i, j++) = v;
        }
        ++i;
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

void ComplexMatrix::swap_cols(std::size_t a, std::size_t b) {
    if (a == b) {
        return;
    }
    std::swap_ranges(col(a).begin(), col(a).end(), col(b).begin());
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t j = 0; j < cols_; ++j) {
        for (std::size_t i = 0; i < rows_; ++i) {
            out(j, i) = std::conj((*this)(i, j));
        }
    }
    return out;
}

ComplexMatrix ComplexMatrix::block(std::size_t rows, std::size_t cols) const {
    if (rows > rows_ || cols > cols_) {
        throw DimensionError("block exceeds matrix bounds");
    }
    ComplexMatrix out(rows, cols);
    for (std::size_t j = 0; j < cols; ++j) {
        for (std::size_t i = 0; i < rows; ++i) {
            out(i, j) = (*this)(i, j);
        }
    }
    return out;
}

double ComplexMatrix::max_abs() const { return latred::max_abs(data_); }

bool ComplexMatrix::all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](const Complex& c) {
        return std::isfinite(c.real()) && std::isfinite(c.imag());
    });
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) {
        throw DimensionError("matrix product: inner dimensions differ");
    }
    ComplexMatrix c(a.rows(), b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Complex bkj = b(k, j);
            for (std::size_t i = 0; i < a.rows(); ++i) {
                c(i, j) += a(i, k) * bkj;
            }
        }
    }
    return c;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError("matrix difference: shapes differ");
    }
    ComplexMatrix c(a.rows(), a.cols());
    for (std::size_t j = 0; j < a.cols(); ++j) {
        for (std::size_t i = 0; i < a.rows(); ++i) {
            c(i, j) = a(i, j) - b(i, j);
        }
    }
    return c;
}

ComplexVector operator*(const ComplexMatrix& a, std::span<const Complex> x) {
    if (a.cols() != x.size()) {
        throw DimensionError("matrix-vector product: length mismatch");
    }
    ComplexVector y(a.rows());
    for (std::size_t j = 0; j < a.cols(); ++j) {
        for (std::size_t i = 0; i < a.rows(); ++i) {
            y[i] += a(i, j) * x[j];
        }
    }
    return y;
}

ComplexVector adjoint_times(const ComplexMatrix& a, std::span<const Complex> x) {
    if (a.rows() != x.size()) {
        throw DimensionError("adjoint product: length mismatch");
    }
    ComplexVector y(a.cols());
    for (std::size_t j = 0; j < a.cols(); ++j) {
        Complex acc = 0.0;
        for (std::size_t i = 0; i < a.rows(); ++i) {
            acc += std::conj(a(i, j)) * x[i];
        }
        y[j] = acc;
    }
    return y;
}

double max_abs(std::span<const Complex> v) {
    double m = 0.0;
    for (const auto& c : v) {
        m = std::max(m, std::abs(c));
    }
    return m;
}

double column_norm(const ComplexMatrix& a, std::size_t j) {
    double s = 0.0;
    for (const auto& c : a.col(j)) {
        s += std::norm(c);
    }
    return std::sqrt(s);
}

QrFactors QrFactors::thin() const {
    return {q.block(q.rows(), r.cols()), r.block(r.cols(), r.cols())};
}

Givens make_givens(Complex top, Complex bottom) {
    const double nrm = std::hypot(std::abs(top), std::abs(bottom));
    if (nrm == 0.0) {
        return {1.0, 0.0, 0.0};
    }
    return {top / nrm, bottom / nrm, nrm};
}

void apply_givens_rows(ComplexMatrix& a, const Givens& g, std::size_t p, std::size_t q,
                       std::size_t first_col) {
    const Complex ca = std::conj(g.alpha);
    const Complex cb = std::conj(g.beta);
    for (std::size_t j = first_col; j < a.cols(); ++j) {
        const Complex top = a(p, j);
        const Complex bot = a(q, j);
        a(p, j) = ca * top + cb * bot;
        a(q, j) = -g.beta * top + g.alpha * bot;
    }
}

void apply_givens_cols(ComplexMatrix& a, const Givens& g, std::size_t p, std::size_t q) {
    const Complex ca = std::conj(g.alpha);
    const Complex cb = std::conj(g.beta);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const Complex left = a(i, p);
        const Complex right = a(i, q);
        a(i, p) = left * g.alpha + right * g.beta;
        a(i, q) = -left * cb + right * ca;
    }
}

QrFactors qr_decompose(const ComplexMatrix& h) {
    if (h.empty()) {
        throw DimensionError("qr_decompose: empty matrix");
    }
    if (h.rows() < h.cols()) {
        throw DimensionError("qr_decompose: need rows >= cols");
    }
    if (!h.all_finite()) {
        throw NonFiniteInput("qr_decompose: non-finite entry");
    }

    const std::size_t n = h.rows();
    const std::size_t m = h.cols();
    QrFactors f{ComplexMatrix::identity(n), h};

    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = n - 1; i > j; --i) {
            if (f.r(i, j) == Complex{}) {
                continue;
            }
            const Givens g = make_givens(f.r(i - 1, j), f.r(i, j));
            apply_givens_rows(f.r, g, i - 1, i, j);
            apply_givens_cols(f.q, g, i - 1, i);
            f.r(i - 1, j) = g.norm;
            f.r(i, j) = 0.0;
        }
        // Untouched columns keep whatever phase they came in with.
        const Complex d = f.r(j, j);
        if (d.imag() != 0.0 || d.real() < 0.0) {
            const double mag = std::abs(d);
            const Complex phase = d / mag;
            for (std::size_t k = j; k < m; ++k) {
                f.r(j, k) *= std::conj(phase);
            }
            for (auto& v : f.q.col(j)) {
                v *= phase;
            }
            f.r(j, j) = mag;
        }
    }
    return f;
}

ComplexVector solve_upper_triangular(const ComplexMatrix& r, std::span<const Complex> b) {
    const std::size_t n = r.rows();
    if (r.cols() != n || b.size() != n) {
        throw DimensionError("solve_upper_triangular: shape mismatch");
    }
    ComplexVector x(b.begin(), b.end());
    for (std::size_t ii = n; ii-- > 0;) {
        const Complex d = r(ii, ii);
        if (std::abs(d) < 1e-12) {
            throw SingularPivot("solve_upper_triangular: pivot " + std::to_string(ii) +
                                " below 1e-12");
        }
        Complex acc = x[ii];
        for (std::size_t j = ii + 1; j < n; ++j) {
            acc -= r(ii, j) * x[j];
        }
        x[ii] = acc / d;
    }
    return x;
}

double orthogonality_defect(const ComplexMatrix& b) {
    if (b.empty() || b.rows() < b.cols()) {
        throw RankDeficient("orthogonality_defect: need a full column rank basis");
    }
    const QrFactors f = qr_decompose(b);
    double num = 1.0;
    double vol = 1.0;
    double max_norm = 0.0;
    for (std::size_t j = 0; j < b.cols(); ++j) {
        const double cn = column_norm(b, j);
        num *= cn;
        vol *= f.r(j, j).real();
        max_norm = std::max(max_norm, cn);
    }
    for (std::size_t j = 0; j < b.cols(); ++j) {
        if (f.r(j, j).real() <= 1e-12 * max_norm) {
            throw RankDeficient("orthogonality_defect: basis is rank deficient");
        }
    }
    if (vol == 0.0 || !std::isfinite(vol) || !std::isfinite(num)) {
        throw RankDeficient("orthogonality_defect: determinant underflow");
    }
    return num / vol;
}

Complex round_gaussian(Complex c) { return {std::round(c.real()), std::round(c.imag())}; }

bool is_gaussian_integer(Complex c) {
    return c.real() == std::round(c.real()) && c.imag() == std::round(c.imag());
}

Complex determinant(const ComplexMatrix& a) {
    if (a.rows() != a.cols()) {
        throw DimensionError("determinant: matrix not square");
    }
    ComplexMatrix lu = a;
    const std::size_t n = a.rows();
    Complex det = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::abs(lu(i, k)) > std::abs(lu(piv, k))) {
                piv = i;
            }
        }
        if (lu(piv, k) == Complex{}) {
            return 0.0;
        }
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(lu(k, j), lu(piv, j));
            }
            det = -det;
        }
        det *= lu(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const Complex f = lu(i, k) / lu(k, k);
            for (std::size_t j = k; j < n; ++j) {
                lu(i, j) -= f * lu(k, j);
            }
        }
    }
    return det;
}

} // namespace latred
