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

#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace latred {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

/// Dense complex matrix, column-major.
///
/// Column-major storage keeps every column a contiguous span, which is the
/// access pattern of the reduction algorithms (column updates, column swaps).
class ComplexMatrix {
  public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols);

    /// Row-major nested initializer, convenient for literals in tests.
    ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static ComplexMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    Complex& operator()(std::size_t i, std::size_t j) { return data_[j * rows_ + i]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return data_[j * rows_ + i]; }

    std::span<Complex> col(std::size_t j) { return {data_.data() + j * rows_, rows_}; }
    std::span<const Complex> col(std::size_t j) const { return {data_.data() + j * rows_, rows_}; }

    std::span<const Complex> data() const { return data_; }

    void swap_cols(std::size_t a, std::size_t b);

    ComplexMatrix adjoint() const;

    /// Leading rows x cols block.
    ComplexMatrix block(std::size_t rows, std::size_t cols) const;

    /// Largest entry magnitude, max over |a(i,j)|.
    double max_abs() const;

    bool all_finite() const;

    friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector operator*(const ComplexMatrix& a, std::span<const Complex> x);

/// a^H x without forming the adjoint.
ComplexVector adjoint_times(const ComplexMatrix& a, std::span<const Complex> x);

double max_abs(std::span<const Complex> v);
double column_norm(const ComplexMatrix& a, std::size_t j);

struct QrFactors {
    ComplexMatrix q; // rows x rows, unitary
    ComplexMatrix r; // rows x cols, upper triangular, real non-negative diagonal

    /// Economy factors: first cols columns of q and the leading square of r.
    QrFactors thin() const;
};

/// Complex 2x2 Givens coefficients zeroing `bottom` against `top`.
///
/// With nrm = sqrt(|top|^2 + |bottom|^2), alpha = top / nrm and
/// beta = bottom / nrm, the rotation [[conj(a), conj(b)], [-b, a]] maps
/// (top, bottom) to (nrm, 0).
struct Givens {
    Complex alpha;
    Complex beta;
    double norm;
};

Givens make_givens(Complex top, Complex bottom);

/// Rows (p, q) := G * rows (p, q) for columns [first_col, a.cols()).
void apply_givens_rows(ComplexMatrix& a, const Givens& g, std::size_t p, std::size_t q,
                       std::size_t first_col);

/// Columns (p, q) := columns (p, q) * G^H.
void apply_givens_cols(ComplexMatrix& a, const Givens& g, std::size_t p, std::size_t q);

/// QR by complex Givens rotations. Requires h.rows() >= h.cols() and finite
/// entries. The diagonal of R is made real and non-negative by moving each
/// residual phase into the matching column of Q.
QrFactors qr_decompose(const ComplexMatrix& h);

/// Back substitution for square upper-triangular r. Throws SingularPivot when
/// a diagonal magnitude falls below 1e-12.
ComplexVector solve_upper_triangular(const ComplexMatrix& r, std::span<const Complex> b);

/// prod_j ||b(:, j)|| / |det(b^H b)|^(1/2); 1 for an orthogonal basis.
double orthogonality_defect(const ComplexMatrix& b);

/// Nearest Gaussian integer, half away from zero per component.
Complex round_gaussian(Complex c);

bool is_gaussian_integer(Complex c);

/// Determinant by partial-pivot LU on a copy. Square matrices only.
Complex determinant(const ComplexMatrix& a);

} // namespace latred
