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

#include <cstddef>
#include <cstdint>
#include <vector>

#include "latred/linalg.hpp"

namespace latred {

/// Exact Gaussian integer a + bi.
struct GaussInt {
    std::int64_t re = 0;
    std::int64_t im = 0;

    friend constexpr bool operator==(GaussInt, GaussInt) = default;
    friend constexpr GaussInt operator+(GaussInt a, GaussInt b) { return {a.re + b.re, a.im + b.im}; }
    friend constexpr GaussInt operator-(GaussInt a, GaussInt b) { return {a.re - b.re, a.im - b.im}; }
    friend constexpr GaussInt operator-(GaussInt a) { return {-a.re, -a.im}; }
    friend constexpr GaussInt operator*(GaussInt a, GaussInt b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }

    constexpr bool is_zero() const { return re == 0 && im == 0; }
    constexpr std::int64_t norm() const { return re * re + im * im; }
    constexpr GaussInt conj() const { return {re, -im}; }
    constexpr bool is_unit() const { return norm() == 1; }

    Complex to_complex() const { return {static_cast<double>(re), static_cast<double>(im)}; }
};

/// Exact conversion; throws NotUnimodular if c is not a Gaussian integer.
GaussInt to_gauss_int(Complex c);

/// a / b when the division is exact in Z[i]; throws otherwise.
GaussInt exact_div(GaussInt a, GaussInt b);

/// Square Gaussian-integer matrix, column-major like ComplexMatrix.
class GaussIntMatrix {
  public:
    GaussIntMatrix() = default;
    explicit GaussIntMatrix(std::size_t n) : n_(n), data_(n * n) {}

    static GaussIntMatrix identity(std::size_t n);
    static GaussIntMatrix from_complex(const ComplexMatrix& m);

    std::size_t size() const { return n_; }
    GaussInt& operator()(std::size_t i, std::size_t j) { return data_[j * n_ + i]; }
    GaussInt operator()(std::size_t i, std::size_t j) const { return data_[j * n_ + i]; }

    void swap_cols(std::size_t a, std::size_t b);

    /// Column k -= mu * column l.
    void axpy_col(std::size_t k, GaussInt mu, std::size_t l);

    ComplexMatrix to_complex() const;

    friend bool operator==(const GaussIntMatrix&, const GaussIntMatrix&) = default;

  private:
    std::size_t n_ = 0;
    std::vector<GaussInt> data_;
};

GaussIntMatrix operator*(const GaussIntMatrix& a, const GaussIntMatrix& b);

/// Exact determinant (fraction-free elimination).
GaussInt determinant(const GaussIntMatrix& a);

/// Exact inverse of a unimodular matrix (|det| = 1) by fraction-free
/// Gauss-Jordan elimination. Throws NotUnimodular otherwise.
GaussIntMatrix inverse_unimodular(const GaussIntMatrix& a);

} // namespace latred
