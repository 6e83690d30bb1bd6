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

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "latred/linalg.hpp"
#include "latred/reduction.hpp"

namespace latred {

using Bits = std::vector<std::uint8_t>;

/// Gray-labelled 16-QAM on the odd-integer grid {-3, -1, 1, 3}^2.
///
/// A 4-bit label b0 b1 b2 b3 maps b0 b1 to the real axis and b2 b3 to the
/// imaginary axis with 00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3.
struct Qam16 {
    static constexpr std::size_t kBitsPerSymbol = 4;
    static constexpr double kAverageEnergy = 10.0;

    static Complex point(unsigned label);
    static unsigned label(Complex point);

    /// All 16 points in label order.
    static const std::array<Complex, 16>& points();
};

/// Map 4*M bits to M symbols. Throws DimensionError on a bad length.
ComplexVector qam16_modulate(std::span<const std::uint8_t> bits);

/// Inverse of qam16_modulate for constellation points.
Bits qam16_demodulate(std::span<const Complex> symbols);

/// Nearest constellation point; ties go to the smaller real, then smaller
/// imaginary coordinate.
Complex qam16_slice(Complex z);

/// Zero forcing through the QR factors: slice(R^-1 Q^H y). Accepts full or
/// thin factors.
ComplexVector zf_detect(const QrFactors& qr, std::span<const Complex> y);

/// Zero forcing in the reduced basis. The unconstrained estimate
/// z = R~^-1 Q~^H y lives on the shifted lattice T^-1 (odd + odd j), so it is
/// rounded as 2 round((z - s) / 2) + s with s = T^-1 (1 + j) 1, mapped back
/// with T and sliced to the constellation.
ComplexVector lr_zf_detect(const ReducedBasis& rb, std::span<const Complex> y);

inline constexpr std::size_t kMlMaxStreams = 4;

/// Exhaustive maximum likelihood over 16^M candidates. Candidates are visited
/// in lexicographic label order (stream 0 most significant) and the first
/// minimum wins. Throws DimensionError when M exceeds kMlMaxStreams.
ComplexVector ml_detect(const ComplexMatrix& h, std::span<const Complex> y);

/// Number of differing bits between the Gray labels of two symbol vectors.
std::size_t bit_errors(std::span<const Complex> sent, std::span<const Complex> detected);

} // namespace latred
