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

#include "latred/detect.hpp"

#include <bit>
#include <cmath>
#include <limits>

#include "latred/error.hpp"
#include "latred/gaussian_int.hpp"

namespace latred {

namespace {

// Gray order of the axis amplitudes, indexed by the two axis bits.
constexpr std::array<double, 4> kAxisLevel = {-3.0, -1.0, 3.0, 1.0};

unsigned axis_bits(double level) {
    if (level == -3.0) return 0b00;
    if (level == -1.0) return 0b01;
    if (level == 1.0) return 0b11;
    if (level == 3.0) return 0b10;
    throw DimensionError("qam16: value is not a constellation level");
}

// Ties go to the smaller level.
double slice_axis(double v) {
    if (v <= -2.0) return -3.0;
    if (v <= 0.0) return -1.0;
    if (v <= 2.0) return 1.0;
    return 3.0;
}

// Nearest integer with halves rounded down; matches slice_axis on ties.
double round_half_down(double v) { return std::ceil(v - 0.5); }

} // namespace

Complex Qam16::point(unsigned label) {
    if (label > 15) {
        throw DimensionError("qam16: label out of range");
    }
    return {kAxisLevel[(label >> 2) & 3u], kAxisLevel[label & 3u]};
}

unsigned Qam16::label(Complex p) { return (axis_bits(p.real()) << 2) | axis_bits(p.imag()); }

const std::array<Complex, 16>& Qam16::points() {
    static const std::array<Complex, 16> pts = [] {
        std::array<Complex, 16> a{};
        for (unsigned i = 0; i < 16; ++i) {
            a[i] = point(i);
        }
        return a;
    }();
    return pts;
}

ComplexVector qam16_modulate(std::span<const std::uint8_t> bits) {
    if (bits.size() % Qam16::kBitsPerSymbol != 0) {
        throw DimensionError("qam16_modulate: bit count must be a multiple of 4");
    }
    ComplexVector out(bits.size() / Qam16::kBitsPerSymbol);
    for (std::size_t s = 0; s < out.size(); ++s) {
        unsigned label = 0;
        for (std::size_t b = 0; b < Qam16::kBitsPerSymbol; ++b) {
            label = (label << 1) | (bits[s * Qam16::kBitsPerSymbol + b] & 1u);
        }
        out[s] = Qam16::point(label);
    }
    return out;
}

Bits qam16_demodulate(std::span<const Complex> symbols) {
    Bits bits;
    bits.reserve(symbols.size() * Qam16::kBitsPerSymbol);
    for (const auto& s : symbols) {
        const unsigned label = Qam16::label(s);
        for (int b = 3; b >= 0; --b) {
            bits.push_back(static_cast<std::uint8_t>((label >> b) & 1u));
        }
    }
    return bits;
}

Complex qam16_slice(Complex z) { return {slice_axis(z.real()), slice_axis(z.imag())}; }

ComplexVector zf_detect(const QrFactors& qr, std::span<const Complex> y) {
    const std::size_t m = qr.r.cols();
    if (qr.q.rows() != y.size()) {
        throw DimensionError("zf_detect: y length differs from channel rows");
    }
    ComplexVector c = adjoint_times(qr.q, y);
    c.resize(m);
    ComplexVector x = solve_upper_triangular(qr.r.block(m, m), c);
    for (auto& v : x) {
        v = qam16_slice(v);
    }
    return x;
}

ComplexVector lr_zf_detect(const ReducedBasis& rb, std::span<const Complex> y) {
    if (rb.q_tilde.rows() != y.size()) {
        throw DimensionError("lr_zf_detect: y length differs from channel rows");
    }
    const std::size_t m = rb.r_tilde.cols();
    const GaussIntMatrix t = GaussIntMatrix::from_complex(rb.t);
    const GaussIntMatrix t_inv = inverse_unimodular(t);

    const ComplexVector z = solve_upper_triangular(rb.r_tilde, adjoint_times(rb.q_tilde, y));

    ComplexVector z_hat(m);
    for (std::size_t i = 0; i < m; ++i) {
        GaussInt s{};
        for (std::size_t j = 0; j < m; ++j) {
            s = s + t_inv(i, j) * GaussInt{1, 1};
        }
        const Complex sc = s.to_complex();
        const Complex half = (z[i] - sc) / 2.0;
        z_hat[i] = 2.0 * Complex{round_half_down(half.real()), round_half_down(half.imag())} + sc;
    }

    ComplexVector x(m);
    for (std::size_t i = 0; i < m; ++i) {
        Complex acc = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            acc += t(i, j).to_complex() * z_hat[j];
        }
        x[i] = qam16_slice(acc);
    }
    return x;
}

ComplexVector ml_detect(const ComplexMatrix& h, std::span<const Complex> y) {
    const std::size_t n = h.rows();
    const std::size_t m = h.cols();
    if (m == 0 || m > kMlMaxStreams) {
        throw DimensionError("ml_detect: supports 1 to 4 streams");
    }
    if (y.size() != n) {
        throw DimensionError("ml_detect: y length differs from channel rows");
    }
    const auto& pts = Qam16::points();

    // contrib[(a * 16 + s) * n + i] = h(i, a) * point(s)
    std::vector<Complex> contrib(m * 16 * n);
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t s = 0; s < 16; ++s) {
            for (std::size_t i = 0; i < n; ++i) {
                contrib[(a * 16 + s) * n + i] = h(i, a) * pts[s];
            }
        }
    }

    // partial[a] holds sum of the first a stream contributions.
    std::vector<Complex> partial((m + 1) * n);
    std::array<unsigned, kMlMaxStreams> digit{};
    std::array<unsigned, kMlMaxStreams> best{};
    double best_metric = std::numeric_limits<double>::infinity();

    auto extend = [&](std::size_t a) {
        const Complex* c = &contrib[(a * 16 + digit[a]) * n];
        for (std::size_t i = 0; i < n; ++i) {
            partial[(a + 1) * n + i] = partial[a * n + i] + c[i];
        }
    };
    for (std::size_t a = 0; a < m; ++a) {
        extend(a);
    }

    while (true) {
        double metric = 0.0;
        const Complex* v = &partial[m * n];
        for (std::size_t i = 0; i < n; ++i) {
            metric += std::norm(y[i] - v[i]);
        }
        if (metric < best_metric) {
            best_metric = metric;
            best = digit;
        }
        // Odometer increment, last stream fastest.
        std::size_t a = m;
        while (a > 0 && digit[a - 1] == 15) {
            digit[a - 1] = 0;
            --a;
        }
        if (a == 0) {
            break;
        }
        ++digit[a - 1];
        for (std::size_t b = a - 1; b < m; ++b) {
            extend(b);
        }
    }

    ComplexVector x(m);
    for (std::size_t a = 0; a < m; ++a) {
        x[a] = pts[best[a]];
    }
    return x;
}

std::size_t bit_errors(std::span<const Complex> sent, std::span<const Complex> detected) {
    if (sent.size() != detected.size()) {
        throw DimensionError("bit_errors: length mismatch");
    }
    std::size_t errs = 0;
    for (std::size_t i = 0; i < sent.size(); ++i) {
        errs += static_cast<std::size_t>(std::popcount(Qam16::label(sent[i]) ^ Qam16::label(detected[i])));
    }
    return errs;
}

} // namespace latred
