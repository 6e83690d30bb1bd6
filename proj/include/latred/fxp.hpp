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

// Bit-accurate model of the 16-bit special function units used by the
// fixed-point reduction path. Every scalar is Q3.12: 16-bit two's complement
// with 12 fraction bits, range [-8, 8), resolution 2^-12. All arithmetic
// saturates and every requantization rounds half away from zero.

#include <complex>
#include <cstdint>

namespace latred::fxp {

inline constexpr int kFracBits = 12;
inline constexpr std::int32_t kOne = 1 << kFracBits;
inline constexpr std::int32_t kRawMax = INT16_MAX;
inline constexpr std::int32_t kRawMin = INT16_MIN;

/// Value plus the saturation flag of the operation that produced it.
template <class T>
struct Flagged {
    T value{};
    bool saturated = false;
};

struct Fx {
    std::int16_t raw = 0;

    static constexpr Fx from_raw(std::int32_t r) { return Fx{static_cast<std::int16_t>(r)}; }
    double to_double() const { return static_cast<double>(raw) / kOne; }

    friend constexpr bool operator==(Fx, Fx) = default;
};

/// Packed complex: real part in the high half-word, imaginary in the low.
struct CFx {
    std::uint32_t packed = 0;

    friend constexpr bool operator==(CFx, CFx) = default;
};

constexpr CFx pack(Fx re, Fx im) {
    return CFx{(static_cast<std::uint32_t>(static_cast<std::uint16_t>(re.raw)) << 16) |
               static_cast<std::uint16_t>(im.raw)};
}
constexpr Fx real_part(CFx c) {
    return Fx{static_cast<std::int16_t>(static_cast<std::uint16_t>(c.packed >> 16))};
}
constexpr Fx imag_part(CFx c) {
    return Fx{static_cast<std::int16_t>(static_cast<std::uint16_t>(c.packed & 0xFFFFu))};
}

/// Clamp a wide raw value into 16 bits.
Flagged<Fx> saturate(std::int64_t raw);

/// Round `wide / 2^shift` half away from zero. shift >= 1.
std::int64_t round_shift(std::int64_t wide, int shift);

Flagged<Fx> to_fx(double v);
Flagged<CFx> to_cfx(std::complex<double> c);
std::complex<double> to_complex(CFx c);

Flagged<Fx> fx_add(Fx a, Fx b);
Flagged<Fx> fx_sub(Fx a, Fx b);
Flagged<Fx> fx_mul(Fx a, Fx b);
Flagged<Fx> fx_neg(Fx a);

Flagged<CFx> cadd(CFx a, CFx b);
Flagged<CFx> csub(CFx a, CFx b);
Flagged<CFx> cneg(CFx a);
Flagged<CFx> cconj(CFx a);

/// Complex multiply on the CMUL unit: four 16x16 products kept at full
/// 32-bit precision, one subtract for the real part and one add for the
/// imaginary part, then a single rounding to Q3.12 with saturation.
Flagged<CFx> cmul(CFx a, CFx b);

/// 0.75 * x as (x >> 1) + (x >> 2), arithmetic shifts, saturating add.
Flagged<Fx> siegel_scale(Fx x);

/// Same shift-add on a wide register (used on 32-bit squared magnitudes).
std::int64_t siegel_scale_wide(std::int64_t x);

/// Swap decision of the SIEGEL unit for delta = 0.75:
/// 0.75 * prev^2 > cur^2 with both squares held at full width.
bool siegel_swap(Fx prev_diag, Fx cur_diag);

/// Nearest Gaussian integer with each component clamped to [-4, 4].
Flagged<CFx> quantize_mu(std::complex<double> c);

/// Fixed-point mu unit: round(num / den) per component, half away from zero,
/// clamped to [-4, 4]. den must be positive.
Flagged<CFx> mu_fixed(CFx num, Fx den);

inline constexpr int kMuLimit = 4;

// ---------------------------------------------------------------- CORDIC

inline constexpr int kCordicStages = 16;
inline constexpr int kCordicStagesPerBlock = 4;

/// 1/K for 16 stages, K = 1.646760..., in Q3.12.
inline constexpr std::int32_t kInvGainRaw = 2487;

struct CordicResult {
    Fx cos_out;
    Fx sin_out;
    Fx magnitude;
    bool overflow = false;
};

/// Master-slave CORDIC. The master vectors (x, y) onto the positive x axis
/// and hands its per-stage direction bits to the slave, which rotates the
/// seed (1/K, 0) by the same angle. The slave therefore yields cos and sin of
/// atan2(y, x) without ever forming the angle. The datapath is a 4-stage
/// block reused four times. Throws ZeroInput on (0, 0).
CordicResult cordic_master_slave(Fx x, Fx y);

/// Reference schedule: sixteen single-stage passes. Bit-identical to
/// cordic_master_slave by construction; kept for the equivalence check.
CordicResult cordic_master_slave_sequential(Fx x, Fx y);

struct GivensFixed {
    CFx alpha;
    CFx beta;
    Fx norm; // ||(top, bottom)||
    bool saturated = false;
    int cordic_calls = 0;
};

/// Complex Givens coefficients alpha = top/||.||, beta = bottom/||.|| in
/// fixed point. Each complex entry is phase-aligned with one CORDIC pass, then
/// the magnitude pair is vectored by another. Entries that are already real
/// and non-negative skip the phase pass. Throws ZeroInput when both are zero.
GivensFixed givens_theta_fixed(CFx top, CFx bottom);

} // namespace latred::fxp
