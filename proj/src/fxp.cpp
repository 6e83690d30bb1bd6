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

#include "latred/fxp.hpp"

#include <algorithm>
#include <cmath>

#include "latred/error.hpp"

namespace latred::fxp {

Flagged<Fx> saturate(std::int64_t raw) {
    if (raw > kRawMax) {
        return {Fx::from_raw(kRawMax), true};
    }
    if (raw < kRawMin) {
        return {Fx::from_raw(kRawMin), true};
    }
    return {Fx::from_raw(static_cast<std::int32_t>(raw)), false};
}

std::int64_t round_shift(std::int64_t wide, int shift) {
    const std::int64_t half = std::int64_t{1} << (shift - 1);
    if (wide >= 0) {
        return (wide + half) >> shift;
    }
    return -((-wide + half) >> shift);
}

Flagged<Fx> to_fx(double v) {
    const double scaled = std::round(v * kOne);
    if (!(scaled <= kRawMax)) {
        return {Fx::from_raw(kRawMax), true};
    }
    if (scaled < kRawMin) {
        return {Fx::from_raw(kRawMin), true};
    }
    return {Fx::from_raw(static_cast<std::int32_t>(scaled)), false};
}

Flagged<CFx> to_cfx(std::complex<double> c) {
    const auto re = to_fx(c.real());
    const auto im = to_fx(c.imag());
    return {pack(re.value, im.value), re.saturated || im.saturated};
}

std::complex<double> to_complex(CFx c) {
    return {real_part(c).to_double(), imag_part(c).to_double()};
}

Flagged<Fx> fx_add(Fx a, Fx b) { return saturate(std::int64_t{a.raw} + b.raw); }
Flagged<Fx> fx_sub(Fx a, Fx b) { return saturate(std::int64_t{a.raw} - b.raw); }
Flagged<Fx> fx_neg(Fx a) { return saturate(-std::int64_t{a.raw}); }

Flagged<Fx> fx_mul(Fx a, Fx b) {
    return saturate(round_shift(std::int64_t{a.raw} * b.raw, kFracBits));
}

namespace {

Flagged<CFx> join(Flagged<Fx> re, Flagged<Fx> im) {
    return {pack(re.value, im.value), re.saturated || im.saturated};
}

} // namespace

Flagged<CFx> cadd(CFx a, CFx b) {
    return join(fx_add(real_part(a), real_part(b)), fx_add(imag_part(a), imag_part(b)));
}

Flagged<CFx> csub(CFx a, CFx b) {
    return join(fx_sub(real_part(a), real_part(b)), fx_sub(imag_part(a), imag_part(b)));
}

Flagged<CFx> cneg(CFx a) { return join(fx_neg(real_part(a)), fx_neg(imag_part(a))); }

Flagged<CFx> cconj(CFx a) { return join({real_part(a), false}, fx_neg(imag_part(a))); }

Flagged<CFx> cmul(CFx a, CFx b) {
    const std::int64_t ar = real_part(a).raw;
    const std::int64_t ai = imag_part(a).raw;
    const std::int64_t br = real_part(b).raw;
    const std::int64_t bi = imag_part(b).raw;
    const std::int64_t rr = ar * br;
    const std::int64_t ii = ai * bi;
    const std::int64_t ri = ar * bi;
    const std::int64_t ir = ai * br;
    return join(saturate(round_shift(rr - ii, kFracBits)),
                saturate(round_shift(ri + ir, kFracBits)));
}

Flagged<Fx> siegel_scale(Fx x) {
    const std::int32_t v = x.raw;
    return saturate(std::int64_t{v >> 1} + (v >> 2));
}

std::int64_t siegel_scale_wide(std::int64_t x) { return (x >> 1) + (x >> 2); }

bool siegel_swap(Fx prev_diag, Fx cur_diag) {
    const std::int64_t p = prev_diag.raw;
    const std::int64_t c = cur_diag.raw;
    return siegel_scale_wide(p * p) > c * c;
}

namespace {

std::int64_t clamp_mu(std::int64_t v, bool& clamped) {
    if (v > kMuLimit) {
        clamped = true;
        return kMuLimit;
    }
    if (v < -kMuLimit) {
        clamped = true;
        return -kMuLimit;
    }
    return v;
}

Flagged<CFx> mu_word(std::int64_t re, std::int64_t im) {
    bool clamped = false;
    re = clamp_mu(re, clamped);
    im = clamp_mu(im, clamped);
    return {pack(Fx::from_raw(static_cast<std::int32_t>(re * kOne)),
                 Fx::from_raw(static_cast<std::int32_t>(im * kOne))),
            clamped};
}

// round(a / b) half away from zero, b > 0.
std::int64_t div_round(std::int64_t a, std::int64_t b) {
    const std::int64_t q = (2 * (a < 0 ? -a : a) + b) / (2 * b);
    return a < 0 ? -q : q;
}

} // namespace

Flagged<CFx> quantize_mu(std::complex<double> c) {
    // Clamp before the integer conversion so huge inputs cannot overflow.
    const double lim = kMuLimit + 1.0;
    const double re = std::round(std::clamp(c.real(), -lim, lim));
    const double im = std::round(std::clamp(c.imag(), -lim, lim));
    return mu_word(static_cast<std::int64_t>(re), static_cast<std::int64_t>(im));
}

Flagged<CFx> mu_fixed(CFx num, Fx den) {
    if (den.raw <= 0) {
        throw ZeroInput("mu_fixed: non-positive diagonal");
    }
    return mu_word(div_round(real_part(num).raw, den.raw), div_round(imag_part(num).raw, den.raw));
}

// ---------------------------------------------------------------- CORDIC

namespace {

// Internal registers carry 16 guard bits below the Q3.12 LSB.
constexpr int kGuard = 16;
constexpr int kInternalFrac = kFracBits + kGuard;

struct CordicState {
    std::int64_t mx, my; // master, vectoring
    std::int64_t sx, sy; // slave, rotation
};

void cordic_block(CordicState& s, int first_stage, int count) {
    for (int i = first_stage; i < first_stage + count; ++i) {
        // Master drives y toward zero; the slave turns the opposite way so its
        // accumulated rotation equals the input angle.
        const bool up = s.my < 0;
        const std::int64_t mx = s.mx;
        const std::int64_t my = s.my;
        const std::int64_t sx = s.sx;
        const std::int64_t sy = s.sy;
        if (up) {
            s.mx = mx - (my >> i);
            s.my = my + (mx >> i);
            s.sx = sx + (sy >> i);
            s.sy = sy - (sx >> i);
        } else {
            s.mx = mx + (my >> i);
            s.my = my - (mx >> i);
            s.sx = sx - (sy >> i);
            s.sy = sy + (sx >> i);
        }
    }
}

template <class Schedule>
CordicResult run_cordic(Fx x, Fx y, Schedule schedule) {
    if (x.raw == 0 && y.raw == 0) {
        throw ZeroInput("cordic_master_slave: zero input vector");
    }
    // Left half-plane inputs are turned by 180 degrees first; the slave
    // result is negated back at the end.
    const bool flip = x.raw < 0;
    const std::int64_t xin = flip ? -std::int64_t{x.raw} : x.raw;
    const std::int64_t yin = flip ? -std::int64_t{y.raw} : y.raw;

    CordicState s{xin << kGuard, yin << kGuard, std::int64_t{kInvGainRaw} << kGuard, 0};
    schedule(s);

    auto c = saturate(round_shift(s.sx, kGuard));
    auto sn = saturate(round_shift(s.sy, kGuard));
    if (flip) {
        c = saturate(-std::int64_t{c.value.raw});
        sn = saturate(-std::int64_t{sn.value.raw});
    }
    // The vectoring output carries the gain K; one multiply by 1/K removes it.
    const std::int64_t gained = round_shift(s.mx, kGuard);
    const auto mag = saturate(round_shift(s.mx * kInvGainRaw, kInternalFrac));

    CordicResult r;
    r.cos_out = c.value;
    r.sin_out = sn.value;
    r.magnitude = mag.value;
    r.overflow = gained > kRawMax || mag.saturated || c.saturated || sn.saturated;
    return r;
}

} // namespace

CordicResult cordic_master_slave(Fx x, Fx y) {
    return run_cordic(x, y, [](CordicState& s) {
        for (int b = 0; b < kCordicStages / kCordicStagesPerBlock; ++b) {
            cordic_block(s, b * kCordicStagesPerBlock, kCordicStagesPerBlock);
        }
    });
}

CordicResult cordic_master_slave_sequential(Fx x, Fx y) {
    return run_cordic(x, y, [](CordicState& s) {
        for (int i = 0; i < kCordicStages; ++i) {
            cordic_block(s, i, 1);
        }
    });
}

namespace {

struct Polar {
    Fx mag;
    Fx cos;
    Fx sin;
    bool saturated = false;
    int calls = 0;
};

Polar to_polar(CFx c) {
    const Fx re = real_part(c);
    const Fx im = imag_part(c);
    if (im.raw == 0 && re.raw >= 0) {
        return {re, Fx::from_raw(kOne), Fx{}, false, 0};
    }
    const CordicResult r = cordic_master_slave(re, im);
    return {r.magnitude, r.cos_out, r.sin_out, r.overflow, 1};
}

Flagged<CFx> scale_phase(Fx gain, const Polar& p) {
    return join(fx_mul(gain, p.cos), fx_mul(gain, p.sin));
}

} // namespace

GivensFixed givens_theta_fixed(CFx top, CFx bottom) {
    if (top.packed == 0 && bottom.packed == 0) {
        throw ZeroInput("givens_theta_fixed: zero column");
    }
    const Polar pt = to_polar(top);
    const Polar pb = to_polar(bottom);

    GivensFixed g;
    g.cordic_calls = pt.calls + pb.calls;
    g.saturated = pt.saturated || pb.saturated;

    Fx cos_theta;
    Fx sin_theta;
    if (pb.mag.raw == 0) {
        cos_theta = Fx::from_raw(kOne);
        sin_theta = Fx{};
        g.norm = pt.mag;
    } else if (pt.mag.raw == 0) {
        cos_theta = Fx{};
        sin_theta = Fx::from_raw(kOne);
        g.norm = pb.mag;
    } else {
        const CordicResult v = cordic_master_slave(pt.mag, pb.mag);
        ++g.cordic_calls;
        g.saturated = g.saturated || v.overflow;
        cos_theta = v.cos_out;
        sin_theta = v.sin_out;
        g.norm = v.magnitude;
    }

    const auto a = scale_phase(cos_theta, pt);
    const auto b = scale_phase(sin_theta, pb);
    g.alpha = a.value;
    g.beta = b.value;
    g.saturated = g.saturated || a.saturated || b.saturated;
    return g;
}

} // namespace latred::fxp
