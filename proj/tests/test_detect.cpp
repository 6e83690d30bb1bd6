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

#include <doctest.h>

#include <bit>
#include <cmath>

#include "latred/detect.hpp"
#include "latred/error.hpp"
#include "latred/reduction.hpp"
#include "latred/sim.hpp"
#include "oracles.hpp"

using namespace latred;

namespace {

ComplexVector random_symbols(Rng& rng, std::size_t m) {
    Bits bits(4 * m);
    for (auto& b : bits) {
        b = rng.bit();
    }
    return qam16_modulate(bits);
}

ComplexMatrix well_conditioned(Rng& rng, std::size_t n, std::size_t m) {
    for (;;) {
        ComplexMatrix h = gen_channel(rng, n, m);
        if (oracle::condition_number(oracle::to_eigen(h)) <= 100.0) {
            return h;
        }
    }
}

ComplexVector add(const ComplexVector& a, const ComplexVector& b) {
    ComplexVector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] = a[i] + b[i];
    }
    return out;
}

} // namespace

TEST_CASE("gray labelling") {
    CHECK(qam16_modulate(Bits{0, 0, 0, 0})[0] == Complex{-3, -3});
    CHECK(qam16_modulate(Bits{1, 1, 1, 0})[0] == Complex{1, 3});
    CHECK(qam16_modulate(Bits{0, 1, 1, 1})[0] == Complex{-1, 1});

    double energy = 0.0;
    for (unsigned label = 0; label < 16; ++label) {
        const Complex p = Qam16::point(label);
        energy += std::norm(p);
        CHECK(Qam16::label(p) == label);
        const Bits bits{static_cast<std::uint8_t>(label >> 3 & 1), static_cast<std::uint8_t>(label >> 2 & 1),
                        static_cast<std::uint8_t>(label >> 1 & 1), static_cast<std::uint8_t>(label & 1)};
        const ComplexVector s = qam16_modulate(bits);
        CHECK(qam16_demodulate(s) == bits);
    }
    CHECK(energy / 16.0 == 10.0);

    // Neighbours along either axis differ in one bit.
    for (const Complex& p : Qam16::points()) {
        for (const Complex step : {Complex{2, 0}, Complex{0, 2}}) {
            const Complex q = p + step;
            if (std::abs(q.real()) > 3 || std::abs(q.imag()) > 3) {
                continue;
            }
            CHECK(std::popcount(Qam16::label(p) ^ Qam16::label(q)) == 1);
        }
    }
}

TEST_CASE("modulation rejects ragged input") {
    CHECK_THROWS_AS(qam16_modulate(Bits{0, 1, 1}), DimensionError);
}

TEST_CASE("slicer") {
    CHECK(qam16_slice({2.9, 3.2}) == Complex{3, 3});
    CHECK(qam16_slice({0, 0}) == Complex{-1, -1});
    CHECK(qam16_slice({2, -2}) == Complex{1, -3});
    CHECK(qam16_slice({-40, 7}) == Complex{-3, 3});
    for (const Complex& p : Qam16::points()) {
        CHECK(qam16_slice(p) == p);
    }
    Rng rng(4);
    for (int i = 0; i < 20000; ++i) {
        const Complex z{8 * rng.uniform() - 4, 8 * rng.uniform() - 4};
        REQUIRE(qam16_slice(z) == oracle::slice(z));
    }
    for (double re = -4; re <= 4; re += 1) {
        for (double im = -4; im <= 4; im += 1) {
            REQUIRE(qam16_slice({re, im}) == oracle::slice({re, im}));
        }
    }
}

TEST_CASE("zero forcing") {
    const QrFactors id = qr_decompose(ComplexMatrix::identity(4));
    Rng rng(10);
    for (int i = 0; i < 50; ++i) {
        const ComplexVector x = random_symbols(rng, 4);
        CHECK(zf_detect(id, x) == x);
    }
    for (std::uint64_t i = 0; i < 300; ++i) {
        Rng r = Rng::for_trial(11, i);
        const ComplexMatrix h = gen_channel(r, 4, 4);
        const ComplexVector x = random_symbols(r, 4);
        const ComplexVector y = add(h * std::span<const Complex>(x), gen_noise(r, 4, 0.5));
        CHECK(zf_detect(qr_decompose(h), y) ==
              oracle::zf_pinv(oracle::to_eigen(h), oracle::to_eigen(y)));
        CHECK(zf_detect(qr_decompose(h).thin(), y) == zf_detect(qr_decompose(h), y));
    }
}

TEST_CASE("noiseless recovery on well-conditioned channels") {
    for (std::uint64_t i = 0; i < 200; ++i) {
        Rng r = Rng::for_trial(12, i);
        const ComplexMatrix h = well_conditioned(r, 4, 4);
        const ComplexVector x = random_symbols(r, 4);
        const ComplexVector y = h * std::span<const Complex>(x);
        const QrFactors f = qr_decompose(h);
        CHECK(zf_detect(f, y) == x);
        CHECK(lr_zf_detect(reduce_channel(h, MlllConfig{}), y) == x);
        CHECK(lr_zf_detect(clll_reduce(f.thin().q, f.thin().r), y) == x);
        MlllConfig fixed;
        fixed.arithmetic = Arithmetic::fixed;
        CHECK(lr_zf_detect(reduce_channel(h, fixed), y) == x);
        if (i < 20) {
            CHECK(ml_detect(h, y) == x);
        }
    }
}

TEST_CASE("lr-zf with identity T is plain zf") {
    for (std::uint64_t i = 0; i < 300; ++i) {
        Rng r = Rng::for_trial(13, i);
        const ComplexMatrix h = gen_channel(r, 4, 4);
        const QrFactors f = qr_decompose(h).thin();
        ReducedBasis rb;
        rb.q_tilde = f.q;
        rb.r_tilde = f.r;
        rb.t = ComplexMatrix::identity(4);
        for (double sigma2 : {0.1, 2.0, 40.0}) {
            const ComplexVector x = random_symbols(r, 4);
            const ComplexVector y = add(h * std::span<const Complex>(x), gen_noise(r, 4, sigma2));
            REQUIRE(lr_zf_detect(rb, y) == zf_detect(f, y));
        }
    }
    // Exact ties on the decision boundaries as well.
    const QrFactors id = qr_decompose(ComplexMatrix::identity(2));
    ReducedBasis rb{id.q, id.r, ComplexMatrix::identity(2)};
    for (double re = -4; re <= 4; re += 1) {
        for (double im = -4; im <= 4; im += 1) {
            const ComplexVector y{{re, im}, {im, re}};
            REQUIRE(lr_zf_detect(rb, y) == zf_detect(id, y));
        }
    }
}

TEST_CASE("lr-zf rejects a non-unimodular T") {
    const QrFactors id = qr_decompose(ComplexMatrix::identity(2));
    ReducedBasis rb{id.q, id.r, ComplexMatrix{{2, 0}, {0, 1}}};
    CHECK_THROWS_AS(lr_zf_detect(rb, ComplexVector{1, 1}), NotUnimodular);
}

TEST_CASE("ml agrees with an independent scan") {
    for (std::uint64_t i = 0; i < 300; ++i) {
        Rng r = Rng::for_trial(14, i);
        const ComplexMatrix h = gen_channel(r, 2, 2);
        const ComplexVector x = random_symbols(r, 2);
        const ComplexVector y = add(h * std::span<const Complex>(x), gen_noise(r, 2, 1.0 + i % 20));
        REQUIRE(ml_detect(h, y) == oracle::ml(oracle::to_eigen(h), oracle::to_eigen(y)));
    }
    const ComplexMatrix id = ComplexMatrix::identity(3);
    CHECK(ml_detect(id, ComplexVector{{1, 3}, {-3, -1}, {1, 1}}) ==
          ComplexVector{{1, 3}, {-3, -1}, {1, 1}});
    CHECK_THROWS_AS(ml_detect(ComplexMatrix(5, 5), ComplexVector(5)), DimensionError);
}

TEST_CASE("ml tie goes to the first candidate") {
    // A zero channel makes every candidate equally distant.
    const ComplexMatrix h(2, 2);
    CHECK(ml_detect(h, ComplexVector{1, 1}) == ComplexVector{{-3, -3}, {-3, -3}});
}

TEST_CASE("bit error count") {
    const ComplexVector a{{-3, -3}, {1, 1}};
    CHECK(bit_errors(a, a) == 0);
    CHECK(bit_errors(a, ComplexVector{{-1, -3}, {1, 1}}) == 1);
    CHECK(bit_errors(a, ComplexVector{{3, 3}, {1, 1}}) == 2);
    CHECK(bit_errors(a, ComplexVector{{3, 3}, {-3, -3}}) == 6);
}

TEST_CASE("lr-zf beats zf at 20 dB") {
    SimConfig cfg;
    cfg.snr_db_grid = {20};
    cfg.trials = 2000;
    cfg.detectors = {Detector::zf, Detector::lr_zf_mlll, Detector::lr_zf_clll};
    const SweepResult res = run_sweep(cfg);
    const double zf = res.at(20, Detector::zf).ber;
    CHECK(res.at(20, Detector::lr_zf_clll).ber <= zf);
    CHECK(res.at(20, Detector::lr_zf_mlll).ber <= zf);
}
