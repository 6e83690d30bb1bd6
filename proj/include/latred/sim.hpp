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
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "latred/detect.hpp"
#include "latred/linalg.hpp"
#include "latred/reduction.hpp"

namespace latred {

/// Deterministic random stream: a 64-bit Mersenne Twister plus a Box-Muller
/// stage. Normal variates come from our own transform, not
/// std::normal_distribution, so the stream does not depend on the standard
/// library vendor.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Independent stream for one trial, derived from the master seed by
    /// SplitMix64 over (seed, index). Streams do not depend on how trials are
    /// spread over workers.
    static Rng for_trial(std::uint64_t seed, std::uint64_t index);

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform();

    /// Standard normal N(0, 1).
    double normal();

    std::uint8_t bit() { return static_cast<std::uint8_t>(engine_() >> 63); }

  private:
    std::mt19937_64 engine_;
    std::optional<double> spare_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// n_r x m_t matrix of i.i.d. CN(0, 1) entries.
ComplexMatrix gen_channel(Rng& rng, std::size_t n_r, std::size_t m_t);

/// n_r i.i.d. CN(0, sigma2) samples. Throws ConfigError unless sigma2 > 0.
ComplexVector gen_noise(Rng& rng, std::size_t n_r, double sigma2);

/// Noise variance for a receive SNR of m_t * Es / sigma2 with 16-QAM Es = 10.
double noise_variance(double snr_db, std::size_t m_t);

enum class Detector { zf, lr_zf_mlll, lr_zf_clll, ml };

std::string_view to_string(Detector d);
std::optional<Detector> parse_detector(std::string_view name);
std::string_view to_string(Arithmetic a);

struct SimConfig {
    std::size_t n_r = 4;
    std::size_t m_t = 4;
    std::vector<double> snr_db_grid = {0, 5, 10, 15, 20, 25, 30};
    std::size_t trials = 10000;
    /// Trials evaluated by the ML detector; empty means all of them. ML is
    /// run on the first ml_trials trials, which see the same draws as the
    /// other detectors.
    std::optional<std::size_t> ml_trials;
    std::uint64_t seed = 1;
    std::vector<Detector> detectors = {Detector::zf, Detector::lr_zf_mlll, Detector::lr_zf_clll,
                                       Detector::ml};
    MlllConfig mlll;

    /// Throws ConfigError on an invalid configuration.
    void validate() const;
};

struct BerPoint {
    double snr_db = 0.0;
    Detector detector = Detector::zf;
    Arithmetic arithmetic = Arithmetic::floating; // of the reduction feeding it
    std::size_t trials = 0;
    std::uint64_t bit_errors = 0;
    std::uint64_t bits_total = 0;
    double ber = 0.0;
};

struct SweepResult {
    SimConfig config;
    std::vector<BerPoint> points; // SNR-major, detectors in config order
    double wall_time = 0.0;       // seconds
    OpCounters op_counters;       // summed over all MLLL runs
    std::uint64_t mu_clamps = 0;
    std::uint64_t saturations = 0;

    const BerPoint& at(double snr_db, Detector d) const;
};

/// Run the Monte-Carlo sweep on `workers` threads. The result, apart from
/// wall_time, depends only on the configuration.
SweepResult run_sweep(const SimConfig& config, unsigned workers = 1);

} // namespace latred
