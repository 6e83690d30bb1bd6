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

#include "latred/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

#include "latred/error.hpp"

namespace latred {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

Rng Rng::for_trial(std::uint64_t seed, std::uint64_t index) {
    return Rng(splitmix64(splitmix64(seed) ^ index));
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
    if (spare_) {
        const double v = *spare_;
        spare_.reset();
        return v;
    }
    const double u1 = 1.0 - uniform(); // (0, 1]
    const double u2 = uniform();
    const double rad = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * std::numbers::pi * u2;
    spare_ = rad * std::sin(ang);
    return rad * std::cos(ang);
}

ComplexMatrix gen_channel(Rng& rng, std::size_t n_r, std::size_t m_t) {
    ComplexMatrix h(n_r, m_t);
    const double s = std::sqrt(0.5);
    for (std::size_t j = 0; j < m_t; ++j) {
        for (std::size_t i = 0; i < n_r; ++i) {
            const double re = rng.normal();
            const double im = rng.normal();
            h(i, j) = {s * re, s * im};
        }
    }
    return h;
}

ComplexVector gen_noise(Rng& rng, std::size_t n_r, double sigma2) {
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
        throw ConfigError("gen_noise: variance must be positive");
    }
    ComplexVector n(n_r);
    const double s = std::sqrt(sigma2 / 2.0);
    for (auto& v : n) {
        const double re = rng.normal();
        const double im = rng.normal();
        v = {s * re, s * im};
    }
    return n;
}

double noise_variance(double snr_db, std::size_t m_t) {
    return static_cast<double>(m_t) * Qam16::kAverageEnergy / std::pow(10.0, snr_db / 10.0);
}

std::string_view to_string(Detector d) {
    switch (d) {
    case Detector::zf: return "zf";
    case Detector::lr_zf_mlll: return "lr_zf_mlll";
    case Detector::lr_zf_clll: return "lr_zf_clll";
    case Detector::ml: return "ml";
    }
    return "?";
}

std::optional<Detector> parse_detector(std::string_view name) {
    for (Detector d : {Detector::zf, Detector::lr_zf_mlll, Detector::lr_zf_clll, Detector::ml}) {
        if (to_string(d) == name) {
            return d;
        }
    }
    return std::nullopt;
}

std::string_view to_string(Arithmetic a) { return a == Arithmetic::fixed ? "fixed" : "float"; }

void SimConfig::validate() const {
    if (m_t < 1 || n_r < m_t) {
        throw ConfigError("need n_r >= m_t >= 1");
    }
    if (trials < 1) {
        throw ConfigError("trials must be at least 1");
    }
    if (ml_trials && (*ml_trials < 1 || *ml_trials > trials)) {
        throw ConfigError("ml_trials must lie in [1, trials]");
    }
    if (snr_db_grid.empty()) {
        throw ConfigError("SNR grid is empty");
    }
    for (std::size_t i = 0; i < snr_db_grid.size(); ++i) {
        if (!std::isfinite(snr_db_grid[i])) {
            throw ConfigError("SNR grid entries must be finite");
        }
        if (i > 0 && !(snr_db_grid[i] > snr_db_grid[i - 1])) {
            throw ConfigError("SNR grid must be strictly increasing");
        }
    }
    if (detectors.empty()) {
        throw ConfigError("no detectors selected");
    }
    for (std::size_t i = 0; i < detectors.size(); ++i) {
        if (std::count(detectors.begin(), detectors.end(), detectors[i]) > 1) {
            throw ConfigError("detector listed twice: " + std::string(to_string(detectors[i])));
        }
        if (detectors[i] == Detector::ml && m_t > kMlMaxStreams) {
            throw ConfigError("ml detector supports at most 4 streams");
        }
    }
    mlll.validate();
}

const BerPoint& SweepResult::at(double snr_db, Detector d) const {
    for (const auto& p : points) {
        if (p.snr_db == snr_db && p.detector == d) {
            return p;
        }
    }
    throw ConfigError("no BER point for the requested SNR and detector");
}

namespace {

struct Tally {
    std::vector<std::uint64_t> errors; // [snr * n_det + det]
    OpCounters counters;
    std::uint64_t mu_clamps = 0;
    std::uint64_t saturations = 0;
};

bool wants(const SimConfig& c, Detector d) {
    return std::find(c.detectors.begin(), c.detectors.end(), d) != c.detectors.end();
}

void run_trial(const SimConfig& cfg, std::size_t trial, std::size_t ml_trials, Tally& tally) {
    Rng rng = Rng::for_trial(cfg.seed, trial);
    const ComplexMatrix h = gen_channel(rng, cfg.n_r, cfg.m_t);
    Bits bits(cfg.m_t * Qam16::kBitsPerSymbol);
    for (auto& b : bits) {
        b = rng.bit();
    }
    const ComplexVector x = qam16_modulate(bits);
    const ComplexVector hx = h * x;

    const QrFactors qr = qr_decompose(h).thin();
    std::optional<ReducedBasis> mlll;
    std::optional<ReducedBasis> clll;
    if (wants(cfg, Detector::lr_zf_mlll)) {
        mlll = mlll_reduce(qr.q, qr.r, cfg.mlll);
        tally.counters += mlll->counters;
        tally.mu_clamps += mlll->mu_clamps;
        tally.saturations += mlll->saturations;
    }
    if (wants(cfg, Detector::lr_zf_clll)) {
        clll = clll_reduce(qr.q, qr.r, cfg.mlll.delta);
    }

    const std::size_t n_det = cfg.detectors.size();
    for (std::size_t s = 0; s < cfg.snr_db_grid.size(); ++s) {
        const ComplexVector noise = gen_noise(rng, cfg.n_r, noise_variance(cfg.snr_db_grid[s], cfg.m_t));
        ComplexVector y(cfg.n_r);
        for (std::size_t i = 0; i < cfg.n_r; ++i) {
            y[i] = hx[i] + noise[i];
        }
        for (std::size_t d = 0; d < n_det; ++d) {
            ComplexVector xh;
            switch (cfg.detectors[d]) {
            case Detector::zf: xh = zf_detect(qr, y); break;
            case Detector::lr_zf_mlll: xh = lr_zf_detect(*mlll, y); break;
            case Detector::lr_zf_clll: xh = lr_zf_detect(*clll, y); break;
            case Detector::ml:
                if (trial >= ml_trials) {
                    continue;
                }
                xh = ml_detect(h, y);
                break;
            }
            tally.errors[s * n_det + d] += bit_errors(x, xh);
        }
    }
}

} // namespace

SweepResult run_sweep(const SimConfig& config, unsigned workers) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();
    const std::size_t n_det = config.detectors.size();
    const std::size_t n_snr = config.snr_db_grid.size();
    const std::size_t ml_trials = config.ml_trials.value_or(config.trials);
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(config.trials)));

    std::vector<Tally> tallies(workers);
    for (auto& t : tallies) {
        t.errors.assign(n_snr * n_det, 0);
    }

    // The lowest failing trial index is reported, whatever the worker count.
    std::mutex fail_mutex;
    std::size_t fail_trial = config.trials;
    std::string fail_message;

    auto work = [&](unsigned w) {
        for (std::size_t t = w; t < config.trials; t += workers) {
            try {
                run_trial(config, t, ml_trials, tallies[w]);
            } catch (const std::exception& e) {
                std::lock_guard lock(fail_mutex);
                if (t < fail_trial) {
                    fail_trial = t;
                    fail_message = e.what();
                }
                return;
            }
        }
    };

    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(work, w);
        }
        for (auto& th : pool) {
            th.join();
        }
    }
    if (fail_trial < config.trials) {
        throw Error("trial " + std::to_string(fail_trial) + ": " + fail_message);
    }

    SweepResult res;
    res.config = config;
    Tally total;
    total.errors.assign(n_snr * n_det, 0);
    for (const auto& t : tallies) {
        for (std::size_t i = 0; i < total.errors.size(); ++i) {
            total.errors[i] += t.errors[i];
        }
        total.counters += t.counters;
        total.mu_clamps += t.mu_clamps;
        total.saturations += t.saturations;
    }
    res.op_counters = total.counters;
    res.mu_clamps = total.mu_clamps;
    res.saturations = total.saturations;

    const std::uint64_t bits_per_trial = config.m_t * Qam16::kBitsPerSymbol;
    for (std::size_t s = 0; s < n_snr; ++s) {
        for (std::size_t d = 0; d < n_det; ++d) {
            BerPoint p;
            p.snr_db = config.snr_db_grid[s];
            p.detector = config.detectors[d];
            p.arithmetic = p.detector == Detector::lr_zf_mlll ? config.mlll.arithmetic
                                                              : Arithmetic::floating;
            p.trials = p.detector == Detector::ml ? ml_trials : config.trials;
            p.bit_errors = total.errors[s * n_det + d];
            p.bits_total = p.trials * bits_per_trial;
            p.ber = static_cast<double>(p.bit_errors) / static_cast<double>(p.bits_total);
            res.points.push_back(p);
        }
    }
    res.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
}

} // namespace latred
