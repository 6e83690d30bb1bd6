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
#include <limits>

#include "latred/linalg.hpp"

namespace latred {

enum class Arithmetic { floating, fixed };

/// Budget value meaning "run until the basis is reduced".
inline constexpr std::size_t kUnlimitedIterations = std::numeric_limits<std::size_t>::max();

/// Hard stop for runs without a finite budget.
inline constexpr std::size_t kIterationGuard = 1'000'000;

struct MlllConfig {
    double delta = 0.75;
    std::size_t max_body_iterations = 5;
    bool early_termination = true;
    Arithmetic arithmetic = Arithmetic::floating;

    /// Throws ConfigError unless delta lies in (0.5, 1].
    void validate() const;
};

/// Kernel invocation counts of one reduction run.
///
/// cordic counts Givens constructions (one per swap); cordic_calls counts the
/// individual CORDIC passes the fixed-point path spends on them, including
/// the diagonal phase corrections. stream and arrange are only populated in
/// fixed mode: matrix words streamed in and out, and packed-word rearranges
/// (conjugations and negations).
struct OpCounters {
    std::uint64_t cmul = 0;
    std::uint64_t cordic = 0;
    std::uint64_t siegel = 0;
    std::uint64_t size_reduction = 0;
    std::uint64_t stream = 0;
    std::uint64_t arrange = 0;
    std::uint64_t cordic_calls = 0;

    OpCounters& operator+=(const OpCounters& o);
    friend bool operator==(const OpCounters&, const OpCounters&) = default;
};

struct ReducedBasis {
    ComplexMatrix q_tilde;
    ComplexMatrix r_tilde;
    ComplexMatrix t; // Gaussian-integer entries
    std::size_t body_iterations_used = 0;
    std::size_t swap_count = 0;
    bool converged = false;
    OpCounters counters;

    // Fixed mode diagnostics. mu_clamps counts mu components clipped to the
    // [-4, 4] range of the mu unit; saturations counts every other saturating
    // operation in the datapath.
    std::uint64_t mu_clamps = 0;
    std::uint64_t saturations = 0;
};

/// Modified complex LLL with a fixed body-iteration budget, the Siegel swap
/// test and early termination.
///
/// `q` has orthonormal columns and `r` is square upper triangular with a real
/// non-negative diagonal, as returned by qr_decompose (use QrFactors::thin for
/// tall channels). One body iteration is the size reduction of column k
/// followed by the swap test at k. The run stops when the budget is spent or
/// k walks past the last column.
ReducedBasis mlll_reduce(const ComplexMatrix& q, const ComplexMatrix& r, const MlllConfig& config);

/// Textbook complex LLL with the Lovasz condition, run to convergence.
/// Throws IterationOverflow after kIterationGuard body iterations.
ReducedBasis clll_reduce(const ComplexMatrix& q, const ComplexMatrix& r, double delta = 0.75);

/// qr_decompose(h) followed by mlll_reduce on the thin factors.
ReducedBasis reduce_channel(const ComplexMatrix& h, const MlllConfig& config);

OpCounters snapshot_counters(const ReducedBasis& run);

// ----------------------------------------------------- reducedness checks

/// True when every component of r(l, k) / r(l, l), l < k, is at most
/// 0.5 + tol in magnitude.
bool is_size_reduced(const ComplexMatrix& r, double tol = 1e-9);

/// delta |r(k-1,k-1)|^2 <= |r(k,k)|^2 (1 + tol) for every k.
bool satisfies_siegel(const ComplexMatrix& r, double delta, double tol = 1e-9);

/// delta |r(k-1,k-1)|^2 <= (|r(k,k)|^2 + |r(k-1,k)|^2) (1 + tol) for every k.
bool satisfies_lovasz(const ComplexMatrix& r, double delta, double tol = 1e-9);

/// Summary of the ReducedBasis invariants against the input factors.
struct InvariantReport {
    bool gaussian_integer_t = false;
    double det_t_error = 0.0;       // | |det t| - 1 |
    double factor_residual = 0.0;   // ||q~ r~ - q r t||_max / ||q r||_max
    double det_r_rel_error = 0.0;   // | |det r~| - |det r| | / |det r|
    double unitarity_error = 0.0;   // ||q~^H q~ - I||_max
    bool r_triangular = false;      // zero below the diagonal, real >= 0 diagonal

    bool ok(double factor_tol = 1e-7, double unitary_tol = 1e-8, double det_tol = 1e-6) const;
};

InvariantReport check_invariants(const ComplexMatrix& q, const ComplexMatrix& r,
                                 const ReducedBasis& rb);

} // namespace latred
