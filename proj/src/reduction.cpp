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

#include "latred/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "latred/error.hpp"
#include "latred/fxp.hpp"
#include "latred/gaussian_int.hpp"

namespace latred {

void MlllConfig::validate() const {
    if (!(delta > 0.5 && delta <= 1.0)) {
        throw ConfigError("delta must lie in (0.5, 1], got " + std::to_string(delta));
    }
}

OpCounters& OpCounters::operator+=(const OpCounters& o) {
    cmul += o.cmul;
    cordic += o.cordic;
    siegel += o.siegel;
    size_reduction += o.size_reduction;
    stream += o.stream;
    arrange += o.arrange;
    cordic_calls += o.cordic_calls;
    return *this;
}

namespace {

enum class SwapTest { siegel, lovasz };

void check_inputs(const ComplexMatrix& q, const ComplexMatrix& r) {
    if (r.empty() || r.rows() != r.cols()) {
        throw DimensionError("reduction: r must be square");
    }
    if (q.cols() != r.rows() || q.rows() < q.cols()) {
        throw DimensionError("reduction: q must have r.rows() orthonormal columns");
    }
    if (!q.all_finite() || !r.all_finite()) {
        throw NonFiniteInput("reduction: non-finite input");
    }
}

// Floating-point datapath. Mirrors FixedEngine operation for operation.
class FloatEngine {
  public:
    FloatEngine(const ComplexMatrix& q, const ComplexMatrix& r, OpCounters& counters)
        : q_(q), r_(r), counters_(counters), tiny_(1e-12 * std::max(r.max_abs(), 1e-300)) {}

    std::size_t dim() const { return r_.cols(); }

    GaussInt mu(std::size_t l, std::size_t k) const {
        const double d = r_(l, l).real();
        if (!(std::abs(d) > tiny_)) {
            throw ZeroDiagonal("reduction: diagonal entry " + std::to_string(l) + " vanished");
        }
        return to_gauss_int(round_gaussian(r_(l, k) / d));
    }

    void size_reduce(std::size_t l, std::size_t k, GaussInt mu) {
        const Complex m = mu.to_complex();
        for (std::size_t i = 0; i <= l; ++i) {
            r_(i, k) -= m * r_(i, l);
        }
        counters_.cmul += l + 1;
    }

    bool swap_test(std::size_t k, double delta, SwapTest test) {
        ++counters_.siegel;
        const double prev = std::norm(r_(k - 1, k - 1));
        double cur = std::norm(r_(k, k));
        if (test == SwapTest::lovasz) {
            cur += std::norm(r_(k - 1, k));
        }
        return delta * prev > cur;
    }

    void swap_rotate(std::size_t k) {
        const std::size_t n = dim();
        r_.swap_cols(k - 1, k);
        const Givens g = make_givens(r_(k - 1, k - 1), r_(k, k - 1));
        apply_givens_rows(r_, g, k - 1, k, k);
        apply_givens_cols(q_, g, k - 1, k);
        r_(k - 1, k - 1) = g.norm;
        r_(k, k - 1) = 0.0;
        ++counters_.cordic;
        ++counters_.cordic_calls;
        counters_.cmul += 4 * (n - k) + 4 * q_.rows();

        const Complex d = r_(k, k);
        if (d.imag() != 0.0 || d.real() < 0.0) {
            const double mag = std::abs(d);
            if (mag == 0.0) {
                return;
            }
            const Complex phase = d / mag;
            for (std::size_t j = k + 1; j < n; ++j) {
                r_(k, j) *= std::conj(phase);
            }
            for (auto& v : q_.col(k)) {
                v *= phase;
            }
            r_(k, k) = mag;
            counters_.cmul += (n - k - 1) + q_.rows();
        }
    }

    void finish(ReducedBasis& rb) {
        rb.q_tilde = std::move(q_);
        rb.r_tilde = std::move(r_);
    }

  private:
    ComplexMatrix q_;
    ComplexMatrix r_;
    OpCounters& counters_;
    double tiny_;
};

// Q3.12 datapath. R is scaled by a power of two so every column norm is at
// most one; Q is unitary and needs no scaling. T stays exact.
class FixedEngine {
  public:
    FixedEngine(const ComplexMatrix& q, const ComplexMatrix& r, ReducedBasis& rb)
        : qrows_(q.rows()), n_(r.cols()), q_(qrows_ * n_), r_(n_ * n_), rb_(rb) {
        double max_norm = 0.0;
        for (std::size_t j = 0; j < n_; ++j) {
            max_norm = std::max(max_norm, column_norm(r, j));
        }
        if (max_norm == 0.0) {
            throw ZeroDiagonal("reduction: zero matrix");
        }
        exponent_ = static_cast<int>(std::ceil(std::log2(max_norm)));
        const double scale = std::ldexp(1.0, -exponent_);
        for (std::size_t j = 0; j < n_; ++j) {
            for (std::size_t i = 0; i < qrows_; ++i) {
                Q(i, j) = take(fxp::to_cfx(q(i, j)));
            }
            for (std::size_t i = 0; i < n_; ++i) {
                R(i, j) = take(fxp::to_cfx(r(i, j) * scale));
            }
        }
        rb_.counters.stream += qrows_ * n_ + 2 * n_ * n_;
    }

    std::size_t dim() const { return n_; }

    GaussInt mu(std::size_t l, std::size_t k) {
        const fxp::Fx d = fxp::real_part(R(l, l));
        if (d.raw <= 0) {
            throw ZeroDiagonal("reduction: diagonal entry " + std::to_string(l) + " vanished");
        }
        const auto m = fxp::mu_fixed(R(l, k), d);
        if (m.saturated) {
            ++rb_.mu_clamps;
        }
        return {fxp::real_part(m.value).raw / fxp::kOne, fxp::imag_part(m.value).raw / fxp::kOne};
    }

    void size_reduce(std::size_t l, std::size_t k, GaussInt mu) {
        const fxp::CFx w = fxp::pack(fxp::Fx::from_raw(static_cast<std::int32_t>(mu.re * fxp::kOne)),
                                     fxp::Fx::from_raw(static_cast<std::int32_t>(mu.im * fxp::kOne)));
        for (std::size_t i = 0; i <= l; ++i) {
            R(i, k) = take(fxp::csub(R(i, k), take(fxp::cmul(w, R(i, l)))));
        }
        rb_.counters.cmul += l + 1;
    }

    bool swap_test(std::size_t k, double delta, SwapTest test) {
        ++rb_.counters.siegel;
        const fxp::Fx prev = fxp::real_part(R(k - 1, k - 1));
        const fxp::Fx cur = fxp::real_part(R(k, k));
        if (test == SwapTest::siegel && delta == 0.75) {
            return fxp::siegel_swap(prev, cur);
        }
        // Other deltas: delta in Q0.16 times the full-width square.
        const std::int64_t p = prev.raw;
        std::int64_t c = std::int64_t{cur.raw} * cur.raw;
        if (test == SwapTest::lovasz) {
            const std::int64_t re = fxp::real_part(R(k - 1, k)).raw;
            const std::int64_t im = fxp::imag_part(R(k - 1, k)).raw;
            c += re * re + im * im;
        }
        const auto d16 = static_cast<std::int64_t>(std::llround(delta * 65536.0));
        return ((d16 * p * p) >> 16) > c;
    }

    void swap_rotate(std::size_t k) {
        for (std::size_t i = 0; i < n_; ++i) {
            std::swap(R(i, k - 1), R(i, k));
        }
        const fxp::GivensFixed g = fxp::givens_theta_fixed(R(k - 1, k - 1), R(k, k - 1));
        if (g.saturated) {
            ++rb_.saturations;
        }
        ++rb_.counters.cordic;
        rb_.counters.cordic_calls += static_cast<std::uint64_t>(g.cordic_calls);

        const fxp::CFx ca = take(fxp::cconj(g.alpha));
        const fxp::CFx cb = take(fxp::cconj(g.beta));
        const fxp::CFx nb = take(fxp::cneg(g.beta));
        const fxp::CFx ncb = take(fxp::cneg(cb));
        rb_.counters.arrange += 4;

        for (std::size_t j = k; j < n_; ++j) {
            const fxp::CFx top = R(k - 1, j);
            const fxp::CFx bot = R(k, j);
            R(k - 1, j) = take(fxp::cadd(take(fxp::cmul(ca, top)), take(fxp::cmul(cb, bot))));
            R(k, j) = take(fxp::cadd(take(fxp::cmul(nb, top)), take(fxp::cmul(g.alpha, bot))));
        }
        R(k - 1, k - 1) = fxp::pack(g.norm, fxp::Fx{});
        R(k, k - 1) = fxp::CFx{};
        for (std::size_t i = 0; i < qrows_; ++i) {
            const fxp::CFx left = Q(i, k - 1);
            const fxp::CFx right = Q(i, k);
            Q(i, k - 1) = take(fxp::cadd(take(fxp::cmul(left, g.alpha)), take(fxp::cmul(right, g.beta))));
            Q(i, k) = take(fxp::cadd(take(fxp::cmul(left, ncb)), take(fxp::cmul(right, ca))));
        }
        rb_.counters.cmul += 4 * (n_ - k) + 4 * qrows_;

        const fxp::CFx d = R(k, k);
        const fxp::Fx dre = fxp::real_part(d);
        const fxp::Fx dim = fxp::imag_part(d);
        if (d.packed == 0 || (dim.raw == 0 && dre.raw > 0)) {
            return;
        }
        const fxp::CordicResult p = fxp::cordic_master_slave(dre, dim);
        ++rb_.counters.cordic_calls;
        if (p.overflow) {
            ++rb_.saturations;
        }
        const fxp::CFx phase = fxp::pack(p.cos_out, p.sin_out);
        const fxp::CFx back = take(fxp::cconj(phase));
        ++rb_.counters.arrange;
        R(k, k) = fxp::pack(p.magnitude, fxp::Fx{});
        for (std::size_t j = k + 1; j < n_; ++j) {
            R(k, j) = take(fxp::cmul(back, R(k, j)));
        }
        for (std::size_t i = 0; i < qrows_; ++i) {
            Q(i, k) = take(fxp::cmul(Q(i, k), phase));
        }
        rb_.counters.cmul += (n_ - k - 1) + qrows_;
    }

    void finish(ReducedBasis& rb) {
        rb.q_tilde = ComplexMatrix(qrows_, n_);
        rb.r_tilde = ComplexMatrix(n_, n_);
        const double scale = std::ldexp(1.0, exponent_);
        for (std::size_t j = 0; j < n_; ++j) {
            for (std::size_t i = 0; i < qrows_; ++i) {
                rb.q_tilde(i, j) = fxp::to_complex(Q(i, j));
            }
            for (std::size_t i = 0; i < n_; ++i) {
                rb.r_tilde(i, j) = fxp::to_complex(R(i, j)) * scale;
            }
        }
        rb.counters.stream += qrows_ * n_ + 2 * n_ * n_;
    }

  private:
    fxp::CFx& Q(std::size_t i, std::size_t j) { return q_[j * qrows_ + i]; }
    fxp::CFx& R(std::size_t i, std::size_t j) { return r_[j * n_ + i]; }

    template <class T>
    T take(fxp::Flagged<T> f) {
        if (f.saturated) {
            ++rb_.saturations;
        }
        return f.value;
    }

    std::size_t qrows_;
    std::size_t n_;
    std::vector<fxp::CFx> q_;
    std::vector<fxp::CFx> r_;
    ReducedBasis& rb_;
    int exponent_ = 0;
};

// The k-schedule shared by both algorithms and both datapaths. k is 0-based
// here, so the first body iteration works on the second column.
template <class Engine>
void run_schedule(Engine& eng, ReducedBasis& rb, std::size_t budget, bool early_termination,
                  double delta, SwapTest test) {
    const std::size_t n = eng.dim();
    GaussIntMatrix t = GaussIntMatrix::identity(n);
    std::size_t k = 1;
    bool sweep_clean = true;

    while (k < n && rb.body_iterations_used < budget) {
        if (budget == kUnlimitedIterations && rb.body_iterations_used >= kIterationGuard) {
            throw IterationOverflow("reduction: no convergence after " +
                                    std::to_string(kIterationGuard) + " body iterations");
        }
        if (k == 1) {
            sweep_clean = true;
        }
        ++rb.body_iterations_used;

        for (std::size_t l = k; l-- > 0;) {
            const GaussInt mu = eng.mu(l, k);
            if (!mu.is_zero()) {
                eng.size_reduce(l, k, mu);
                t.axpy_col(k, mu, l);
                ++rb.counters.size_reduction;
                rb.counters.cmul += n;
                sweep_clean = false;
            }
        }

        if (eng.swap_test(k, delta, test)) {
            eng.swap_rotate(k);
            t.swap_cols(k - 1, k);
            ++rb.swap_count;
            sweep_clean = false;
            k = std::max<std::size_t>(k - 1, 1);
        } else {
            ++k;
        }

        // A clean sweep from the second column up also ends the k walk, so
        // this never fires ahead of natural completion under this schedule.
        if (early_termination && sweep_clean && k >= n) {
            break;
        }
    }

    rb.converged = k >= n;
    eng.finish(rb);
    rb.t = t.to_complex();
}

} // namespace

ReducedBasis mlll_reduce(const ComplexMatrix& q, const ComplexMatrix& r, const MlllConfig& config) {
    config.validate();
    check_inputs(q, r);
    ReducedBasis rb;
    if (config.arithmetic == Arithmetic::fixed) {
        FixedEngine eng(q, r, rb);
        run_schedule(eng, rb, config.max_body_iterations, config.early_termination, config.delta,
                     SwapTest::siegel);
    } else {
        FloatEngine eng(q, r, rb.counters);
        run_schedule(eng, rb, config.max_body_iterations, config.early_termination, config.delta,
                     SwapTest::siegel);
    }
    return rb;
}

ReducedBasis clll_reduce(const ComplexMatrix& q, const ComplexMatrix& r, double delta) {
    MlllConfig{.delta = delta}.validate();
    check_inputs(q, r);
    ReducedBasis rb;
    FloatEngine eng(q, r, rb.counters);
    run_schedule(eng, rb, kUnlimitedIterations, false, delta, SwapTest::lovasz);
    return rb;
}

ReducedBasis reduce_channel(const ComplexMatrix& h, const MlllConfig& config) {
    const QrFactors f = qr_decompose(h).thin();
    return mlll_reduce(f.q, f.r, config);
}

OpCounters snapshot_counters(const ReducedBasis& run) { return run.counters; }

bool is_size_reduced(const ComplexMatrix& r, double tol) {
    for (std::size_t k = 1; k < r.cols(); ++k) {
        for (std::size_t l = 0; l < k; ++l) {
            const Complex ratio = r(l, k) / r(l, l);
            if (std::abs(ratio.real()) > 0.5 + tol || std::abs(ratio.imag()) > 0.5 + tol) {
                return false;
            }
        }
    }
    return true;
}

bool satisfies_siegel(const ComplexMatrix& r, double delta, double tol) {
    for (std::size_t k = 1; k < r.cols(); ++k) {
        if (delta * std::norm(r(k - 1, k - 1)) > std::norm(r(k, k)) * (1.0 + tol)) {
            return false;
        }
    }
    return true;
}

bool satisfies_lovasz(const ComplexMatrix& r, double delta, double tol) {
    for (std::size_t k = 1; k < r.cols(); ++k) {
        const double rhs = std::norm(r(k, k)) + std::norm(r(k - 1, k));
        if (delta * std::norm(r(k - 1, k - 1)) > rhs * (1.0 + tol)) {
            return false;
        }
    }
    return true;
}

bool InvariantReport::ok(double factor_tol, double unitary_tol, double det_tol) const {
    return gaussian_integer_t && det_t_error <= 1e-6 && factor_residual <= factor_tol &&
           det_r_rel_error <= det_tol && unitarity_error <= unitary_tol && r_triangular;
}

InvariantReport check_invariants(const ComplexMatrix& q, const ComplexMatrix& r,
                                 const ReducedBasis& rb) {
    InvariantReport rep;
    const std::size_t n = r.cols();

    rep.gaussian_integer_t = std::all_of(rb.t.data().begin(), rb.t.data().end(),
                                         [](const Complex& c) { return is_gaussian_integer(c); });
    rep.det_t_error = std::abs(std::abs(determinant(rb.t)) - 1.0);

    const ComplexMatrix qr = q * r;
    const ComplexMatrix lhs = rb.q_tilde * rb.r_tilde;
    const ComplexMatrix rhs = qr * rb.t;
    rep.factor_residual = (lhs - rhs).max_abs() / std::max(qr.max_abs(), 1e-300);

    double det_r = 1.0;
    double det_rt = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        det_r *= std::abs(r(i, i));
        det_rt *= std::abs(rb.r_tilde(i, i));
    }
    rep.det_r_rel_error = std::abs(det_rt - det_r) / std::max(det_r, 1e-300);

    const ComplexMatrix gram = rb.q_tilde.adjoint() * rb.q_tilde;
    rep.unitarity_error = (gram - ComplexMatrix::identity(n)).max_abs();

    rep.r_triangular = true;
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = j + 1; i < n; ++i) {
            if (rb.r_tilde(i, j) != Complex{}) {
                rep.r_triangular = false;
            }
        }
        const Complex d = rb.r_tilde(j, j);
        if (d.imag() != 0.0 || d.real() < 0.0) {
            rep.r_triangular = false;
        }
    }
    return rep;
}

} // namespace latred
