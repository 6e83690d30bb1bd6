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

// Independent reference implementations used only by the tests. Nothing here
// calls into the library's numerical kernels.

#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "latred/linalg.hpp"

namespace oracle {

using Cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline Mat to_eigen(const latred::ComplexMatrix& m) {
    Mat e(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
        }
    }
    return e;
}

inline Vec to_eigen(const std::vector<Cd>& v) {
    Vec e(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
        e(static_cast<Eigen::Index>(i)) = v[i];
    }
    return e;
}

inline std::vector<Cd> from_eigen(const Vec& v) { return {v.data(), v.data() + v.size()}; }

inline double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

inline Vec lu_solve(const Mat& a, const Vec& b) { return a.fullPivLu().solve(b); }

inline Cd det(const Mat& a) { return a.fullPivLu().determinant(); }

inline double defect(const Mat& b) {
    double prod = 1.0;
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
        prod *= b.col(j).norm();
    }
    return prod / std::sqrt(std::abs(det(b.adjoint() * b)));
}

inline double condition_number(const Mat& h) {
    Eigen::JacobiSVD<Mat> svd(h);
    const auto& s = svd.singularValues();
    return s(0) / s(s.size() - 1);
}

// Brute-force nearest 16-QAM point; on equal distance keep the smaller real,
// then the smaller imaginary coordinate.
inline Cd slice(Cd z) {
    static constexpr std::array<double, 4> lv = {-3, -1, 1, 3};
    Cd best{};
    double best_d = std::numeric_limits<double>::infinity();
    for (double re : lv) {
        for (double im : lv) {
            const double d = std::norm(z - Cd{re, im});
            if (d < best_d) {
                best_d = d;
                best = {re, im};
            }
        }
    }
    return best;
}

// (H^H H)^-1 H^H y followed by slicing.
inline std::vector<Cd> zf_pinv(const Mat& h, const Vec& y) {
    const Mat pinv = (h.adjoint() * h).inverse() * h.adjoint();
    const Vec x = pinv * y;
    std::vector<Cd> out;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        out.push_back(slice(x(i)));
    }
    return out;
}

// Recursive exhaustive search, a deliberately different shape from the
// library's odometer.
inline void ml_scan(const Mat& h, const Vec& y, Vec& cur, Eigen::Index depth, double& best_d,
                    Vec& best) {
    static constexpr std::array<double, 4> lv = {-3, -1, 1, 3};
    if (depth == cur.size()) {
        const double d = (y - h * cur).squaredNorm();
        if (d < best_d) {
            best_d = d;
            best = cur;
        }
        return;
    }
    for (double re : lv) {
        for (double im : lv) {
            cur(depth) = Cd{re, im};
            ml_scan(h, y, cur, depth + 1, best_d, best);
        }
    }
}

inline std::vector<Cd> ml(const Mat& h, const Vec& y) {
    Vec cur(h.cols());
    Vec best(h.cols());
    double best_d = std::numeric_limits<double>::infinity();
    ml_scan(h, y, cur, 0, best_d, best);
    return from_eigen(best);
}

inline Cd round_away(Cd c) { return {std::round(c.real()), std::round(c.imag())}; }

struct LllResult {
    Mat r;
    Mat q;
    Mat t;
    std::size_t iterations = 0;
    std::size_t swaps = 0;
    bool converged = false;
};

// Line-by-line transcription of the modified LLL loop, 1-based k as in the
// usual pseudocode. lovasz selects the classical swap test instead.
inline LllResult lll(const Mat& q_in, const Mat& r_in, double delta, std::size_t budget,
                     bool lovasz) {
    LllResult out{r_in, q_in, Mat::Identity(r_in.cols(), r_in.cols())};
    Mat& r = out.r;
    Mat& q = out.q;
    Mat& t = out.t;
    const Eigen::Index n = r.cols();
    Eigen::Index k = 2;
    while (k <= n && out.iterations < budget) {
        ++out.iterations;
        for (Eigen::Index l = k - 1; l >= 1; --l) {
            const Cd mu = round_away(r(l - 1, k - 1) / r(l - 1, l - 1));
            if (mu != Cd{}) {
                r.block(0, k - 1, l, 1) -= mu * r.block(0, l - 1, l, 1);
                t.col(k - 1) -= mu * t.col(l - 1);
            }
        }
        const double lhs = delta * std::norm(r(k - 2, k - 2));
        double rhs = std::norm(r(k - 1, k - 1));
        if (lovasz) {
            rhs += std::norm(r(k - 2, k - 1));
        }
        if (lhs > rhs) {
            ++out.swaps;
            r.col(k - 2).swap(r.col(k - 1));
            t.col(k - 2).swap(t.col(k - 1));
            const double nrm = std::hypot(std::abs(r(k - 2, k - 2)), std::abs(r(k - 1, k - 2)));
            const Cd a = r(k - 2, k - 2) / nrm;
            const Cd b = r(k - 1, k - 2) / nrm;
            Eigen::Matrix2cd theta;
            theta << std::conj(a), std::conj(b), -b, a;
            r.block(k - 2, k - 2, 2, n - k + 2) = theta * r.block(k - 2, k - 2, 2, n - k + 2);
            q.block(0, k - 2, q.rows(), 2) = q.block(0, k - 2, q.rows(), 2) * theta.adjoint();
            // Restore a real non-negative diagonal at k.
            const Cd d = r(k - 1, k - 1);
            if (std::abs(d) > 0.0 && d != Cd{std::abs(d), 0.0}) {
                const Cd ph = d / std::abs(d);
                r.row(k - 1) *= std::conj(ph);
                q.col(k - 1) *= ph;
            }
            k = std::max<Eigen::Index>(k - 1, 2);
        } else {
            ++k;
        }
    }
    out.converged = k > n;
    return out;
}

inline bool size_reduced(const Mat& r, double tol = 1e-9) {
    for (Eigen::Index k = 1; k < r.cols(); ++k) {
        for (Eigen::Index l = 0; l < k; ++l) {
            const Cd m = r(l, k) / r(l, l);
            if (std::abs(m.real()) > 0.5 + tol || std::abs(m.imag()) > 0.5 + tol) {
                return false;
            }
        }
    }
    return true;
}

inline bool siegel(const Mat& r, double delta, double tol = 1e-9) {
    for (Eigen::Index k = 1; k < r.cols(); ++k) {
        if (delta * std::norm(r(k - 1, k - 1)) > std::norm(r(k, k)) * (1 + tol)) {
            return false;
        }
    }
    return true;
}

inline bool lovasz(const Mat& r, double delta, double tol = 1e-9) {
    for (Eigen::Index k = 1; k < r.cols(); ++k) {
        if (delta * std::norm(r(k - 1, k - 1)) >
            (std::norm(r(k, k)) + std::norm(r(k - 1, k))) * (1 + tol)) {
            return false;
        }
    }
    return true;
}

} // namespace oracle
