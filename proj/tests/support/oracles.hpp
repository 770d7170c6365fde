// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The gqsm-capacity Authors
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

// Reference computations used only by the tests. None of them call into the
// library's density, capacity or design code; they rebuild what they need
// from the model definitions.

#include <gqsm/core_model.hpp>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

namespace oracle {

using gqsm::CMatrix;
using gqsm::CVector;
using Complex = std::complex<double>;
constexpr double kPi = 3.14159265358979323846;

/// log of the integrand of p(y|A,H) over the real symbol coordinates
/// u = (Re s_1..Re s_K, Im s_1..Im s_K): Gaussian prior times likelihood.
/// The codeword is assembled element by element from the one-hot rows.
inline double log_integrand(const std::vector<double>& u, const CVector& y, const gqsm::ActivationPattern& a,
                            const CMatrix& h, double v, double n2) {
    const int k = a.k();
    CVector x = CVector::Zero(a.n_tx());
    for (int j = 0; j < k; ++j) {
        x(a.real.rows()[static_cast<std::size_t>(j)]) += Complex(u[static_cast<std::size_t>(j)], 0.0);
        x(a.imag.rows()[static_cast<std::size_t>(j)]) += Complex(0.0, u[static_cast<std::size_t>(k + j)]);
    }
    double dist = 0.0;
    for (Eigen::Index r = 0; r < h.rows(); ++r) {
        Complex acc = y(r);
        for (Eigen::Index c = 0; c < h.cols(); ++c) acc -= h(r, c) * x(c);
        dist += std::norm(acc);
    }
    // Each real coordinate is N(0, v/2).
    double prior = 0.0;
    for (double t : u) prior += -t * t / v - 0.5 * std::log(kPi * v);
    return prior - static_cast<double>(h.rows()) * std::log(kPi * n2) - dist / n2;
}

/// Mode and Cholesky factor of the inverse negative Hessian of a concave
/// log-integrand, by finite differences and Newton steps.
struct Whitening {
    Eigen::VectorXd mode;
    Eigen::MatrixXd l; ///< u = mode + l z
    double log_peak = 0.0;
};

inline Whitening whiten(const std::function<double(const std::vector<double>&)>& f, int dim, double scale) {
    Eigen::VectorXd m = Eigen::VectorXd::Zero(dim);
    auto eval = [&](const Eigen::VectorXd& p) {
        return f(std::vector<double>(p.data(), p.data() + p.size()));
    };
    Eigen::MatrixXd hess(dim, dim);
    Eigen::VectorXd grad(dim);
    for (int iter = 0; iter < 6; ++iter) {
        const double step = 1e-3 * scale;
        for (int i = 0; i < dim; ++i) {
            Eigen::VectorXd e = Eigen::VectorXd::Zero(dim);
            e(i) = step;
            grad(i) = (eval(m + e) - eval(m - e)) / (2 * step);
            for (int j = 0; j < dim; ++j) {
                Eigen::VectorXd d = Eigen::VectorXd::Zero(dim);
                d(j) = step;
                hess(i, j) = (eval(m + e + d) - eval(m + e - d) - eval(m - e + d) + eval(m - e - d)) / (4 * step * step);
            }
        }
        hess = 0.5 * (hess + hess.transpose()).eval();
        m -= hess.ldlt().solve(grad);
    }
    Whitening w;
    w.mode = m;
    const Eigen::MatrixXd cov = (-hess).inverse();
    w.l = Eigen::LLT<Eigen::MatrixXd>(0.5 * (cov + cov.transpose())).matrixL();
    w.log_peak = eval(m);
    return w;
}

/// ln p(y|A,H) for K = 1 by nested adaptive Gauss-Kronrod quadrature over
/// the whitened symbol plane, box of half-width `radius` standard deviations.
inline double log_density_quadrature_2d(const CVector& y, const gqsm::ActivationPattern& a, const CMatrix& h,
                                        double v, double n2, double radius = 12.0) {
    auto f = [&](const std::vector<double>& u) { return log_integrand(u, y, a, h, v, n2); };
    const Whitening w = whiten(f, 2, std::sqrt(std::min(v, n2)));
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    auto inner = [&](double z1) {
        auto g = [&](double z2) {
            const Eigen::Vector2d u = w.mode + w.l * Eigen::Vector2d(z1, z2);
            return std::exp(f({u(0), u(1)}) - w.log_peak);
        };
        return GK::integrate(g, -radius, radius, 12, 1e-13);
    };
    const double mass = GK::integrate(inner, -radius, radius, 12, 1e-13);
    return w.log_peak + std::log(mass) + std::log(w.l.determinant());
}

/// Gauss-Hermite nodes and weights for the weight exp(-z^2 / 2) (Golub-Welsch).
inline std::pair<std::vector<double>, std::vector<double>> hermite_rule(int n) {
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) j(i, i - 1) = j(i - 1, i) = std::sqrt(static_cast<double>(i));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
    std::vector<double> nodes(static_cast<std::size_t>(n)), weights(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        nodes[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
        const double v0 = es.eigenvectors()(0, i);
        weights[static_cast<std::size_t>(i)] = std::sqrt(2.0 * kPi) * v0 * v0;
    }
    return {nodes, weights};
}

/// ln p(y|A,H) for any K by a tensor Gauss-Hermite rule over the whitened
/// 2K-dimensional symbol space.
inline double log_density_quadrature_hermite(const CVector& y, const gqsm::ActivationPattern& a, const CMatrix& h,
                                             double v, double n2, int nodes_per_dim = 12) {
    const int dim = 2 * a.k();
    auto f = [&](const std::vector<double>& u) { return log_integrand(u, y, a, h, v, n2); };
    const Whitening w = whiten(f, dim, std::sqrt(std::min(v, n2)));
    const auto [nodes, weights] = hermite_rule(nodes_per_dim);
    std::vector<int> idx(static_cast<std::size_t>(dim), 0);
    double mass = 0.0;
    Eigen::VectorXd z(dim);
    while (true) {
        double wt = 1.0;
        for (int d = 0; d < dim; ++d) {
            z(d) = nodes[static_cast<std::size_t>(idx[static_cast<std::size_t>(d)])];
            wt *= weights[static_cast<std::size_t>(idx[static_cast<std::size_t>(d)])];
        }
        const Eigen::VectorXd u = w.mode + w.l * z;
        const double g = f(std::vector<double>(u.data(), u.data() + dim)) - w.log_peak + 0.5 * z.squaredNorm();
        mass += wt * std::exp(g);
        int d = 0;
        while (d < dim && ++idx[static_cast<std::size_t>(d)] == nodes_per_dim) idx[static_cast<std::size_t>(d++)] = 0;
        if (d == dim) break;
    }
    return w.log_peak + std::log(mass) + std::log(w.l.determinant());
}

/// ln p(y|A,H) from the Gaussian marginal of the stacked output
/// [Re y; Im y] ~ N(0, sum_c (v/2) b_c b_c^T + (n2/2) I), where b_c is the
/// response to one real symbol coordinate.
inline double log_density_marginal(const CVector& y, const gqsm::ActivationPattern& a, const CMatrix& h, double v,
                                   double n2) {
    const auto nr = h.rows();
    Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(2 * nr, 2 * nr) * (n2 / 2.0);
    auto add = [&](int antenna, Complex unit) {
        Eigen::VectorXd b(2 * nr);
        for (Eigen::Index r = 0; r < nr; ++r) {
            const Complex c = h(r, antenna) * unit;
            b(r) = c.real();
            b(nr + r) = c.imag();
        }
        cov += (v / 2.0) * b * b.transpose();
    };
    for (int j = 0; j < a.k(); ++j) {
        add(a.real.rows()[static_cast<std::size_t>(j)], Complex(1, 0));
        add(a.imag.rows()[static_cast<std::size_t>(j)], Complex(0, 1));
    }
    Eigen::VectorXd yt(2 * nr);
    for (Eigen::Index r = 0; r < nr; ++r) {
        yt(r) = y(r).real();
        yt(nr + r) = y(r).imag();
    }
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(cov);
    const double logdet = ldlt.vectorD().array().log().sum();
    return -0.5 * (static_cast<double>(2 * nr) * std::log(2 * kPi) + logdet + yt.dot(ldlt.solve(yt)));
}

/// E[log2(1 + rho |h|^2 / 1)] for h a 1 x n_rx CN(0, I) vector, where
/// ||h||^2 ~ Gamma(n_rx, 1).
inline double siso_capacity(int n_rx, double snr_db) {
    const double rho = std::pow(10.0, snr_db / 10.0);
    const double lg = std::lgamma(static_cast<double>(n_rx));
    auto f = [&](double t) {
        if (t <= 0.0) return 0.0;
        return std::log2(1.0 + rho * t) * std::exp((n_rx - 1) * std::log(t) - t - lg);
    };
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    return GK::integrate(f, 0.0, std::numeric_limits<double>::infinity(), 15, 1e-12);
}

/// Mutual information of equiprobable +-a over complex AWGN CN(0, n2) with
/// unit gain. Only the real part is informative: y_R ~ N(+-a, n2 / 2).
inline double binary_awgn_mi(double a, double n2) {
    const double s2 = n2 / 2.0;
    auto f = [&](double t) {
        const double yv = a + std::sqrt(s2) * t;
        const double pdf = std::exp(-0.5 * t * t) / std::sqrt(2 * kPi);
        const double z = -2.0 * a * yv / s2;
        const double l = z > 30 ? z / std::log(2.0) : std::log2(1.0 + std::exp(z));
        return pdf * l;
    };
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    return 1.0 - GK::integrate(f, -40.0, 40.0, 15, 1e-13);
}

/// Exhaustive reference for the activation design objective: among all
/// q-subsets of the lexicographic k-subsets of n antennas, the first subset
/// (in lexicographic order of index tuples) minimizing spread, then the sum of
/// squared activation counts.
struct ExhaustiveResult {
    std::vector<std::size_t> selected;
    int spread = 0;
    std::int64_t sum_of_squares = 0;
};

inline std::vector<std::vector<int>> k_subsets(int n, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> c(static_cast<std::size_t>(k));
    std::iota(c.begin(), c.end(), 0);
    while (true) {
        out.push_back(c);
        int i = k - 1;
        while (i >= 0 && c[static_cast<std::size_t>(i)] == n - k + i) --i;
        if (i < 0) break;
        ++c[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j) c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] + 1;
    }
    return out;
}

inline ExhaustiveResult exhaustive_design(int n, int k, int q) {
    const auto cands = k_subsets(n, k);
    const auto picks = k_subsets(static_cast<int>(cands.size()), q);
    ExhaustiveResult best;
    best.spread = std::numeric_limits<int>::max();
    std::vector<int> counts(static_cast<std::size_t>(n));
    for (const auto& pick : picks) {
        std::fill(counts.begin(), counts.end(), 0);
        for (int p : pick)
            for (int a : cands[static_cast<std::size_t>(p)]) ++counts[static_cast<std::size_t>(a)];
        const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
        const int spread = *hi - *lo;
        std::int64_t ss = 0;
        for (int c : counts) ss += static_cast<std::int64_t>(c) * c;
        if (spread < best.spread || (spread == best.spread && ss < best.sum_of_squares)) {
            best.spread = spread;
            best.sum_of_squares = ss;
            best.selected.assign(pick.begin(), pick.end());
        }
    }
    return best;
}

} // namespace oracle
