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

// Continuous-input AMI of GQSM with Gaussian symbols.
//
// The AMI splits into a symbol part and a pattern part, I = I_s + I_A, with
//
//   I_s = E[-log2 p(y|A,H)] - N_r log2(pi e sigma_n^2)
//   I_A = log2 Q - E[log2 sum_i p(y|A_i,H) / p(y|A,H)]
//
// where A is uniform over the Q patterns. The outer expectation is always
// Monte Carlo. The conditional density p(y|A,H) is evaluated by one of
//
//   ClosedForm  exact Gaussian integral over the 2K real symbol coordinates,
//   InnerMC     sample mean over fresh symbol draws (error grows with SNR),
//   K1Explicit  the explicit two-step elimination for K = 1.
//
// All densities are carried as natural logarithms.

#include <gqsm/core_model.hpp>
#include <gqsm/parallel.hpp>

#include <Eigen/Cholesky>

#include <cmath>
#include <limits>
#include <random>
#include <string_view>
#include <vector>

namespace gqsm {

enum class DensityMethod { ClosedForm, InnerMC, K1Explicit };

inline std::string_view to_string(DensityMethod m) {
    switch (m) {
    case DensityMethod::ClosedForm: return "closed";
    case DensityMethod::InnerMC: return "mc";
    case DensityMethod::K1Explicit: return "k1";
    }
    return "?";
}

inline DensityMethod parse_density_method(std::string_view text) {
    if (text == "closed") return DensityMethod::ClosedForm;
    if (text == "mc") return DensityMethod::InnerMC;
    if (text == "k1") return DensityMethod::K1Explicit;
    throw ConfigError("density", "unknown density method '" + std::string(text) + "'");
}

struct LogDensity {
    double value = 0.0;     ///< ln p(y|A,H)
    double std_error = 0.0; ///< zero for exact evaluators
};

// ---------------------------------------------------------------- closed form

/// Real-stacked form of ||y - H x||^2 = ||y_stack - B u|| ^2 with
/// u = [Re s; Im s], and the precision P = I/v + B^T B / sigma_n^2 and
/// linear term q = B^T y_stack / sigma_n^2 of the Gaussian integrand.
struct QuadraticFormDecomposition {
    RMatrix b_matrix;
    RMatrix p_matrix;
    RVector q_vector;
    RVector y_stack;
};

/// B = [[Re(H) A_R, -Im(H) A_I], [Im(H) A_R, Re(H) A_I]].
inline RMatrix stacked_channel(const ActivationPattern& pattern, const CMatrix& h) {
    if (h.cols() != pattern.n_tx())
        throw DimensionMismatch("H has " + std::to_string(h.cols()) + " columns but the pattern spans " +
                                std::to_string(pattern.n_tx()) + " antennas");
    const Eigen::Index nr = h.rows();
    const int k = pattern.k();
    RMatrix b(2 * nr, 2 * k);
    for (int j = 0; j < k; ++j) {
        const auto a = pattern.real.rows()[static_cast<std::size_t>(j)];
        const auto c = pattern.imag.rows()[static_cast<std::size_t>(j)];
        for (Eigen::Index r = 0; r < nr; ++r) {
            b(r, j) = h(r, a).real();
            b(nr + r, j) = h(r, a).imag();
            b(r, k + j) = -h(r, c).imag();
            b(nr + r, k + j) = h(r, c).real();
        }
    }
    return b;
}

inline RVector stack(const CVector& y) {
    RVector out(2 * y.size());
    out.head(y.size()) = y.real();
    out.tail(y.size()) = y.imag();
    return out;
}

inline QuadraticFormDecomposition quadratic_form(const CVector& y, const ActivationPattern& pattern,
                                                 const CMatrix& h, double symbol_variance, double sigma_n2) {
    if (y.size() != h.rows()) throw DimensionMismatch("y and H differ in receive dimension");
    QuadraticFormDecomposition d;
    d.b_matrix = stacked_channel(pattern, h);
    d.y_stack = stack(y);
    d.p_matrix = d.b_matrix.transpose() * d.b_matrix / sigma_n2;
    d.p_matrix.diagonal().array() += 1.0 / symbol_variance;
    d.q_vector = d.b_matrix.transpose() * d.y_stack / sigma_n2;
    return d;
}

/// ln p(y|A,H) for symbols i.i.d. CN(0, symbol_variance).
///
///   ln p = -K ln v - N_r ln(pi sigma_n^2) - 1/2 ln det P
///          - ( ||y_stack - B u*||^2 / sigma_n^2 + ||u*||^2 / v ),   u* = P^{-1} q,
///
/// where the bracket equals ||y||^2/sigma_n^2 - q^T P^{-1} q but is formed
/// from the residual, which avoids cancellation at high SNR.
inline LogDensity log_density_closed(const CVector& y, const ActivationPattern& pattern, const CMatrix& h,
                                     double symbol_variance, double sigma_n2) {
    if (!(symbol_variance > 0.0) || !(sigma_n2 > 0.0))
        throw ConfigError("sigma", "variances must be positive");
    const auto d = quadratic_form(y, pattern, h, symbol_variance, sigma_n2);
    const Eigen::LLT<RMatrix> llt(d.p_matrix);
    if (llt.info() != Eigen::Success) throw NumericalError("precision matrix is not positive definite");
    const RVector u = llt.solve(d.q_vector);
    const RMatrix& l = llt.matrixL();
    double half_logdet = 0.0;
    for (Eigen::Index i = 0; i < l.rows(); ++i) half_logdet += std::log(l(i, i));
    const double misfit = (d.y_stack - d.b_matrix * u).squaredNorm() / sigma_n2 + u.squaredNorm() / symbol_variance;
    const double k = static_cast<double>(pattern.k());
    const double nr = static_cast<double>(h.rows());
    const double value = -k * std::log(symbol_variance) - nr * std::log(kPi * sigma_n2) - half_logdet - misfit;
    if (!std::isfinite(value)) throw NumericalError("closed-form log-density is not finite");
    return {value, 0.0};
}

/// Overload taking the total transmit power; symbols are CN(0, sigma_s2 / K).
inline LogDensity log_density_closed(const CVector& y, const ActivationPattern& pattern, const CMatrix& h,
                                     double sigma_s2, double sigma_n2, int k) {
    if (k != pattern.k()) throw DimensionMismatch("k does not match the pattern");
    return log_density_closed(y, pattern, h, sigma_s2 / k, sigma_n2);
}

// ---------------------------------------------------------------- K = 1 explicit

struct K1Constants {
    double p1 = 0.0;
    double p2 = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
};

/// Which transcription of the explicit K = 1 chain to evaluate.
///   Corrected: h_a / h_b are the columns picked by A_R / A_I, and the final
///              exponent is the one obtained by carrying out both integrals.
///   AsPrinted: literal columns 1 and 2 with the uncorrected transcription of
///              the final exponent; retained only to measure how far it is off.
enum class K1Variant { Corrected, AsPrinted };

/// p1 = v||h_a||^2 + sigma_n^2, p2 = v||h_b||^2 + sigma_n^2,
/// alpha = sum_i (Re h_ia Im h_ib - Im h_ia Re h_ib),
/// beta  = sum_i (Re h_ia Re y_i + Im h_ia Im y_i),
/// gamma = sum_i (Im h_ib Re y_i - Re h_ib Im y_i).
inline K1Constants k1_constants(const CVector& y, const CMatrix& h, Eigen::Index col_a, Eigen::Index col_b,
                                double symbol_variance, double sigma_n2) {
    K1Constants c;
    c.p1 = symbol_variance * h.col(col_a).squaredNorm() + sigma_n2;
    c.p2 = symbol_variance * h.col(col_b).squaredNorm() + sigma_n2;
    for (Eigen::Index i = 0; i < h.rows(); ++i) {
        const Complex ha = h(i, col_a);
        const Complex hb = h(i, col_b);
        c.alpha += ha.real() * hb.imag() - ha.imag() * hb.real();
        c.beta += ha.real() * y(i).real() + ha.imag() * y(i).imag();
        c.gamma += hb.imag() * y(i).real() - hb.real() * y(i).imag();
    }
    return c;
}

/// ln p(y|A,H) for K = 1 by integrating out Re s and then Im s in closed form:
///
///   ln p = -N_r ln(pi sigma_n^2) + ln sigma_n^2 - 1/2 ln D + Z,
///   D = p1 p2 - v^2 alpha^2,
///   Z = v p1 (v alpha beta / p1 - gamma)^2 / (sigma_n^2 D) + v beta^2 / (p1 sigma_n^2) - ||y||^2 / sigma_n^2.
inline LogDensity log_density_k1_explicit(const CVector& y, const ActivationPattern& pattern, const CMatrix& h,
                                          double symbol_variance, double sigma_n2,
                                          K1Variant variant = K1Variant::Corrected) {
    if (pattern.k() != 1) throw ConfigError("k", "the explicit evaluator requires k = 1");
    if (y.size() != h.rows()) throw DimensionMismatch("y and H differ in receive dimension");
    if (h.cols() != pattern.n_tx()) throw DimensionMismatch("H and the pattern differ in n_tx");
    const double v = symbol_variance;
    const double nr = static_cast<double>(h.rows());
    const double y2 = y.squaredNorm();
    const double prefix = -nr * std::log(kPi * sigma_n2) + std::log(sigma_n2);

    if (variant == K1Variant::Corrected) {
        const auto c = k1_constants(y, h, pattern.real.rows()[0], pattern.imag.rows()[0], v, sigma_n2);
        const double det = c.p1 * c.p2 - v * v * c.alpha * c.alpha;
        if (!(det > 0.0)) throw NumericalError("explicit K=1 determinant is not positive");
        const double lin = v * c.alpha * c.beta / c.p1 - c.gamma;
        const double z = v * c.p1 * lin * lin / (sigma_n2 * det) + v * c.beta * c.beta / (c.p1 * sigma_n2) -
                         y2 / sigma_n2;
        return {prefix - 0.5 * std::log(det) + z, 0.0};
    }

    if (h.cols() < 2) throw DimensionMismatch("the printed form references two channel columns");
    const auto c = k1_constants(y, h, 0, 1, v, sigma_n2);
    const double det = c.p1 * c.p2 - v * v * c.alpha * c.alpha;
    if (!(det > 0.0)) throw NumericalError("explicit K=1 determinant is not positive");
    const double z = (c.p2 / v - v * c.alpha * c.alpha / c.p1) * (v * c.alpha * c.beta / c.p1 + c.gamma) / sigma_n2 +
                     v * c.beta * c.beta / (c.p1 * sigma_n2) + y2 / (sigma_n2 * sigma_n2);
    return {prefix - 0.5 * std::log(det) + z, 0.0};
}

// ---------------------------------------------------------------- inner Monte Carlo

/// ln of the sample mean over n_inner symbol draws of
/// (pi sigma_n^2)^{-N_r} exp(-||y - H x||^2 / sigma_n^2), with a delta-method
/// standard error (infinite for a single draw).
template <class Rng>
LogDensity log_density_mc(const CVector& y, const ActivationPattern& pattern, const CMatrix& h,
                          double symbol_variance, double sigma_n2, std::size_t n_inner, Rng& rng) {
    if (n_inner < 1) throw ConfigError("n_inner", "must be positive");
    if (y.size() != h.rows()) throw DimensionMismatch("y and H differ in receive dimension");
    if (h.cols() != pattern.n_tx()) throw DimensionMismatch("H and the pattern differ in n_tx");
    const Eigen::Index nr = h.rows();
    const int k = pattern.k();
    std::normal_distribution<double> g(0.0, std::sqrt(symbol_variance / 2.0));
    std::vector<double> expo(n_inner);
    CVector r(nr);
    for (std::size_t i = 0; i < n_inner; ++i) {
        r = y;
        for (int j = 0; j < k; ++j) {
            const double sr = g(rng);
            const double si = g(rng);
            r -= sr * h.col(pattern.real.rows()[static_cast<std::size_t>(j)]);
            r -= Complex(0.0, si) * h.col(pattern.imag.rows()[static_cast<std::size_t>(j)]);
        }
        expo[i] = -r.squaredNorm() / sigma_n2;
    }
    const double lse = log_sum_exp(expo);
    const double n = static_cast<double>(n_inner);
    LogDensity out;
    out.value = lse - std::log(n) - static_cast<double>(nr) * std::log(kPi * sigma_n2);
    if (n_inner < 2) {
        out.std_error = std::numeric_limits<double>::infinity();
        return out;
    }
    const double peak = *std::max_element(expo.begin(), expo.end());
    double s1 = 0.0;
    double s2 = 0.0;
    for (double e : expo) {
        const double w = std::exp(e - peak);
        s1 += w;
        s2 += w * w;
    }
    const double mean = s1 / n;
    const double var = std::max(0.0, (s2 - n * mean * mean) / (n - 1.0));
    out.std_error = std::sqrt(var / n) / mean;
    return out;
}

// ---------------------------------------------------------------- AMI

/// Per-realization AMI terms in bits.
struct AmiSamples {
    std::vector<double> i_s;
    std::vector<double> i_a;
};

struct AmiEstimate {
    double i_s_bits = 0.0;
    double i_a_bits = 0.0;
    double i_total_bits = 0.0;
    double std_error_bits = 0.0; ///< of the total
    double std_error_s_bits = 0.0;
    double std_error_a_bits = 0.0;
    std::size_t n_outer = 0;
    std::size_t n_inner = 0;
    DensityMethod density_method = DensityMethod::ClosedForm;
};

/// One outer draw: channel, symbols, noise and the transmitted pattern index.
/// The pattern index has its own substream so that runs with different Q
/// share H, s and n realization by realization.
struct OuterDraw {
    CMatrix h;
    CVector s;
    CVector n;
    std::size_t pattern = 0;
};

inline OuterDraw draw_outer(const SystemConfig& cfg, std::size_t q, std::uint64_t index) {
    Substream rng(cfg.master_seed, StreamDomain::Outer, index, 0);
    OuterDraw d;
    d.h = sample_channel(rng, cfg.n_rx, cfg.n_tx, cfg.channel).h;
    d.s = sample_symbols(rng, cfg);
    d.n = sample_complex_gaussian(rng, cfg.n_rx, cfg.sigma_n2());
    Substream pick(cfg.master_seed, StreamDomain::Outer, index, 1);
    d.pattern = std::uniform_int_distribution<std::size_t>(0, q - 1)(pick);
    return d;
}

/// ln p(y|A_i,H) for pattern i of the set, under the chosen evaluator.
inline LogDensity log_density(DensityMethod method, const SystemConfig& cfg, const CVector& y,
                              const ActivationPattern& pattern, const CMatrix& h, std::uint64_t realization,
                              std::size_t pattern_index) {
    const double v = cfg.symbol_variance();
    const double n2 = cfg.sigma_n2();
    switch (method) {
    case DensityMethod::ClosedForm: return log_density_closed(y, pattern, h, v, n2);
    case DensityMethod::K1Explicit: return log_density_k1_explicit(y, pattern, h, v, n2);
    case DensityMethod::InnerMC: {
        Substream inner(cfg.master_seed, StreamDomain::InnerMonteCarlo, realization, pattern_index);
        return log_density_mc(y, pattern, h, v, n2, cfg.n_inner, inner);
    }
    }
    throw ConfigError("density", "unknown density method");
}

/// I_s and I_A terms of every outer realization.
inline AmiSamples continuous_ami_samples(const SystemConfig& cfg, const APSet& set, DensityMethod method,
                                         unsigned workers = 1) {
    cfg.validate();
    validate_scheme(cfg, set);
    if (method == DensityMethod::K1Explicit && cfg.k != 1)
        throw ConfigError("density", "the explicit evaluator requires k = 1");
    const std::size_t q = set.size();
    const double log2q = std::log2(static_cast<double>(q));
    const double noise_entropy = cfg.n_rx * std::log2(kPi * std::exp(1.0) * cfg.sigma_n2());

    struct Term {
        double is;
        double ia;
    };
    const auto terms = parallel_map<Term>(cfg.n_outer, workers, [&](std::size_t r) {
        const OuterDraw d = draw_outer(cfg, q, r);
        const CVector x = build_codeword(set[d.pattern], d.s);
        const CVector y = received_signal(d.h, x, d.n);
        std::vector<double> lp(q);
        for (std::size_t i = 0; i < q; ++i) lp[i] = log_density(method, cfg, y, set[i], d.h, r, i).value;
        const double own = lp[d.pattern];
        const double mix = log_sum_exp_sorted(lp);
        return Term{nats_to_bits(-own) - noise_entropy, log2q - nats_to_bits(mix - own)};
    });

    AmiSamples out;
    out.i_s.reserve(terms.size());
    out.i_a.reserve(terms.size());
    for (const auto& t : terms) {
        out.i_s.push_back(t.is);
        out.i_a.push_back(t.ia);
    }
    return out;
}

inline AmiEstimate summarize_ami(const AmiSamples& samples, std::size_t n_inner, DensityMethod method) {
    std::vector<double> total(samples.i_s.size());
    for (std::size_t i = 0; i < total.size(); ++i) total[i] = samples.i_s[i] + samples.i_a[i];
    const auto s = summarize(samples.i_s);
    const auto a = summarize(samples.i_a);
    const auto t = summarize(total);
    AmiEstimate e;
    e.i_s_bits = s.mean;
    e.i_a_bits = a.mean;
    e.i_total_bits = e.i_s_bits + e.i_a_bits;
    e.std_error_bits = t.standard_error;
    e.std_error_s_bits = s.standard_error;
    e.std_error_a_bits = a.standard_error;
    e.n_outer = samples.i_s.size();
    e.n_inner = method == DensityMethod::InnerMC ? n_inner : 0;
    e.density_method = method;
    return e;
}

inline AmiEstimate ami_continuous(const SystemConfig& cfg, const APSet& set,
                                  DensityMethod method = DensityMethod::ClosedForm, unsigned workers = 1) {
    return summarize_ami(continuous_ami_samples(cfg, set, method, workers), cfg.n_inner, method);
}

/// Difference a - b of two runs that share outer realizations, with the
/// standard error of the paired per-realization differences.
struct PairedDifference {
    double d_total_bits = 0.0;
    double d_s_bits = 0.0;
    double d_a_bits = 0.0;
    double std_error_bits = 0.0;
    double std_error_s_bits = 0.0;
    double std_error_a_bits = 0.0;
};

inline PairedDifference paired_difference(const AmiSamples& a, const AmiSamples& b) {
    if (a.i_s.size() != b.i_s.size()) throw DimensionMismatch("paired runs differ in n_outer");
    const std::size_t n = a.i_s.size();
    std::vector<double> dt(n), ds(n), da(n);
    for (std::size_t i = 0; i < n; ++i) {
        ds[i] = a.i_s[i] - b.i_s[i];
        da[i] = a.i_a[i] - b.i_a[i];
        dt[i] = ds[i] + da[i];
    }
    const auto st = summarize(dt), ss = summarize(ds), sa = summarize(da);
    return {ss.mean + sa.mean, ss.mean, sa.mean, st.standard_error, ss.standard_error, sa.standard_error};
}

// ---------------------------------------------------------------- capacity

struct CapacityEstimate {
    double bits = 0.0;
    double std_error_bits = 0.0;
    std::size_t n_trials = 0;
};

/// E[log2 det(I + sigma_s^2 / (K sigma_n^2) H_a^H H_a)] over i.i.d. CN(0,1)
/// N_r x K matrices H_a: the ergodic capacity of K x N_r MIMO with equal power.
inline CapacityEstimate mimo_ergodic_capacity(int k, int n_rx, double snr_db, std::size_t n_trials,
                                              std::uint64_t master_seed, unsigned workers = 1) {
    if (k < 1) throw ConfigError("k", "must be positive");
    if (n_rx < 1) throw ConfigError("n_rx", "must be positive");
    if (n_trials < 1) throw ConfigError("n_trials", "must be positive");
    const double gain = std::pow(10.0, snr_db / 10.0) / k;
    const auto terms = parallel_map<double>(n_trials, workers, [&](std::size_t t) {
        Substream rng(master_seed, StreamDomain::Capacity, t);
        const CMatrix ha = sample_channel(rng, n_rx, k).h;
        CMatrix g = gain * (ha.adjoint() * ha);
        g.diagonal().array() += 1.0;
        const Eigen::LLT<CMatrix> llt(g);
        if (llt.info() != Eigen::Success) throw NumericalError("capacity Gram matrix is not positive definite");
        double logdet = 0.0;
        const CMatrix& l = llt.matrixL();
        for (Eigen::Index i = 0; i < l.rows(); ++i) logdet += 2.0 * std::log(l(i, i).real());
        return nats_to_bits(logdet);
    });
    const auto s = summarize(terms);
    return {s.mean, s.standard_error, n_trials};
}

} // namespace gqsm
