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

// Why the inner Monte Carlo estimate of ln p(y|A,H) breaks down at high SNR.
//
// Model: Y = -log2 sum_{i=1..N} exp(-X_i^2) with X_i ~ N(0, sigma_x^2), and
// X2min = min_i X_i^2. Pulling X2min out of the sum gives
//
//     X2min / ln 2 - log2 N  <=  Y  <=  X2min / ln 2,
//
// and E[X2min] = sigma_x^2 g(N) with
//
//     g(N) = int_0^inf 2 t (1 - Phi(t))^N dt,
//
// Phi the CDF of the unit half-Gaussian. Y therefore grows linearly in
// sigma_x^2, i.e. exponentially in SNR measured in dB, for fixed N.

#include <gqsm/ami_continuous.hpp>
#include <gqsm/core_model.hpp>
#include <gqsm/parallel.hpp>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <random>
#include <vector>

namespace gqsm {

/// 1 - Phi(t) for the unit half-Gaussian, i.e. P(|Z| > t) = erfc(t / sqrt 2).
/// Uses the C library erfc, which keeps full relative accuracy in the tail.
inline double half_gaussian_survival(double t) { return std::erfc(t / std::sqrt(2.0)); }

/// g(N) = E[min of N squared standard normals], by adaptive Gauss-Kronrod
/// quadrature of the integrated-by-parts form on [0, T], where T is the
/// point beyond which (1 - Phi(t))^N < 1e-16.
inline double g_of_n(std::uint64_t n) {
    if (n < 1) throw ConfigError("n", "must be positive");
    const double nn = static_cast<double>(n);
    auto tail = [&](double t) { return std::exp(nn * std::log(half_gaussian_survival(t))); };
    double upper = 1.0;
    while (tail(upper) >= 1e-16) upper *= 2.0;
    double lo = 0.0;
    double hi = upper;
    for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (lo + hi);
        (tail(mid) >= 1e-16 ? lo : hi) = mid;
    }
    upper = hi;
    auto f = [&](double t) { return 2.0 * t * tail(t); };
    // Split at the characteristic width 1/N so the adaptive rule sees the
    // bulk of the mass near the origin for large N.
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    double total = 0.0;
    double a = 0.0;
    double b = std::min(upper, 4.0 / nn);
    while (a < upper) {
        double err = 0.0;
        total += GK::integrate(f, a, b, 15, 1e-12, &err);
        a = b;
        b = std::min(upper, 4.0 * b);
    }
    return total;
}

struct ErrorModelSample {
    double y_value = 0.0;  ///< bits
    double x_min_sq = 0.0;
    std::size_t n_samples = 0;
    double sigma_x2 = 0.0;

    double lower_bound() const { return x_min_sq / kLn2 - std::log2(static_cast<double>(n_samples)); }
    double upper_bound() const { return x_min_sq / kLn2; }
    bool sandwich_holds() const { return lower_bound() <= y_value && y_value <= upper_bound(); }
};

/// Draws X_1..X_N ~ N(0, sigma_x^2) and evaluates Y through
/// Y = X2min / ln 2 - log2 sum exp(-(X_i^2 - X2min)).
template <class Rng>
ErrorModelSample sample_error_model(std::size_t n, double sigma_x, Rng& rng) {
    if (n < 1) throw ConfigError("n", "must be positive");
    if (!(sigma_x > 0.0)) throw ConfigError("sigma_x", "must be positive");
    std::normal_distribution<double> g(0.0, sigma_x);
    std::vector<double> sq(n);
    for (auto& v : sq) {
        const double x = g(rng);
        v = x * x;
    }
    const double mn = *std::min_element(sq.begin(), sq.end());
    double acc = 0.0;
    for (double v : sq) acc += std::exp(-(v - mn));
    ErrorModelSample out;
    out.x_min_sq = mn;
    out.y_value = mn / kLn2 - std::log2(acc);
    out.n_samples = n;
    out.sigma_x2 = sigma_x * sigma_x;
    return out;
}

struct ErrorModelSummary {
    double mean_y = 0.0;
    double std_error_y = 0.0;
    double mean_x_min_sq = 0.0;
    double std_error_x_min_sq = 0.0;
    std::size_t violations = 0;
    std::size_t count = 0;
};

/// Draws `count` independent samples on keyed substreams.
inline ErrorModelSummary run_error_model(std::size_t n, double sigma_x, std::size_t count, std::uint64_t master_seed,
                                         unsigned workers = 1) {
    const auto samples = parallel_map<ErrorModelSample>(count, workers, [&](std::size_t i) {
        Substream rng(master_seed, StreamDomain::ErrorModel, i, n);
        return sample_error_model(n, sigma_x, rng);
    });
    std::vector<double> y(count), m(count);
    ErrorModelSummary out;
    out.count = count;
    for (std::size_t i = 0; i < count; ++i) {
        y[i] = samples[i].y_value;
        m[i] = samples[i].x_min_sq;
        if (!samples[i].sandwich_holds()) ++out.violations;
    }
    const auto sy = summarize(y), sm = summarize(m);
    out.mean_y = sy.mean;
    out.std_error_y = sy.standard_error;
    out.mean_x_min_sq = sm.mean;
    out.std_error_x_min_sq = sm.standard_error;
    return out;
}

// ---------------------------------------------------------------- divergence

struct DivergenceRow {
    double snr_db = 0.0;
    std::size_t n_inner = 0;
    double i_s_mc = 0.0;
    double i_s_closed = 0.0;
    double gap = 0.0;           ///< i_s_mc - i_s_closed
    double std_error_gap = 0.0; ///< paired over outer realizations
    double std_error_closed = 0.0;
};

/// I_s of a single fixed pattern computed with the inner Monte Carlo density
/// for each N in n_inner_list and with the closed form, over the same outer
/// realizations. One row per (SNR, N), SNR-major.
inline std::vector<DivergenceRow> divergence_experiment(const SystemConfig& base, const ActivationPattern& pattern,
                                                        const std::vector<std::size_t>& n_inner_list,
                                                        const std::vector<double>& snr_list, unsigned workers = 1) {
    std::vector<DivergenceRow> rows;
    for (double snr : snr_list) {
        SystemConfig cfg = base;
        cfg.snr_db = snr;
        cfg.q = 1;
        cfg.validate();
        const double v = cfg.symbol_variance();
        const double n2 = cfg.sigma_n2();
        const double noise_entropy = cfg.n_rx * std::log2(kPi * std::exp(1.0) * n2);
        const std::size_t nn = n_inner_list.size();
        const auto terms = parallel_map<std::vector<double>>(cfg.n_outer, workers, [&](std::size_t r) {
            const OuterDraw d = draw_outer(cfg, 1, r);
            const CVector y = received_signal(d.h, build_codeword(pattern, d.s), d.n);
            std::vector<double> out(nn + 1);
            out[0] = nats_to_bits(-log_density_closed(y, pattern, d.h, v, n2).value) - noise_entropy;
            for (std::size_t j = 0; j < nn; ++j) {
                Substream inner(cfg.master_seed, StreamDomain::InnerMonteCarlo, r, n_inner_list[j]);
                const double lp = log_density_mc(y, pattern, d.h, v, n2, n_inner_list[j], inner).value;
                out[j + 1] = nats_to_bits(-lp) - noise_entropy;
            }
            return out;
        });
        std::vector<double> closed(cfg.n_outer), gap(cfg.n_outer), mc(cfg.n_outer);
        for (std::size_t r = 0; r < cfg.n_outer; ++r) closed[r] = terms[r][0];
        const auto sc = summarize(closed);
        for (std::size_t j = 0; j < nn; ++j) {
            for (std::size_t r = 0; r < cfg.n_outer; ++r) {
                mc[r] = terms[r][j + 1];
                gap[r] = mc[r] - closed[r];
            }
            const auto sm = summarize(mc);
            const auto sg = summarize(gap);
            rows.push_back({snr, n_inner_list[j], sm.mean, sc.mean, sg.mean, sg.standard_error, sc.standard_error});
        }
    }
    return rows;
}

} // namespace gqsm
