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

// Average mutual information of a finite codebook with a uniform prior:
//
//   I = log2 M - (1/M) sum_i E_{H,n}[ log2 sum_j exp(eta[i,j]) ],
//   eta[i,j] = (-||H (x_i - x_j) + n||^2 + ||n||^2) / sigma_n^2.
//
// The outer expectation is Monte Carlo over (H, n); the double sum over
// codewords is exact. M need not be a power of two.

#include <gqsm/core_model.hpp>
#include <gqsm/parallel.hpp>

#include <cmath>
#include <functional>
#include <vector>

namespace gqsm {

/// order points exp(j 2 pi (m + 1/2) / order), unit average power.
inline std::vector<Complex> psk_constellation(int order) {
    if (order < 2) throw ConfigError("constellation_order", "must be at least 2");
    std::vector<Complex> pts;
    pts.reserve(static_cast<std::size_t>(order));
    for (int m = 0; m < order; ++m) pts.push_back(std::polar(1.0, 2.0 * kPi * (m + 0.5) / order));
    return pts;
}

struct Codebook {
    std::vector<CVector> codewords;
    double rate_bits = 0.0; ///< log2 M

    std::size_t size() const noexcept { return codewords.size(); }
    Eigen::Index n_tx() const noexcept { return codewords.empty() ? 0 : codewords.front().size(); }

    double average_power() const {
        double p = 0.0;
        for (const auto& x : codewords) p += x.squaredNorm();
        return p / static_cast<double>(codewords.size());
    }
};

/// Rejects codebooks with coinciding codewords (tolerance relative to the
/// transmit power).
inline void check_distinct(const std::vector<CVector>& words, double sigma_s2) {
    const double tol = 1e-20 * sigma_s2;
    for (std::size_t i = 0; i < words.size(); ++i)
        for (std::size_t j = i + 1; j < words.size(); ++j)
            if ((words[i] - words[j]).squaredNorm() <= tol) throw DuplicateCodeword(i, j);
}

/// Wraps explicit codewords: checks distinctness and scales to average power sigma_s2.
inline Codebook make_codebook(std::vector<CVector> words, double sigma_s2 = 1.0) {
    if (words.empty()) throw ConfigError("codebook", "must be nonempty");
    Codebook cb{std::move(words), 0.0};
    const double p = cb.average_power();
    if (!(p > 0.0)) throw ConfigError("codebook", "has zero average power");
    const double scale = std::sqrt(sigma_s2 / p);
    for (auto& x : cb.codewords) x *= scale;
    check_distinct(cb.codewords, sigma_s2);
    cb.rate_bits = std::log2(static_cast<double>(cb.codewords.size()));
    return cb;
}

/// All Q * L^K codewords: patterns outer, symbol tuples inner (mixed radix,
/// first symbol most significant). Each symbol is scaled by 1/sqrt(K) before
/// the average power is normalized to sigma_s2.
inline Codebook build_codebook(const SystemConfig& cfg, const APSet& set, const std::vector<Complex>& constellation) {
    cfg.validate();
    validate_scheme(cfg, set);
    if (constellation.empty()) throw ConfigError("constellation_order", "constellation is empty");
    const auto L = constellation.size();
    std::size_t tuples = 1;
    for (int j = 0; j < cfg.k; ++j) tuples *= L;

    std::vector<CVector> words;
    words.reserve(set.size() * tuples);
    CVector s(cfg.k);
    const double amp = 1.0 / std::sqrt(static_cast<double>(cfg.k));
    for (const auto& pattern : set) {
        for (std::size_t t = 0; t < tuples; ++t) {
            std::size_t rest = t;
            for (int j = cfg.k - 1; j >= 0; --j) {
                s(j) = amp * constellation[rest % L];
                rest /= L;
            }
            words.push_back(build_codeword(pattern, s));
        }
    }
    return make_codebook(std::move(words), cfg.sigma_s2);
}

struct DiscreteAmiEstimate {
    double ami_bits = 0.0;
    double std_error_bits = 0.0;
    double unclamped_bits = 0.0;
    std::size_t m = 0;
    std::size_t n_outer = 0;
};

/// Channel source for the discrete estimator: maps a realization substream to H.
using ChannelSource = std::function<CMatrix(Substream&)>;

inline ChannelSource rayleigh_source(int n_rx, int n_tx, ChannelMode mode = ChannelMode::Rayleigh) {
    return [=](Substream& rng) { return sample_channel(rng, n_rx, n_tx, mode).h; };
}

namespace detail {

inline void apply_channel(const CMatrix& h, const CVector& x, std::vector<Complex>& out) {
    const auto rows = h.rows();
    for (Eigen::Index r = 0; r < rows; ++r) {
        Complex acc{0.0, 0.0};
        for (Eigen::Index c = 0; c < h.cols(); ++c) acc += h(r, c) * x(c);
        out[static_cast<std::size_t>(r)] = acc;
    }
}

} // namespace detail

/// Per-realization value log2 M - (1/M) sum_i log2 sum_j exp(eta[i,j]) for
/// realization `index`. One noise vector is shared by all i. Inner and outer
/// sums are reduced in sorted order, so the value does not depend on the
/// order of the codewords.
inline double discrete_ami_term(const Codebook& cb, double sigma_n2, const ChannelSource& channel,
                                std::uint64_t master_seed, std::uint64_t index) {
    Substream rng(master_seed, StreamDomain::Discrete, index);
    const CMatrix h = channel(rng);
    const auto nr = static_cast<std::size_t>(h.rows());
    const CVector noise = sample_complex_gaussian(rng, h.rows(), sigma_n2);
    const std::size_t m = cb.size();

    std::vector<Complex> hx(m * nr);
    std::vector<Complex> tmp(nr);
    for (std::size_t i = 0; i < m; ++i) {
        detail::apply_channel(h, cb.codewords[i], tmp);
        std::copy(tmp.begin(), tmp.end(), hx.begin() + static_cast<std::ptrdiff_t>(i * nr));
    }
    double noise_energy = 0.0;
    for (std::size_t r = 0; r < nr; ++r) noise_energy += std::norm(noise(static_cast<Eigen::Index>(r)));

    std::vector<double> eta(m);
    std::vector<double> per_i(m);
    for (std::size_t i = 0; i < m; ++i) {
        const Complex* xi = &hx[i * nr];
        for (std::size_t j = 0; j < m; ++j) {
            const Complex* xj = &hx[j * nr];
            double e = 0.0;
            for (std::size_t r = 0; r < nr; ++r) e += std::norm(xi[r] - xj[r] + noise(static_cast<Eigen::Index>(r)));
            eta[j] = (-e + noise_energy) / sigma_n2;
        }
        per_i[i] = log_sum_exp_sorted(eta);
    }
    return std::log2(static_cast<double>(m)) - nats_to_bits(sorted_sum(per_i)) / static_cast<double>(m);
}

/// Monte Carlo estimate over n_outer channel/noise realizations.
inline DiscreteAmiEstimate ami_discrete(const Codebook& cb, double sigma_n2, std::size_t n_outer,
                                        std::uint64_t master_seed, const ChannelSource& channel,
                                        unsigned workers = 1) {
    if (cb.size() == 0) throw ConfigError("codebook", "must be nonempty");
    if (n_outer < 1) throw ConfigError("n_outer", "must be positive");
    if (!(sigma_n2 > 0.0)) throw ConfigError("snr_db", "noise variance must be positive");
    const auto terms = parallel_map<double>(n_outer, workers, [&](std::size_t r) {
        return discrete_ami_term(cb, sigma_n2, channel, master_seed, r);
    });
    const auto s = summarize(terms);
    DiscreteAmiEstimate out;
    out.unclamped_bits = s.mean;
    out.ami_bits = std::clamp(s.mean, 0.0, cb.rate_bits);
    out.std_error_bits = s.standard_error;
    out.m = cb.size();
    out.n_outer = n_outer;
    return out;
}

/// Rayleigh-channel convenience overload driven by a SystemConfig.
inline DiscreteAmiEstimate ami_discrete(const SystemConfig& cfg, const Codebook& cb, unsigned workers = 1) {
    cfg.validate();
    if (cb.n_tx() != cfg.n_tx) throw DimensionMismatch("codebook and config differ in n_tx");
    return ami_discrete(cb, cfg.sigma_n2(), cfg.n_outer, cfg.master_seed,
                        rayleigh_source(cfg.n_rx, cfg.n_tx, cfg.channel), workers);
}

} // namespace gqsm
