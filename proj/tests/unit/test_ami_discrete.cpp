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

#include <gqsm/ami_discrete.hpp>
#include <gqsm/ap_design.hpp>

#include <oracles.hpp>

#include <catch_amalgamated.hpp>

#include <random>

using namespace gqsm;
using Catch::Approx;

namespace {

SystemConfig qsm_config(double snr_db, std::size_t n_outer) {
    SystemConfig c;
    c.scheme = Scheme::QSM;
    c.n_tx = 4;
    c.n_rx = 4;
    c.k = 1;
    c.q = 16;
    c.snr_db = snr_db;
    c.n_outer = n_outer;
    return c;
}

ChannelSource unit_gain() {
    return [](Substream&) { return CMatrix::Identity(1, 1); };
}

} // namespace

TEST_CASE("psk constellations", "[ami_discrete]") {
    const auto q = psk_constellation(4);
    REQUIRE(q.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(std::abs(q[i]) == Approx(1.0));
        const double turn = std::arg(q[(i + 1) % 4] / q[i]);
        CHECK(std::abs(turn) == Approx(kPi / 2));
    }
    const auto b = psk_constellation(2);
    CHECK(std::abs(b[0] + b[1]) < 1e-15);
    double p = 0.0;
    for (const auto& z : psk_constellation(8)) p += std::norm(z);
    CHECK(p / 8 == Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(psk_constellation(1), ConfigError);
}

TEST_CASE("codebook sizes, rates and power", "[ami_discrete]") {
    const auto cfg = qsm_config(10, 10);
    const Codebook cb = build_codebook(cfg, full_ap_set(Scheme::QSM, 4, 1), psk_constellation(4));
    CHECK(cb.size() == 64);
    CHECK(cb.rate_bits == 6.0);
    CHECK(std::abs(cb.average_power() - cfg.sigma_s2) <= 1e-12);

    SystemConfig g;
    g.scheme = Scheme::GQSM;
    g.n_tx = 4;
    g.n_rx = 4;
    g.k = 2;
    g.q = 36;
    g.sigma_s2 = 3.0;
    const Codebook big = build_codebook(g, full_ap_set(Scheme::GQSM, 4, 2), psk_constellation(4));
    CHECK(big.size() == 576);
    CHECK(big.rate_bits == Approx(std::log2(576.0)));
    CHECK(std::abs(big.average_power() - 3.0) <= 1e-12);

    SystemConfig one;
    one.scheme = Scheme::SM;
    one.n_tx = 1;
    one.n_rx = 1;
    one.k = 1;
    one.q = 1;
    const Codebook two = build_codebook(one, full_ap_set(Scheme::SM, 1, 1), psk_constellation(2));
    CHECK(two.size() == 2);
    CHECK(two.rate_bits == 1.0);
}

TEST_CASE("degenerate codebooks are rejected", "[ami_discrete]") {
    // BPSK offset by pi/2 is purely imaginary, so QSM patterns that differ
    // only in the real part collide.
    SystemConfig c;
    c.scheme = Scheme::QSM;
    c.n_tx = 2;
    c.n_rx = 2;
    c.k = 1;
    c.q = 4;
    CHECK_THROWS_AS(build_codebook(c, full_ap_set(Scheme::QSM, 2, 1), psk_constellation(2)), DuplicateCodeword);
    CVector a(1), b(1);
    a << Complex(1, 0);
    b << Complex(1, 0);
    CHECK_THROWS_AS(make_codebook({a, b}), DuplicateCodeword);
}

TEST_CASE("discrete AMI at very low SNR vanishes", "[ami_discrete]") {
    const auto cfg = qsm_config(-40, 400);
    const Codebook cb = build_codebook(cfg, full_ap_set(Scheme::QSM, 4, 1), psk_constellation(4));
    const auto e = ami_discrete(cfg, cb);
    CHECK(e.ami_bits <= 0.02);
    CHECK(e.ami_bits >= 0.0);
}

TEST_CASE("discrete AMI saturates at the rate", "[ami_discrete]") {
    const auto cfg = qsm_config(30, 400);
    const Codebook cb = build_codebook(cfg, full_ap_set(Scheme::QSM, 4, 1), psk_constellation(4));
    const auto e = ami_discrete(cfg, cb);
    CHECK(std::abs(e.ami_bits - 6.0) <= 0.02);
}

TEST_CASE("binary input with unit gain matches the AWGN oracle", "[ami_discrete]") {
    CVector p(1), m(1);
    p << Complex(1, 0);
    m << Complex(-1, 0);
    const Codebook cb = make_codebook({p, m}, 1.0);
    for (double snr : {-5.0, 0.0, 3.0, 6.0}) {
        const double n2 = std::pow(10.0, -snr / 10.0);
        const auto e = ami_discrete(cb, n2, 40000, 5, unit_gain());
        const double ref = oracle::binary_awgn_mi(1.0, n2);
        CAPTURE(snr, e.ami_bits, e.std_error_bits, ref);
        CHECK(std::abs(e.unclamped_bits - ref) <= 4.0 * e.std_error_bits + 1e-3);
    }
    const auto high = ami_discrete(cb, std::pow(10.0, -2.0), 2000, 5, unit_gain());
    CHECK(high.ami_bits == Approx(1.0).margin(1e-6));
}

TEST_CASE("discrete AMI bounds, monotonicity and permutation invariance", "[ami_discrete]") {
    const auto base = qsm_config(0, 300);
    const APSet set = full_ap_set(Scheme::QSM, 4, 1);
    const Codebook cb = build_codebook(base, set, psk_constellation(4));
    double prev = -1.0, prev_se = 0.0;
    for (double snr : {-10.0, 0.0, 10.0, 20.0}) {
        auto cfg = base;
        cfg.snr_db = snr;
        const auto e = ami_discrete(cfg, cb);
        CHECK(e.ami_bits >= 0.0);
        CHECK(e.ami_bits <= cb.rate_bits);
        CHECK(e.unclamped_bits <= cb.rate_bits + 3 * e.std_error_bits);
        CHECK(e.ami_bits >= prev - 3.0 * std::hypot(e.std_error_bits, prev_se));
        prev = e.ami_bits;
        prev_se = e.std_error_bits;
    }

    auto words = cb.codewords;
    std::mt19937 shuffle_rng(3);
    std::shuffle(words.begin(), words.end(), shuffle_rng);
    const Codebook shuffled = make_codebook(words, base.sigma_s2);
    auto cfg = base;
    cfg.snr_db = 5;
    CHECK(ami_discrete(cfg, cb).ami_bits == ami_discrete(cfg, shuffled).ami_bits);
}

TEST_CASE("discrete AMI does not depend on worker count", "[ami_discrete]") {
    auto cfg = qsm_config(8, 200);
    const Codebook cb = build_codebook(cfg, full_ap_set(Scheme::QSM, 4, 1), psk_constellation(4));
    const auto one = ami_discrete(cfg, cb, 1);
    const auto three = ami_discrete(cfg, cb, 3);
    CHECK(one.ami_bits == three.ami_bits);
    CHECK(one.std_error_bits == three.std_error_bits);
}
