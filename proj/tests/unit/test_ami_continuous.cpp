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

#include <gqsm/ami_continuous.hpp>
#include <gqsm/ap_design.hpp>

#include <oracles.hpp>

#include <catch_amalgamated.hpp>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <random>

using namespace gqsm;
using Catch::Approx;

namespace {

struct Case {
    CMatrix h;
    CVector y;
};

/// Random (H, y) with y drawn from the model for the given pattern.
Case draw_case(const ActivationPattern& a, int n_rx, double v, double n2, std::uint64_t index) {
    Substream rng(424242, StreamDomain::Test, index);
    Case c;
    c.h = sample_channel(rng, n_rx, a.n_tx()).h;
    const CVector s = sample_complex_gaussian(rng, a.k(), v);
    c.y = received_signal(c.h, build_codeword(a, s), sample_complex_gaussian(rng, n_rx, n2));
    return c;
}

const ActivationPattern kFig1(PartPattern(2, {1}), PartPattern(2, {0}));

SystemConfig make(Scheme s, int n_tx, int n_rx, int k, std::uint64_t q, double snr, std::size_t n_outer) {
    SystemConfig c;
    c.scheme = s;
    c.n_tx = n_tx;
    c.n_rx = n_rx;
    c.k = k;
    c.q = q;
    c.snr_db = snr;
    c.n_outer = n_outer;
    return c;
}

} // namespace

TEST_CASE("closed form matches 2-D quadrature", "[ami_continuous]") {
    for (double snr : {0.0, 10.0, 30.0}) {
        const double n2 = std::pow(10.0, -snr / 10.0);
        for (std::uint64_t i = 0; i < 20; ++i) {
            const Case c = draw_case(kFig1, 2, 1.0, n2, i);
            const double ref = oracle::log_density_quadrature_2d(c.y, kFig1, c.h, 1.0, n2);
            const double got = log_density_closed(c.y, kFig1, c.h, 1.0, n2).value;
            CAPTURE(snr, i, ref, got);
            CHECK(std::abs(got - ref) <= 1e-6);
        }
    }
}

TEST_CASE("closed form matches the Gaussian marginal for K up to 3", "[ami_continuous]") {
    const std::vector<ActivationPattern> patterns = {
        ActivationPattern(PartPattern(4, {2}), PartPattern(4, {2})),
        ActivationPattern(PartPattern(4, {0, 3}), PartPattern(4, {1, 2})),
        ActivationPattern(PartPattern(4, {0, 1}), PartPattern(4, {1, 0})),
        ActivationPattern(PartPattern(8, {0, 3, 5}), PartPattern(8, {3, 6, 7})),
    };
    std::uint64_t idx = 0;
    for (const auto& a : patterns)
        for (double snr : {-5.0, 10.0, 35.0})
            for (int rep = 0; rep < 10; ++rep) {
                const double n2 = std::pow(10.0, -snr / 10.0);
                const double v = 1.0 / a.k();
                const Case c = draw_case(a, 3, v, n2, 1000 + idx++);
                const double ref = oracle::log_density_marginal(c.y, a, c.h, v, n2);
                const double got = log_density_closed(c.y, a, c.h, v, n2).value;
                CAPTURE(snr, ref, got);
                CHECK(std::abs(got - ref) <= 1e-8 * std::max(1.0, std::abs(ref)));
            }
}

TEST_CASE("closed form matches 4-D Gauss-Hermite quadrature for K = 2", "[ami_continuous]") {
    const ActivationPattern a(PartPattern(4, {0, 2}), PartPattern(4, {1, 2}));
    for (std::uint64_t i = 0; i < 4; ++i) {
        const double n2 = 0.2;
        const Case c = draw_case(a, 4, 0.5, n2, 2000 + i);
        const double ref = oracle::log_density_quadrature_hermite(c.y, a, c.h, 0.5, n2, 10);
        const double got = log_density_closed(c.y, a, c.h, 0.5, n2).value;
        CAPTURE(ref, got);
        CHECK(std::abs(got - ref) <= 1e-6);
    }
}

TEST_CASE("closed form special cases", "[ami_continuous]") {
    const CMatrix zero = CMatrix::Zero(2, 2);
    CVector y(2);
    y << Complex(0.3, -0.2), Complex(1.5, 0.1);
    const double n2 = 0.4;
    const double expect = -2.0 * std::log(kPi * n2) - y.squaredNorm() / n2;
    CHECK(log_density_closed(y, kFig1, zero, 1.0, n2).value == Approx(expect).epsilon(1e-14));
    // The total-power overload divides by K.
    const ActivationPattern a(PartPattern(4, {0, 1}), PartPattern(4, {2, 3}));
    const Case c = draw_case(a, 2, 0.5, n2, 7);
    CHECK(log_density_closed(c.y, a, c.h, 1.0, n2, 2).value == log_density_closed(c.y, a, c.h, 0.5, n2).value);
    CHECK_THROWS_AS(log_density_closed(c.y, a, c.h, 1.0, n2, 3), DimensionMismatch);
    const auto d = quadratic_form(c.y, a, c.h, 0.5, n2);
    CHECK((d.p_matrix - d.p_matrix.transpose()).norm() == 0.0);
    CHECK(Eigen::SelfAdjointEigenSolver<RMatrix>(d.p_matrix).eigenvalues().minCoeff() >= 1.0 / 0.5 - 1e-12);
}

TEST_CASE("density integrates to one over y", "[ami_continuous]") {
    // N_r = 1: integrate p(y|A,H) over the complex plane.
    CMatrix h(1, 2);
    h << Complex(0.8, -0.3), Complex(-0.2, 1.1);
    const double n2 = 0.3;
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    auto outer = [&](double yr) {
        auto inner = [&](double yi) {
            CVector y(1);
            y << Complex(yr, yi);
            return std::exp(log_density_closed(y, kFig1, h, 1.0, n2).value);
        };
        return GK::integrate(inner, -12.0, 12.0, 10, 1e-10);
    };
    CHECK(GK::integrate(outer, -12.0, 12.0, 10, 1e-10) == Approx(1.0).margin(1e-3));
}

TEST_CASE("explicit K = 1 chain", "[ami_continuous]") {
    const double n2 = 0.1;
    const double v = 1.0;
    for (std::uint64_t i = 0; i < 200; ++i) {
        const Case c = draw_case(kFig1, 2, v, n2, 3000 + i);
        const double closed = log_density_closed(c.y, kFig1, c.h, v, n2).value;
        const double k1 = log_density_k1_explicit(c.y, kFig1, c.h, v, n2).value;
        CHECK(std::abs(k1 - closed) <= 1e-9 * std::max(1.0, std::abs(closed)));
    }
    // p1 uses the column selected by the real part (antenna 2 here).
    const Case c = draw_case(kFig1, 2, v, n2, 1);
    const auto k = k1_constants(c.y, c.h, 1, 0, v, n2);
    CHECK(k.p1 == Approx(v * c.h.col(1).squaredNorm() + n2));
    CHECK(k.p2 == Approx(v * c.h.col(0).squaredNorm() + n2));
    CHECK(k.p1 * k.p2 - v * v * k.alpha * k.alpha > 0.0);

    // The literal transcription is not a density: it disagrees with the
    // closed form by far more than roundoff.
    const double printed = log_density_k1_explicit(c.y, kFig1, c.h, v, n2, K1Variant::AsPrinted).value;
    CHECK(std::abs(printed - log_density_closed(c.y, kFig1, c.h, v, n2).value) > 1.0);

    // Vanishing symbol power leaves the noise-only density.
    const double tiny = 1e-12;
    const double noise_only = -2.0 * std::log(kPi * n2) - c.y.squaredNorm() / n2;
    CHECK(log_density_k1_explicit(c.y, kFig1, c.h, tiny, n2).value == Approx(noise_only).epsilon(1e-9));

    const ActivationPattern two(PartPattern(3, {0, 1}), PartPattern(3, {1, 2}));
    CHECK_THROWS_AS(log_density_k1_explicit(CVector::Zero(2), two, CMatrix::Zero(2, 3), v, n2), ConfigError);
}

TEST_CASE("inner Monte Carlo density", "[ami_continuous]") {
    const double n2 = 1.0;
    const Case c = draw_case(kFig1, 2, 1.0, n2, 11);

    // A single draw reproduces the summand exactly.
    Substream r1(5, StreamDomain::Test, 0), r2(5, StreamDomain::Test, 0);
    const auto one = log_density_mc(c.y, kFig1, c.h, 1.0, n2, 1, r1);
    std::normal_distribution<double> g(0.0, std::sqrt(0.5));
    const double sr = g(r2), si = g(r2);
    CVector x(2);
    x << Complex(0.0, si), Complex(sr, 0.0);
    const double expect = -2.0 * std::log(kPi * n2) - (c.y - c.h * x).squaredNorm() / n2;
    CHECK(one.value == Approx(expect).epsilon(1e-13));
    CHECK(std::isinf(one.std_error));

    // Low SNR: agrees with the closed form.
    const double closed = log_density_closed(c.y, kFig1, c.h, 1.0, n2).value;
    Substream r3(6, StreamDomain::Test, 0);
    const auto mc = log_density_mc(c.y, kFig1, c.h, 1.0, n2, 100000, r3);
    CHECK(std::abs(mc.value - closed) <= 3.0 * mc.std_error);

    // High SNR with few samples: the density is underestimated.
    const double hn2 = 1e-5;
    int under = 0;
    for (std::uint64_t i = 0; i < 20; ++i) {
        const Case h = draw_case(kFig1, 2, 1.0, hn2, 100 + i);
        Substream r(7, StreamDomain::Test, i);
        const double lp = log_density_mc(h.y, kFig1, h.h, 1.0, hn2, 10, r).value;
        under += lp < log_density_closed(h.y, kFig1, h.h, 1.0, hn2).value;
    }
    CHECK(under == 20);
}

TEST_CASE("AMI decomposition basics", "[ami_continuous]") {
    auto cfg = make(Scheme::QSM, 2, 2, 1, 1, 10, 500);
    const APSet one({kFig1});
    const auto e = ami_continuous(cfg, one);
    CHECK(e.i_a_bits == 0.0);
    CHECK(e.i_total_bits == e.i_s_bits);

    auto q16 = make(Scheme::QSM, 4, 4, 1, 16, 10, 500);
    const APSet set = full_ap_set(Scheme::QSM, 4, 1);
    const auto a = ami_continuous(q16, set);
    CHECK(a.i_total_bits == a.i_s_bits + a.i_a_bits);
    CHECK(a.i_a_bits >= 0.0);
    CHECK(a.i_a_bits <= 4.0 + 3 * a.std_error_a_bits);
    CHECK(a.n_outer == 500);
    CHECK(a.n_inner == 0);

    q16.q = 15;
    CHECK_THROWS_AS(ami_continuous(q16, set), ConfigError);
    q16.q = 16;
    q16.k = 2;
    CHECK_THROWS(ami_continuous(q16, set));
}

TEST_CASE("AMI evaluators agree on K = 1", "[ami_continuous]") {
    auto cfg = make(Scheme::QSM, 2, 2, 1, 4, 5, 300);
    const APSet set = full_ap_set(Scheme::QSM, 2, 1);
    const auto closed = ami_continuous(cfg, set, DensityMethod::ClosedForm);
    const auto k1 = ami_continuous(cfg, set, DensityMethod::K1Explicit);
    CHECK(std::abs(closed.i_total_bits - k1.i_total_bits) <= 1e-9);
    cfg.n_inner = 20000;
    cfg.n_outer = 100;
    const auto closed_small = ami_continuous(cfg, set, DensityMethod::ClosedForm);
    const auto mc = ami_continuous(cfg, set, DensityMethod::InnerMC);
    CHECK(mc.n_inner == 20000);
    CHECK(std::abs(mc.i_total_bits - closed_small.i_total_bits) <= 0.05);
}

TEST_CASE("AMI invariant to pattern relabeling and worker count", "[ami_continuous]") {
    auto cfg = make(Scheme::GQSM, 4, 2, 2, 4, 8, 400);
    const auto parts = combinatorial_design(4, 2, 2);
    const APSet set = joint_ap_set(parts, parts);
    std::vector<ActivationPattern> rev(set.begin(), set.end());
    std::reverse(rev.begin(), rev.end());
    const APSet reversed(rev);
    // Relabeling permutes which pattern a realization transmits, so compare
    // statistically rather than bitwise.
    const auto a = ami_continuous(cfg, set);
    const auto b = ami_continuous(cfg, reversed);
    CHECK(std::abs(a.i_s_bits - b.i_s_bits) <= 3.0 * std::hypot(a.std_error_s_bits, b.std_error_s_bits));
    const auto w1 = ami_continuous(cfg, set, DensityMethod::ClosedForm, 1);
    const auto w4 = ami_continuous(cfg, set, DensityMethod::ClosedForm, 4);
    CHECK(w1.i_total_bits == w4.i_total_bits);
    CHECK(w1.std_error_bits == w4.std_error_bits);
}

TEST_CASE("QSM over SM gain sits in I_A at high SNR", "[ami_continuous]") {
    auto qsm = make(Scheme::QSM, 4, 4, 1, 16, 30, 2000);
    auto sm = make(Scheme::SM, 4, 4, 1, 4, 30, 2000);
    const auto q = continuous_ami_samples(qsm, full_ap_set(Scheme::QSM, 4, 1), DensityMethod::ClosedForm);
    const auto s = continuous_ami_samples(sm, full_ap_set(Scheme::SM, 4, 1), DensityMethod::ClosedForm);
    const auto d = paired_difference(q, s);
    CHECK(std::abs(d.d_s_bits) < 0.1);
    CHECK(d.d_a_bits > 1.5);
}

TEST_CASE("MIMO ergodic capacity", "[ami_continuous]") {
    const auto c0 = mimo_ergodic_capacity(1, 1, 0.0, 100000, 1);
    const double ref0 = oracle::siso_capacity(1, 0.0);
    CHECK(ref0 == Approx(0.8604).margin(5e-4));
    CHECK(std::abs(c0.bits - 0.864) <= 0.01);
    CHECK(std::abs(c0.bits - ref0) <= 3.0 * c0.std_error_bits);
    for (int nr : {2, 4}) {
        const auto c = mimo_ergodic_capacity(1, nr, 10.0, 50000, 2);
        CHECK(std::abs(c.bits - oracle::siso_capacity(nr, 10.0)) <= 3.0 * c.std_error_bits);
    }
    CHECK(mimo_ergodic_capacity(2, 4, -70.0, 1000, 3).bits < 1e-5);
    double prev = -1.0;
    for (double snr : {-10.0, 0.0, 10.0, 20.0}) {
        const double cap = mimo_ergodic_capacity(2, 4, snr, 2000, 4).bits;
        CHECK(cap > prev);
        prev = cap;
    }
}
