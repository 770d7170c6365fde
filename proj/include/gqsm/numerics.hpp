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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

namespace gqsm {

/// Natural-log of sum(exp(values)) with max subtraction. Returns -inf for an
/// empty range or when every value is -inf.
inline double log_sum_exp(std::span<const double> values) {
    if (values.empty()) return -std::numeric_limits<double>::infinity();
    const double peak = *std::max_element(values.begin(), values.end());
    if (!std::isfinite(peak)) return peak;
    double acc = 0.0;
    for (double v : values) acc += std::exp(v - peak);
    return peak + std::log(acc);
}

/// Like log_sum_exp, but the terms are accumulated in ascending order so the
/// result is bit-identical under any permutation of the input. Sorts in place.
inline double log_sum_exp_sorted(std::span<double> values) {
    std::sort(values.begin(), values.end());
    return log_sum_exp(values);
}

/// Sum accumulated in ascending order; permutation invariant. Sorts in place.
inline double sorted_sum(std::span<double> values) {
    std::sort(values.begin(), values.end());
    double acc = 0.0;
    for (double v : values) acc += v;
    return acc;
}

/// Mean and standard error of a sample, accumulated in index order.
struct SampleSummary {
    double mean = 0.0;
    double standard_error = 0.0;
    std::size_t count = 0;
};

inline SampleSummary summarize(std::span<const double> values) {
    SampleSummary out;
    out.count = values.size();
    if (values.empty()) return out;
    double sum = 0.0;
    for (double v : values) sum += v;
    out.mean = sum / static_cast<double>(values.size());
    if (values.size() < 2) return out;
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    const double var = ss / static_cast<double>(values.size() - 1);
    out.standard_error = std::sqrt(var / static_cast<double>(values.size()));
    return out;
}

inline constexpr double kLn2 = 0.693147180559945309417232121458176568;
inline constexpr double kPi = 3.14159265358979323846264338327950288;

inline double nats_to_bits(double nats) noexcept { return nats / kLn2; }

} // namespace gqsm
