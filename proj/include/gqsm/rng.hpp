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

#include <array>
#include <cstdint>
#include <limits>

namespace gqsm {

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Domains keep substreams of different consumers apart even when they share
/// a realization index.
enum class StreamDomain : std::uint64_t {
    Outer = 1,
    InnerMonteCarlo = 2,
    Capacity = 3,
    ErrorModel = 4,
    Discrete = 5,
    Test = 99,
};

/// Counter-based random substream.
///
/// The generator state is a pure function of (master seed, domain, index,
/// subindex), so realization i always sees the same numbers no matter which
/// worker draws it or in which order. The engine is xoshiro256** and models
/// UniformRandomBitGenerator, so the <random> distributions apply.
class Substream {
public:
    using result_type = std::uint64_t;

    Substream(std::uint64_t master_seed, StreamDomain domain, std::uint64_t index,
              std::uint64_t subindex = 0) noexcept {
        std::uint64_t key = mix64(master_seed);
        key = mix64(key ^ static_cast<std::uint64_t>(domain));
        key = mix64(key ^ index);
        key = mix64(key ^ (subindex * 0xd1b54a32d192ed03ULL));
        for (auto& word : state_) {
            key += 0x9e3779b97f4a7c15ULL;
            word = mix64(key);
        }
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_{};
};

} // namespace gqsm
