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

// Activation-pattern design.
//
// All designs pick q_part of the C(n_tx, k) single-part patterns. The quality
// measure is the activation count of each antenna over the selected set:
// primary objective is the spread (max - min count), secondary the sum of
// squared counts (equivalently the count variance, since the total is fixed),
// tertiary the lexicographic order of the selected candidate indices.

#include <gqsm/core_model.hpp>

#include <chrono>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace gqsm {

struct ActivationStats {
    std::vector<int> counts;
    int spread = 0;
    std::vector<double> probabilities;

    std::int64_t sum_of_squares() const {
        std::int64_t s = 0;
        for (int c : counts) s += static_cast<std::int64_t>(c) * c;
        return s;
    }
};

inline ActivationStats activation_stats(std::span<const PartPattern> parts) {
    if (parts.empty()) throw ConfigError("patterns", "activation statistics need at least one pattern");
    const int n_tx = parts.front().n_tx();
    ActivationStats st;
    st.counts.assign(static_cast<std::size_t>(n_tx), 0);
    std::size_t total = 0;
    for (const auto& p : parts) {
        if (p.n_tx() != n_tx) throw DimensionMismatch("patterns span different antenna counts");
        for (int r : p.rows()) ++st.counts[static_cast<std::size_t>(r)];
        total += p.rows().size();
    }
    const auto [lo, hi] = std::minmax_element(st.counts.begin(), st.counts.end());
    st.spread = *hi - *lo;
    st.probabilities.reserve(st.counts.size());
    for (int c : st.counts) st.probabilities.push_back(static_cast<double>(c) / static_cast<double>(total));
    return st;
}

namespace detail {

inline void check_q_part(int n_tx, int k, std::uint64_t q_part, std::uint64_t cap) {
    if (n_tx < 1) throw ConfigError("n_tx", "must be positive");
    if (k < 1 || k > n_tx) throw ConfigError("k", "must satisfy 1 <= k <= n_tx");
    const std::uint64_t c = binomial(n_tx, k);
    if (c > cap) throw EnumerationOverflow("C(n_tx, k) = " + std::to_string(c) + " exceeds the enumeration cap");
    if (q_part < 1 || q_part > c)
        throw ConfigError("q_part", "must lie in 1.." + std::to_string(c));
}

} // namespace detail

/// First q_part patterns in lexicographic order.
inline std::vector<PartPattern> combinatorial_design(int n_tx, int k, std::uint64_t q_part,
                                                     std::uint64_t cap = kDefaultEnumerationCap) {
    detail::check_q_part(n_tx, k, q_part, cap);
    auto all = enumerate_single_part_aps(n_tx, k, cap);
    all.resize(static_cast<std::size_t>(q_part));
    return all;
}

/// Greedy equiprobable design: at each step add the unused candidate that
/// minimizes (spread, sum of squared counts) of the running tally, smallest
/// index on ties. Output is in selection order.
inline std::vector<PartPattern> equiprobable_design(int n_tx, int k, std::uint64_t q_part,
                                                    std::uint64_t cap = kDefaultEnumerationCap) {
    detail::check_q_part(n_tx, k, q_part, cap);
    const auto all = enumerate_single_part_aps(n_tx, k, cap);
    std::vector<int> counts(static_cast<std::size_t>(n_tx), 0);
    std::vector<bool> used(all.size(), false);
    std::vector<PartPattern> out;
    out.reserve(static_cast<std::size_t>(q_part));

    for (std::uint64_t step = 0; step < q_part; ++step) {
        std::size_t best = all.size();
        int best_spread = std::numeric_limits<int>::max();
        std::int64_t best_ss = std::numeric_limits<std::int64_t>::max();
        for (std::size_t c = 0; c < all.size(); ++c) {
            if (used[c]) continue;
            for (int r : all[c].rows()) ++counts[static_cast<std::size_t>(r)];
            const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
            const int spread = *hi - *lo;
            std::int64_t ss = 0;
            for (int v : counts) ss += static_cast<std::int64_t>(v) * v;
            for (int r : all[c].rows()) --counts[static_cast<std::size_t>(r)];
            if (spread < best_spread || (spread == best_spread && ss < best_ss)) {
                best = c;
                best_spread = spread;
                best_ss = ss;
            }
        }
        used[best] = true;
        for (int r : all[best].rows()) ++counts[static_cast<std::size_t>(r)];
        out.push_back(all[best]);
    }
    return out;
}

struct IlpDesignResult {
    std::vector<PartPattern> patterns; ///< in ascending candidate order
    std::vector<std::size_t> selected; ///< candidate indices into the lexicographic enumeration
    bool optimal = false;              ///< false if the time budget expired first
    int spread = 0;
    std::int64_t sum_of_squares = 0;
    std::uint64_t nodes = 0;
};

namespace detail {

// Exact 0-1 selection of q_part candidates by depth-first branch and bound
// with an iteratively raised threshold on (spread, sum of squares).
//
// Each pass prunes every node whose lower bound exceeds the threshold and
// records the smallest pruned value; the next pass uses that value. Children
// are explored include-first, which visits complete selections in
// lexicographic order of their index tuples, so the first leaf reached is the
// lexicographically smallest optimum. A seed selection provides the incumbent
// returned if the time budget expires.
class SpreadBranchAndBound {
public:
    using Value = std::pair<int, std::int64_t>; // (spread, sum of squares)

    SpreadBranchAndBound(const std::vector<PartPattern>& candidates, int n_tx, int q, double budget_s)
        : cand_(candidates), n_(n_tx), q_(q), k_(candidates.front().k()),
          deadline_(std::chrono::steady_clock::now() +
                    std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                        std::chrono::duration<double>(budget_s))) {
        const std::size_t m = cand_.size();
        remaining_.assign((m + 1) * static_cast<std::size_t>(n_), 0);
        for (std::size_t p = m; p-- > 0;) {
            for (int a = 0; a < n_; ++a) remaining_[p * n_ + a] = remaining_[(p + 1) * n_ + a];
            for (int r : cand_[p].rows()) ++remaining_[p * n_ + r];
        }
        counts_.assign(static_cast<std::size_t>(n_), 0);
        scratch_.assign(static_cast<std::size_t>(n_), 0);
    }

    IlpDesignResult run(std::vector<std::size_t> seed) {
        std::sort(seed.begin(), seed.end());
        best_sel_ = seed;
        best_ = evaluate(seed);
        const Bound root = bound(0, 0);
        threshold_ = {root.spread, root.ss};
        bool found = false;
        while (!timed_out_) {
            next_ = kNone;
            if (dfs(0, 0)) {
                found = true;
                break;
            }
            if (timed_out_ || next_ == kNone) break;
            threshold_ = next_;
        }
        IlpDesignResult out;
        out.optimal = found;
        out.selected = best_sel_;
        out.spread = best_.first;
        out.sum_of_squares = best_.second;
        out.nodes = nodes_;
        for (auto i : best_sel_) out.patterns.push_back(cand_[i]);
        return out;
    }

private:
    struct Bound {
        bool feasible;
        int spread;
        std::int64_t ss;
    };

    static constexpr Value kNone{std::numeric_limits<int>::max(), std::numeric_limits<std::int64_t>::max()};

    Value evaluate(const std::vector<std::size_t>& sel) const {
        std::vector<int> c(static_cast<std::size_t>(n_), 0);
        for (auto i : sel)
            for (int r : cand_[i].rows()) ++c[static_cast<std::size_t>(r)];
        return value_of(c);
    }

    static Value value_of(const std::vector<int>& c) {
        const auto [lo, hi] = std::minmax_element(c.begin(), c.end());
        std::int64_t ss = 0;
        for (int v : c) ss += static_cast<std::int64_t>(v) * v;
        return {*hi - *lo, ss};
    }

    // Lower bounds on (spread, sum of squares) over all completions of the
    // current partial selection, using only how many of the remaining
    // candidates touch each antenna.
    Bound bound(std::size_t pos, int picked) {
        const int r = q_ - picked;
        const int units = r * k_;
        int total = 0;
        int max_now = 0;
        int min_reach = std::numeric_limits<int>::max();
        int capacity = 0;
        for (int a = 0; a < n_; ++a) {
            const int c = counts_[a];
            const int avail = std::min(r, remaining_[pos * n_ + a]);
            total += c;
            max_now = std::max(max_now, c);
            min_reach = std::min(min_reach, c + avail);
            capacity += avail;
            scratch_[a] = avail;
        }
        if (capacity < units) return {false, 0, 0};
        total += units;
        const int ceil_avg = (total + n_ - 1) / n_;
        const int floor_avg = total / n_;
        const int spread = std::max(0, std::max(max_now, ceil_avg) - std::min(min_reach, floor_avg));

        // Water-filling: each unit goes to the lowest count that still has room.
        std::vector<int>& level = level_;
        level.assign(counts_.begin(), counts_.end());
        for (int u = 0; u < units; ++u) {
            int pick = -1;
            for (int a = 0; a < n_; ++a) {
                if (scratch_[a] == 0) continue;
                if (pick < 0 || level[a] < level[pick]) pick = a;
            }
            ++level[pick];
            --scratch_[pick];
        }
        std::int64_t ss = 0;
        for (int v : level) ss += static_cast<std::int64_t>(v) * v;
        return {true, spread, ss};
    }

    // True once a leaf within the threshold is reached.
    bool dfs(std::size_t pos, int picked) {
        if ((++nodes_ & 0xfff) == 0 && std::chrono::steady_clock::now() > deadline_) timed_out_ = true;
        if (timed_out_) return false;
        if (picked == q_) {
            const Value v = value_of(counts_);
            if (v <= threshold_) {
                best_ = v;
                best_sel_ = sel_;
                return true;
            }
            next_ = std::min(next_, v);
            return false;
        }
        if (cand_.size() - pos < static_cast<std::size_t>(q_ - picked)) return false;
        const Bound b = bound(pos, picked);
        if (!b.feasible) return false;
        const Value lb{b.spread, b.ss};
        if (lb > threshold_) {
            next_ = std::min(next_, lb);
            return false;
        }

        for (int r : cand_[pos].rows()) ++counts_[r];
        sel_.push_back(pos);
        const bool hit = dfs(pos + 1, picked + 1);
        sel_.pop_back();
        for (int r : cand_[pos].rows()) --counts_[r];
        if (hit) return true;

        return dfs(pos + 1, picked);
    }

    const std::vector<PartPattern>& cand_;
    int n_;
    int q_;
    int k_;
    std::chrono::steady_clock::time_point deadline_;
    std::vector<int> remaining_;
    std::vector<int> counts_;
    std::vector<int> scratch_;
    std::vector<int> level_;
    std::vector<std::size_t> sel_;
    std::vector<std::size_t> best_sel_;
    Value best_{};
    Value threshold_{};
    Value next_ = kNone;
    bool timed_out_ = false;
    std::uint64_t nodes_ = 0;
};

} // namespace detail

/// Exact minimum-spread selection of q_part patterns (0-1 program solved by
/// branch and bound). If the time budget expires, the best incumbent is
/// returned with optimal = false.
inline IlpDesignResult ilp_design(int n_tx, int k, std::uint64_t q_part, double time_budget_s = 60.0,
                                  std::uint64_t cap = kDefaultEnumerationCap) {
    detail::check_q_part(n_tx, k, q_part, cap);
    const auto all = enumerate_single_part_aps(n_tx, k, cap);
    const auto greedy = equiprobable_design(n_tx, k, q_part, cap);
    std::vector<std::size_t> seed;
    seed.reserve(greedy.size());
    for (const auto& p : greedy)
        seed.push_back(static_cast<std::size_t>(std::lower_bound(all.begin(), all.end(), p) - all.begin()));
    if (2 * k <= n_tx || k == n_tx) {
        detail::SpreadBranchAndBound bb(all, n_tx, static_cast<int>(q_part), time_budget_s);
        return bb.run(std::move(seed));
    }
    // Counts of the complementary (n_tx - k)-subsets are q - c, so spread is
    // unchanged and the sum of squares shifts by a constant. The search runs
    // on the smaller complements, kept in the original candidate order.
    std::vector<PartPattern> comp;
    comp.reserve(all.size());
    for (const auto& p : all) {
        std::vector<int> rows;
        for (int a = 0, j = 0; a < n_tx; ++a) {
            if (j < p.k() && p.rows()[static_cast<std::size_t>(j)] == a)
                ++j;
            else
                rows.push_back(a);
        }
        comp.emplace_back(n_tx, std::move(rows));
    }
    detail::SpreadBranchAndBound bb(comp, n_tx, static_cast<int>(q_part), time_budget_s);
    auto out = bb.run(std::move(seed));
    const auto q = static_cast<std::int64_t>(q_part);
    out.sum_of_squares += n_tx * q * q - 2 * q * q * (n_tx - k);
    for (std::size_t i = 0; i < out.selected.size(); ++i) out.patterns[i] = all[out.selected[i]];
    return out;
}

/// Dispatches to one of the three designs.
inline std::vector<PartPattern> design_single_part(DesignMethod method, int n_tx, int k, std::uint64_t q_part,
                                                   double time_budget_s = 60.0) {
    switch (method) {
    case DesignMethod::Combinatorial: return combinatorial_design(n_tx, k, q_part);
    case DesignMethod::Equiprobable: return equiprobable_design(n_tx, k, q_part);
    case DesignMethod::ILP: return ilp_design(n_tx, k, q_part, time_budget_s).patterns;
    case DesignMethod::Explicit: break;
    }
    throw ConfigError("method", "explicit sets are read from a pattern file");
}

inline DesignMethod parse_design_method(std::string_view text) {
    if (text == "comb" || text == "combinatorial") return DesignMethod::Combinatorial;
    if (text == "equiprob" || text == "equiprobable") return DesignMethod::Equiprobable;
    if (text == "ilp") return DesignMethod::ILP;
    if (text == "explicit") return DesignMethod::Explicit;
    throw ConfigError("method", "unknown design method '" + std::string(text) + "'");
}

/// Cartesian product real_parts x imag_parts in row-major order (real index
/// outer). A single-pattern result is valid here but not bit-mappable.
inline APSet joint_ap_set(std::span<const PartPattern> real_parts, std::span<const PartPattern> imag_parts,
                          DesignMethod method = DesignMethod::Explicit) {
    if (real_parts.empty() || imag_parts.empty()) throw ConfigError("patterns", "both parts must be nonempty");
    std::vector<ActivationPattern> joint;
    joint.reserve(real_parts.size() * imag_parts.size());
    for (const auto& r : real_parts)
        for (const auto& i : imag_parts) joint.emplace_back(r, i);
    return APSet(std::move(joint), method, {real_parts.begin(), real_parts.end()},
                 {imag_parts.begin(), imag_parts.end()});
}

/// Patterns with A_R = A_I, one per part (the GSM / SM structure).
inline APSet shared_ap_set(std::span<const PartPattern> parts, DesignMethod method = DesignMethod::Explicit) {
    if (parts.empty()) throw ConfigError("patterns", "pattern list must be nonempty");
    std::vector<ActivationPattern> joint;
    joint.reserve(parts.size());
    for (const auto& p : parts) joint.emplace_back(p, p);
    return APSet(std::move(joint), method, {parts.begin(), parts.end()}, {parts.begin(), parts.end()});
}

/// Every pattern the scheme admits: C(n_tx,k) shared patterns for SM / GSM,
/// the full C(n_tx,k)^2 product for QSM / GQSM.
inline APSet full_ap_set(Scheme scheme, int n_tx, int k) {
    const auto parts = enumerate_single_part_aps(n_tx, k);
    return shares_pattern(scheme) ? shared_ap_set(parts, DesignMethod::Combinatorial)
                                  : joint_ap_set(parts, parts, DesignMethod::Combinatorial);
}

/// Designed set for a scheme: the same single-part design is used for the
/// real and imaginary parts, combined as a product (quadrature schemes) or
/// shared (SM / GSM).
inline APSet designed_ap_set(Scheme scheme, DesignMethod method, int n_tx, int k, std::uint64_t q_part,
                             double time_budget_s = 60.0) {
    const auto parts = design_single_part(method, n_tx, k, q_part, time_budget_s);
    return shares_pattern(scheme) ? shared_ap_set(parts, method) : joint_ap_set(parts, parts, method);
}

} // namespace gqsm
