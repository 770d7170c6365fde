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

// System model of generalized quadrature spatial modulation (GQSM).
//
// A codeword carries K complex symbols. The real parts are placed on the
// antennas selected by A_R and the imaginary parts on those selected by A_I:
//
//     x = A_R Re(s) + j A_I Im(s),      y = H x + n.
//
// QSM is the K = 1 case, GSM the A_R = A_I case and SM both at once.

#include <gqsm/error.hpp>
#include <gqsm/numerics.hpp>
#include <gqsm/rng.hpp>

#include <Eigen/Dense>

#include <cctype>
#include <complex>
#include <cstdint>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace gqsm {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

enum class Scheme { SM, GSM, QSM, GQSM };
enum class ChannelMode { Rayleigh, DiagonalOFDM };

/// Variance convention of each complex symbol.
///   PerSymbolPower: CN(0, sigma_s^2 / K), so E||x||^2 = sigma_s^2.
///   HalfPower:      CN(0, sigma_s^2 / 2K), kept to reproduce the alternative
///                   normalization; the transmit power is then sigma_s^2 / 2.
enum class SymbolConvention { PerSymbolPower, HalfPower };

inline std::string_view to_string(Scheme s) {
    switch (s) {
    case Scheme::SM: return "SM";
    case Scheme::GSM: return "GSM";
    case Scheme::QSM: return "QSM";
    case Scheme::GQSM: return "GQSM";
    }
    return "?";
}

inline Scheme parse_scheme(std::string_view text) {
    std::string up(text);
    for (auto& c : up) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (up == "SM") return Scheme::SM;
    if (up == "GSM") return Scheme::GSM;
    if (up == "QSM") return Scheme::QSM;
    if (up == "GQSM") return Scheme::GQSM;
    throw ConfigError("scheme", "unknown scheme '" + std::string(text) + "'");
}

/// True for the schemes whose real and imaginary parts share one pattern.
constexpr bool shares_pattern(Scheme s) noexcept { return s == Scheme::SM || s == Scheme::GSM; }

/// True for the schemes restricted to a single symbol.
constexpr bool single_symbol(Scheme s) noexcept { return s == Scheme::SM || s == Scheme::QSM; }

inline constexpr std::uint64_t kDefaultEnumerationCap = 1'000'000;

/// Binomial coefficient; throws EnumerationOverflow when it does not fit.
inline std::uint64_t binomial(int n, int k) {
    if (k < 0 || n < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) {
        const std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
        const std::uint64_t g = std::gcd(r, static_cast<std::uint64_t>(i));
        const std::uint64_t rr = r / g;
        const std::uint64_t den = static_cast<std::uint64_t>(i) / g;
        if (rr > std::numeric_limits<std::uint64_t>::max() / num)
            throw EnumerationOverflow("binomial(" + std::to_string(n) + ", " + std::to_string(k) +
                                      ") overflows 64 bits");
        r = rr * num / den;
    }
    return r;
}

inline int floor_log2(std::uint64_t v) noexcept {
    int r = -1;
    while (v) {
        v >>= 1;
        ++r;
    }
    return r;
}

constexpr bool is_power_of_two(std::uint64_t v) noexcept { return v != 0 && (v & (v - 1)) == 0; }

// ---------------------------------------------------------------- config

struct SystemConfig {
    Scheme scheme = Scheme::GQSM;
    int n_tx = 4;
    int n_rx = 4;
    int k = 1;
    std::uint64_t q = 16;
    double snr_db = 10.0;
    double sigma_s2 = 1.0;
    int constellation_order = 4;
    std::size_t n_outer = 10'000;
    std::size_t n_inner = 1'000;
    std::uint64_t master_seed = 20230830;
    ChannelMode channel = ChannelMode::Rayleigh;
    SymbolConvention symbols = SymbolConvention::PerSymbolPower;

    /// Noise variance from rho = sigma_s^2 / sigma_n^2.
    double sigma_n2() const { return sigma_s2 / std::pow(10.0, snr_db / 10.0); }

    /// Complex variance of each symbol under the selected convention.
    double symbol_variance() const {
        const double per = sigma_s2 / static_cast<double>(k);
        return symbols == SymbolConvention::PerSymbolPower ? per : per / 2.0;
    }

    /// Throws ConfigError naming the first invalid field.
    void validate() const {
        if (n_tx < 1) throw ConfigError("n_tx", "must be positive");
        if (n_rx < 1) throw ConfigError("n_rx", "must be positive");
        if (k < 1 || k > n_tx) throw ConfigError("k", "must satisfy 1 <= k <= n_tx");
        if (single_symbol(scheme) && k != 1)
            throw ConfigError("k", std::string(to_string(scheme)) + " requires k = 1");
        if (!(sigma_s2 > 0.0) || !std::isfinite(sigma_s2)) throw ConfigError("sigma_s2", "must be positive");
        if (!std::isfinite(snr_db)) throw ConfigError("snr_db", "must be finite");
        const double n2 = sigma_n2();
        if (!(n2 > 0.0) || !std::isfinite(n2)) throw ConfigError("snr_db", "noise variance is not positive");
        if (q < 1) throw ConfigError("q", "must be at least 1");
        const std::uint64_t c = binomial(n_tx, k);
        std::uint64_t q_max = 0;
        switch (scheme) {
        case Scheme::SM:
        case Scheme::GSM: q_max = c; break;
        case Scheme::QSM:
        case Scheme::GQSM:
            q_max = c > std::numeric_limits<std::uint32_t>::max() ? std::numeric_limits<std::uint64_t>::max()
                                                                   : c * c;
            break;
        }
        if (q > q_max)
            throw ConfigError("q", "exceeds the " + std::to_string(q_max) + " distinct patterns available");
        if (constellation_order < 2) throw ConfigError("constellation_order", "must be at least 2");
        if (n_outer < 1) throw ConfigError("n_outer", "must be positive");
        if (n_inner < 1) throw ConfigError("n_inner", "must be positive");
        if (channel == ChannelMode::DiagonalOFDM && n_rx != n_tx)
            throw ConfigError("n_rx", "diagonal channel requires n_rx = n_tx");
    }
};

/// Whether a Q and constellation admit a plain bit mapping:
/// 2 <= Q <= 2^floor(log2 C(n_tx,k)^2) and L a power of two.
inline bool bit_mappable(const SystemConfig& cfg) {
    const std::uint64_t c = binomial(cfg.n_tx, cfg.k);
    const int bits = floor_log2(c * c);
    return cfg.q >= 2 && cfg.q <= (std::uint64_t{1} << bits) &&
           is_power_of_two(static_cast<std::uint64_t>(cfg.constellation_order));
}

/// Bits per channel use of the bit-mapped scheme.
///
/// Without an override the classical rates are returned:
///   SM:   log2 L + floor(log2 N_t)
///   GSM:  K log2 L + floor(log2 C(N_t, K))
///   QSM:  log2 L + 2 floor(log2 N_t)
///   GQSM: K log2 L + 2 floor(log2 C(N_t, K))
/// With q_override the pattern bits become floor(log2 q).
inline int transmission_rate(Scheme scheme, int n_tx, int k, int constellation_order,
                             std::optional<std::uint64_t> q_override = std::nullopt) {
    if (n_tx < 1) throw ConfigError("n_tx", "must be positive");
    if (k < 1 || k > n_tx) throw ConfigError("k", "must satisfy 1 <= k <= n_tx");
    if (single_symbol(scheme) && k != 1)
        throw ConfigError("k", std::string(to_string(scheme)) + " requires k = 1");
    if (constellation_order < 2 || !is_power_of_two(static_cast<std::uint64_t>(constellation_order)))
        throw ConfigError("constellation_order", "must be a power of two");
    const int symbol_bits = k * floor_log2(static_cast<std::uint64_t>(constellation_order));
    if (q_override) {
        if (*q_override < 1) throw ConfigError("q", "must be at least 1");
        return symbol_bits + floor_log2(*q_override);
    }
    const int part_bits = floor_log2(binomial(n_tx, k));
    return shares_pattern(scheme) ? symbol_bits + part_bits : symbol_bits + 2 * part_bits;
}

// ---------------------------------------------------------------- patterns

/// One part (real or imaginary) of an activation pattern: an N_t x K binary
/// matrix whose column j is one-hot at antenna rows()[j]. Rows are distinct.
class PartPattern {
public:
    PartPattern() = default;

    PartPattern(int n_tx, std::vector<int> rows) : n_tx_(n_tx), rows_(std::move(rows)) {
        if (n_tx_ < 1) throw InvalidPattern("pattern needs at least one antenna");
        if (rows_.empty()) throw InvalidPattern("pattern needs at least one column");
        std::vector<bool> seen(static_cast<std::size_t>(n_tx_), false);
        for (int r : rows_) {
            if (r < 0 || r >= n_tx_)
                throw InvalidPattern("antenna index " + std::to_string(r + 1) + " outside 1.." +
                                     std::to_string(n_tx_));
            if (seen[static_cast<std::size_t>(r)])
                throw InvalidPattern("antenna " + std::to_string(r + 1) + " selected twice");
            seen[static_cast<std::size_t>(r)] = true;
        }
    }

    /// Builds from a binary matrix; every column must be one-hot.
    static PartPattern from_matrix(const Eigen::MatrixXi& a) {
        std::vector<int> rows;
        rows.reserve(static_cast<std::size_t>(a.cols()));
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            int hot = -1;
            int sum = 0;
            for (Eigen::Index i = 0; i < a.rows(); ++i) {
                const int v = a(i, j);
                if (v != 0 && v != 1) throw InvalidPattern("pattern entries must be 0 or 1");
                if (v == 1) hot = static_cast<int>(i);
                sum += v;
            }
            if (sum != 1) throw InvalidPattern("column " + std::to_string(j) + " is not one-hot");
            rows.push_back(hot);
        }
        return PartPattern(static_cast<int>(a.rows()), std::move(rows));
    }

    int n_tx() const noexcept { return n_tx_; }
    int k() const noexcept { return static_cast<int>(rows_.size()); }
    std::span<const int> rows() const noexcept { return rows_; }

    Eigen::MatrixXi matrix() const {
        Eigen::MatrixXi a = Eigen::MatrixXi::Zero(n_tx_, k());
        for (int j = 0; j < k(); ++j) a(rows_[static_cast<std::size_t>(j)], j) = 1;
        return a;
    }

    friend bool operator==(const PartPattern&, const PartPattern&) = default;
    friend auto operator<=>(const PartPattern&, const PartPattern&) = default;

private:
    int n_tx_ = 0;
    std::vector<int> rows_;
};

struct ActivationPattern {
    PartPattern real;
    PartPattern imag;

    ActivationPattern() = default;
    ActivationPattern(PartPattern r, PartPattern i) : real(std::move(r)), imag(std::move(i)) {
        if (real.n_tx() != imag.n_tx() || real.k() != imag.k())
            throw InvalidPattern("real and imaginary parts differ in shape");
    }

    int n_tx() const noexcept { return real.n_tx(); }
    int k() const noexcept { return real.k(); }

    friend bool operator==(const ActivationPattern&, const ActivationPattern&) = default;
};

enum class DesignMethod { Combinatorial, Equiprobable, ILP, Explicit };

inline std::string_view to_string(DesignMethod m) {
    switch (m) {
    case DesignMethod::Combinatorial: return "comb";
    case DesignMethod::Equiprobable: return "equiprob";
    case DesignMethod::ILP: return "ilp";
    case DesignMethod::Explicit: return "explicit";
    }
    return "?";
}

/// Ordered set of Q joint activation patterns.
class APSet {
public:
    APSet() = default;

    explicit APSet(std::vector<ActivationPattern> patterns, DesignMethod method = DesignMethod::Explicit,
                   std::vector<PartPattern> real_parts = {}, std::vector<PartPattern> imag_parts = {})
        : patterns_(std::move(patterns)), method_(method), real_parts_(std::move(real_parts)),
          imag_parts_(std::move(imag_parts)) {
        if (patterns_.empty()) throw InvalidPattern("pattern set is empty");
        const int nt = patterns_.front().n_tx();
        const int kk = patterns_.front().k();
        for (std::size_t i = 0; i < patterns_.size(); ++i) {
            if (patterns_[i].n_tx() != nt || patterns_[i].k() != kk)
                throw InvalidPattern("pattern " + std::to_string(i) + " differs in shape");
        }
        // Sort a copy of indices to detect duplicates in O(Q log Q).
        std::vector<std::size_t> order(patterns_.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        auto key = [&](std::size_t i) { return std::tie(patterns_[i].real, patterns_[i].imag); };
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
        for (std::size_t i = 1; i < order.size(); ++i) {
            if (patterns_[order[i]] == patterns_[order[i - 1]])
                throw InvalidPattern("patterns " + std::to_string(std::min(order[i], order[i - 1])) + " and " +
                                     std::to_string(std::max(order[i], order[i - 1])) + " coincide");
        }
    }

    std::size_t size() const noexcept { return patterns_.size(); }
    const ActivationPattern& operator[](std::size_t i) const { return patterns_[i]; }
    std::span<const ActivationPattern> patterns() const noexcept { return patterns_; }
    DesignMethod method() const noexcept { return method_; }
    std::span<const PartPattern> single_part_real() const noexcept { return real_parts_; }
    std::span<const PartPattern> single_part_imag() const noexcept { return imag_parts_; }
    int n_tx() const noexcept { return patterns_.empty() ? 0 : patterns_.front().n_tx(); }
    int k() const noexcept { return patterns_.empty() ? 0 : patterns_.front().k(); }

    /// At least two patterns, so the pattern index can carry bits.
    bool bit_mappable() const noexcept { return patterns_.size() >= 2; }

    auto begin() const noexcept { return patterns_.begin(); }
    auto end() const noexcept { return patterns_.end(); }

private:
    std::vector<ActivationPattern> patterns_;
    DesignMethod method_ = DesignMethod::Explicit;
    std::vector<PartPattern> real_parts_;
    std::vector<PartPattern> imag_parts_;
};

/// Every k-subset of the n_tx antennas as a single-part pattern, in
/// lexicographic order of the sorted index tuple. Column j activates the j-th
/// smallest selected antenna.
inline std::vector<PartPattern> enumerate_single_part_aps(int n_tx, int k,
                                                          std::uint64_t cap = kDefaultEnumerationCap) {
    if (n_tx < 1) throw ConfigError("n_tx", "must be positive");
    if (k < 1 || k > n_tx) throw ConfigError("k", "must satisfy 1 <= k <= n_tx");
    const std::uint64_t count = binomial(n_tx, k);
    if (count > cap)
        throw EnumerationOverflow("C(" + std::to_string(n_tx) + ", " + std::to_string(k) + ") = " +
                                  std::to_string(count) + " exceeds the enumeration cap " + std::to_string(cap));
    std::vector<PartPattern> out;
    out.reserve(static_cast<std::size_t>(count));
    std::vector<int> idx(static_cast<std::size_t>(k));
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        out.emplace_back(n_tx, idx);
        int pos = k - 1;
        while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n_tx - k + pos) --pos;
        if (pos < 0) break;
        ++idx[static_cast<std::size_t>(pos)];
        for (int j = pos + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
    return out;
}

// ---------------------------------------------------------------- signals

/// x = A_R Re(s) + j A_I Im(s).
inline CVector build_codeword(const ActivationPattern& pattern, const CVector& s) {
    if (s.size() != pattern.k())
        throw DimensionMismatch("pattern has " + std::to_string(pattern.k()) + " columns but " +
                                std::to_string(s.size()) + " symbols were given");
    CVector x = CVector::Zero(pattern.n_tx());
    const auto re = pattern.real.rows();
    const auto im = pattern.imag.rows();
    for (Eigen::Index j = 0; j < s.size(); ++j) {
        x(re[static_cast<std::size_t>(j)]) += Complex(s(j).real(), 0.0);
        x(im[static_cast<std::size_t>(j)]) += Complex(0.0, s(j).imag());
    }
    return x;
}

struct ChannelRealization {
    CMatrix h;
    ChannelMode mode = ChannelMode::Rayleigh;
};

/// i.i.d. CN(0,1) entries; the diagonal mode zeroes the off-diagonal.
template <class Rng>
ChannelRealization sample_channel(Rng& rng, int n_rx, int n_tx, ChannelMode mode = ChannelMode::Rayleigh) {
    if (n_rx < 1 || n_tx < 1) throw DimensionMismatch("channel dimensions must be positive");
    if (mode == ChannelMode::DiagonalOFDM && n_rx != n_tx)
        throw DimensionMismatch("diagonal channel must be square");
    std::normal_distribution<double> g(0.0, std::sqrt(0.5));
    ChannelRealization out{CMatrix::Zero(n_rx, n_tx), mode};
    for (int c = 0; c < n_tx; ++c) {
        for (int r = 0; r < n_rx; ++r) {
            const double re = g(rng);
            const double im = g(rng);
            if (mode == ChannelMode::Rayleigh || r == c) out.h(r, c) = Complex(re, im);
        }
    }
    return out;
}

/// Vector of i.i.d. CN(0, variance) entries.
template <class Rng>
CVector sample_complex_gaussian(Rng& rng, Eigen::Index length, double variance) {
    std::normal_distribution<double> g(0.0, std::sqrt(variance / 2.0));
    CVector v(length);
    for (Eigen::Index i = 0; i < length; ++i) {
        const double re = g(rng);
        v(i) = Complex(re, g(rng));
    }
    return v;
}

/// Continuous-input symbol vector under the configured variance convention.
template <class Rng>
CVector sample_symbols(Rng& rng, const SystemConfig& cfg) {
    return sample_complex_gaussian(rng, cfg.k, cfg.symbol_variance());
}

/// y = H x + n.
inline CVector received_signal(const CMatrix& h, const CVector& x, const CVector& n) {
    if (h.cols() != x.size()) throw DimensionMismatch("H has " + std::to_string(h.cols()) +
                                                      " columns but x has length " + std::to_string(x.size()));
    if (h.rows() != n.size()) throw DimensionMismatch("H has " + std::to_string(h.rows()) +
                                                      " rows but n has length " + std::to_string(n.size()));
    return h * x + n;
}

/// Checks an activation-pattern set against the scheme of `cfg` and returns it.
/// Throws SchemeViolation naming the first offending pattern.
inline const APSet& validate_scheme(const SystemConfig& cfg, const APSet& set) {
    if (set.size() != cfg.q)
        throw ConfigError("q", "config says " + std::to_string(cfg.q) + " patterns, the set has " +
                                   std::to_string(set.size()));
    for (std::size_t i = 0; i < set.size(); ++i) {
        const auto& p = set[i];
        if (p.n_tx() != cfg.n_tx)
            throw SchemeViolation(i, "pattern spans " + std::to_string(p.n_tx()) + " antennas, config has " +
                                         std::to_string(cfg.n_tx));
        if (p.k() != cfg.k)
            throw SchemeViolation(i, "pattern has " + std::to_string(p.k()) + " columns, config has k = " +
                                         std::to_string(cfg.k));
        if (single_symbol(cfg.scheme) && p.k() != 1)
            throw SchemeViolation(i, std::string(to_string(cfg.scheme)) + " requires k = 1");
        if (shares_pattern(cfg.scheme) && p.real != p.imag)
            throw SchemeViolation(i, std::string(to_string(cfg.scheme)) + " requires A_R = A_I");
    }
    return set;
}

// ---------------------------------------------------------------- text format
//
// One pattern per line, 1-based antenna indices in column order:
//     R:{1,2,4} I:{3,5,6}
// Blank lines and lines starting with '#' are ignored.

inline std::string format_part(const PartPattern& p) {
    std::string out = "{";
    for (std::size_t j = 0; j < p.rows().size(); ++j) {
        if (j) out += ',';
        out += std::to_string(p.rows()[j] + 1);
    }
    return out + "}";
}

inline std::string format_ap_set(const APSet& set) {
    std::string out;
    for (const auto& p : set) out += "R:" + format_part(p.real) + " I:" + format_part(p.imag) + "\n";
    return out;
}

namespace detail {

inline std::vector<int> parse_index_list(std::string_view body, std::size_t line) {
    std::vector<int> out;
    std::string token;
    auto flush = [&] {
        if (token.empty()) throw ParseError(line, "empty antenna index");
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(token, &used);
        } catch (const std::exception&) {
            throw ParseError(line, "bad antenna index '" + token + "'");
        }
        if (used != token.size() || v < 1) throw ParseError(line, "bad antenna index '" + token + "'");
        out.push_back(v - 1);
        token.clear();
    };
    for (char c : body) {
        if (c == ',') flush();
        else if (!std::isspace(static_cast<unsigned char>(c))) token += c;
    }
    flush();
    return out;
}

inline std::vector<int> parse_part(std::string_view text, char tag, std::size_t line) {
    const auto pos = text.find(std::string(1, tag) + ":{");
    if (pos == std::string_view::npos) throw ParseError(line, std::string("missing '") + tag + ":{...}'");
    const auto close = text.find('}', pos);
    if (close == std::string_view::npos) throw ParseError(line, "unterminated '{'");
    return parse_index_list(text.substr(pos + 3, close - pos - 3), line);
}

} // namespace detail

/// Parses the text pattern format. When n_tx is zero it is inferred as the
/// largest antenna index seen.
inline APSet parse_ap_set(std::string_view text, int n_tx = 0) {
    std::vector<std::pair<std::vector<int>, std::vector<int>>> raw;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string line;
    int max_index = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        auto r = detail::parse_part(line, 'R', line_no);
        auto i = detail::parse_part(line, 'I', line_no);
        if (r.size() != i.size()) throw ParseError(line_no, "real and imaginary parts differ in length");
        for (int v : r) max_index = std::max(max_index, v + 1);
        for (int v : i) max_index = std::max(max_index, v + 1);
        raw.emplace_back(std::move(r), std::move(i));
    }
    if (raw.empty()) throw ParseError(line_no, "no patterns found");
    const int nt = n_tx > 0 ? n_tx : max_index;
    std::vector<ActivationPattern> patterns;
    patterns.reserve(raw.size());
    for (auto& [r, i] : raw) patterns.emplace_back(PartPattern(nt, std::move(r)), PartPattern(nt, std::move(i)));
    return APSet(std::move(patterns), DesignMethod::Explicit);
}

inline APSet read_ap_file(const std::string& path, int n_tx = 0) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open pattern file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_ap_set(buf.str(), n_tx);
}

inline void write_ap_file(const std::string& path, const APSet& set) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write pattern file '" + path + "'");
    out << format_ap_set(set);
    if (!out) throw IoError("write to '" + path + "' failed");
}

} // namespace gqsm
