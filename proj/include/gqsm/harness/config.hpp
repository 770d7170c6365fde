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

// Sweep configuration files.
//
// One `key = value` per line, `#` starts a comment. Keys and defaults:
//
//   scheme             GQSM          SM | GSM | QSM | GQSM
//   n_tx               4
//   n_rx               4
//   k                  1
//   q                  (derived)     number of joint patterns; must match every pattern source
//   snr                0:5:40        "a:step:b" range, comma list, or a single value (dB)
//   sigma_s2           1
//   constellation_order 4            PSK order for the discrete evaluator
//   n_outer            10000
//   n_inner            1000          inner sample size of the Monte Carlo density
//   seed               20230830
//   channel            rayleigh      rayleigh | diagonal
//   symbol_convention  per_symbol    per_symbol (CN(0, sigma_s2/K)) | half (CN(0, sigma_s2/2K))
//   density            closed        closed | mc | k1
//   ap                 full          comma list of full | comb | equiprob | ilp | file:<path>
//   q_part             (all)         single-part patterns kept by comb / equiprob / ilp
//   ilp_budget         60            seconds
//   workers            1
//   out                results.csv   comma list of output paths

#include <gqsm/ami_continuous.hpp>
#include <gqsm/ap_design.hpp>
#include <gqsm/core_model.hpp>
#include <gqsm/harness/csv.hpp>

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gqsm::harness {

/// Where a sweep takes its activation patterns from.
struct ApSource {
    enum class Kind { Full, Design, File } kind = Kind::Full;
    DesignMethod method = DesignMethod::Combinatorial;
    std::string path;

    std::string label() const {
        switch (kind) {
        case Kind::Full: return "full";
        case Kind::Design: return std::string(to_string(method));
        case Kind::File: return "file";
        }
        return "?";
    }
};

struct SweepSpec {
    std::vector<double> snr_points{0, 5, 10, 15, 20, 25, 30, 35, 40};
    SystemConfig config;
    bool q_given = false;
    std::vector<ApSource> ap_sources{ApSource{}};
    std::optional<std::uint64_t> q_part;
    double ilp_budget_s = 60.0;
    DensityMethod density = DensityMethod::ClosedForm;
    std::vector<std::string> outputs{"results.csv"};
    unsigned parallel_workers = 1;
};

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

/// "a:step:b" (inclusive), "a,b,c" or "a". Values must be strictly increasing.
inline std::vector<double> parse_snr_list(std::string_view text) {
    std::vector<double> out;
    const std::string t = trim(text);
    auto num = [](const std::string& s) {
        const std::string v = trim(s);
        double d = 0.0;
        const auto r = std::from_chars(v.data(), v.data() + v.size(), d);
        if (v.empty() || r.ec != std::errc{} || r.ptr != v.data() + v.size())
            throw ConfigError("snr", "'" + v + "' is not a number");
        return d;
    };
    if (t.find(':') != std::string::npos) {
        const auto parts = split(t, ':');
        if (parts.size() != 3) throw ConfigError("snr", "range must be start:step:stop");
        const double a = num(parts[0]), step = num(parts[1]), b = num(parts[2]);
        if (!(step > 0.0)) throw ConfigError("snr", "range step must be positive");
        if (b < a) throw ConfigError("snr", "range stop is below start");
        const auto n = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9));
        for (std::size_t i = 0; i <= n; ++i) out.push_back(a + static_cast<double>(i) * step);
    } else {
        for (const auto& p : split(t, ',')) out.push_back(num(p));
    }
    if (out.empty()) throw ConfigError("snr", "no SNR points");
    for (std::size_t i = 1; i < out.size(); ++i)
        if (!(out[i] > out[i - 1])) throw ConfigError("snr", "points must be strictly increasing");
    return out;
}

inline ApSource parse_ap_source(std::string_view text) {
    const std::string t = trim(text);
    ApSource s;
    if (t == "full") return s;
    if (t.rfind("file:", 0) == 0) {
        s.kind = ApSource::Kind::File;
        s.path = trim(t.substr(5));
        if (s.path.empty()) throw ConfigError("ap", "file source needs a path");
        return s;
    }
    s.kind = ApSource::Kind::Design;
    try {
        s.method = parse_design_method(t);
    } catch (const ConfigError&) {
        throw ConfigError("ap", "unknown pattern source '" + t + "'");
    }
    if (s.method == DesignMethod::Explicit) throw ConfigError("ap", "use file:<path> for explicit patterns");
    return s;
}

/// Builds the activation-pattern set of one source for the spec's config.
inline APSet resolve_ap_set(const SweepSpec& spec, const ApSource& src) {
    const auto& c = spec.config;
    switch (src.kind) {
    case ApSource::Kind::Full: return full_ap_set(c.scheme, c.n_tx, c.k);
    case ApSource::Kind::Design: {
        const std::uint64_t qp = spec.q_part ? *spec.q_part : binomial(c.n_tx, c.k);
        return designed_ap_set(c.scheme, src.method, c.n_tx, c.k, qp, spec.ilp_budget_s);
    }
    case ApSource::Kind::File: return read_ap_file(src.path, c.n_tx);
    }
    throw ConfigError("ap", "unknown pattern source");
}

namespace detail {

template <class Int>
Int config_int(const std::string& key, const std::string& value) {
    Int v{};
    const auto r = std::from_chars(value.data(), value.data() + value.size(), v);
    if (value.empty() || r.ec != std::errc{} || r.ptr != value.data() + value.size())
        throw ConfigError(key, "'" + value + "' is not an integer");
    return v;
}

inline double config_double(const std::string& key, const std::string& value) {
    double v = 0.0;
    const auto r = std::from_chars(value.data(), value.data() + value.size(), v);
    if (value.empty() || r.ec != std::errc{} || r.ptr != value.data() + value.size())
        throw ConfigError(key, "'" + value + "' is not a number");
    return v;
}

} // namespace detail

inline const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = {
        "scheme", "n_tx",     "n_rx",   "k",           "q",          "snr",     "sigma_s2",
        "constellation_order", "n_outer", "n_inner", "seed",     "channel",    "symbol_convention",
        "density", "ap",       "q_part", "ilp_budget", "workers",    "out"};
    return keys;
}

inline bool is_config_key(std::string_view key) {
    for (const auto& k : config_keys())
        if (k == key) return true;
    return false;
}

/// Applies one key/value pair. Throws ConfigError naming the key.
inline void apply_config_key(SweepSpec& spec, const std::string& key, const std::string& value) {
    using detail::config_double;
    using detail::config_int;
    auto& c = spec.config;
    if (key == "scheme") c.scheme = parse_scheme(value);
    else if (key == "n_tx") c.n_tx = config_int<int>(key, value);
    else if (key == "n_rx") c.n_rx = config_int<int>(key, value);
    else if (key == "k") c.k = config_int<int>(key, value);
    else if (key == "q") {
        c.q = config_int<std::uint64_t>(key, value);
        spec.q_given = true;
    } else if (key == "snr") spec.snr_points = parse_snr_list(value);
    else if (key == "sigma_s2") c.sigma_s2 = config_double(key, value);
    else if (key == "constellation_order") c.constellation_order = config_int<int>(key, value);
    else if (key == "n_outer") c.n_outer = config_int<std::size_t>(key, value);
    else if (key == "n_inner") c.n_inner = config_int<std::size_t>(key, value);
    else if (key == "seed") c.master_seed = config_int<std::uint64_t>(key, value);
    else if (key == "channel") {
        if (value == "rayleigh") c.channel = ChannelMode::Rayleigh;
        else if (value == "diagonal") c.channel = ChannelMode::DiagonalOFDM;
        else throw ConfigError(key, "expected rayleigh or diagonal");
    } else if (key == "symbol_convention") {
        if (value == "per_symbol") c.symbols = SymbolConvention::PerSymbolPower;
        else if (value == "half") c.symbols = SymbolConvention::HalfPower;
        else throw ConfigError(key, "expected per_symbol or half");
    } else if (key == "density") spec.density = parse_density_method(value);
    else if (key == "ap") {
        spec.ap_sources.clear();
        for (const auto& part : split(value, ',')) spec.ap_sources.push_back(parse_ap_source(part));
    } else if (key == "q_part") spec.q_part = config_int<std::uint64_t>(key, value);
    else if (key == "ilp_budget") spec.ilp_budget_s = config_double(key, value);
    else if (key == "workers") spec.parallel_workers = config_int<unsigned>(key, value);
    else if (key == "out") {
        spec.outputs.clear();
        for (const auto& part : split(value, ',')) spec.outputs.push_back(trim(part));
    } else throw ConfigError(key, "unknown key");
}

/// Cross-field checks; derives q from the first pattern source when not given.
inline void finalize(SweepSpec& spec) {
    auto& c = spec.config;
    if (c.n_tx < 1) throw ConfigError("n_tx", "must be positive");
    if (c.k < 1 || c.k > c.n_tx) throw ConfigError("k", "must satisfy 1 <= k <= n_tx");
    if (spec.parallel_workers < 1) throw ConfigError("workers", "must be positive");
    if (spec.ap_sources.empty()) throw ConfigError("ap", "needs at least one pattern source");
    if (spec.q_part) {
        const auto cmax = binomial(c.n_tx, c.k);
        if (*spec.q_part < 1 || *spec.q_part > cmax)
            throw ConfigError("q_part", "must lie in 1.." + std::to_string(cmax));
    }
    for (const auto& src : spec.ap_sources) {
        std::uint64_t q = 0;
        if (src.kind == ApSource::Kind::File) {
            q = read_ap_file(src.path, c.n_tx).size();
        } else {
            const std::uint64_t parts = src.kind == ApSource::Kind::Full
                                            ? binomial(c.n_tx, c.k)
                                            : spec.q_part.value_or(binomial(c.n_tx, c.k));
            q = shares_pattern(c.scheme) ? parts : parts * parts;
        }
        if (!spec.q_given) {
            c.q = q;
            spec.q_given = true;
        } else if (c.q != q) {
            throw ConfigError("q", "pattern source '" + src.label() + "' yields " + std::to_string(q) +
                                       " patterns, config says " + std::to_string(c.q));
        }
    }
    if (spec.outputs.empty()) throw ConfigError("out", "needs at least one path");
    if (spec.snr_points.empty()) throw ConfigError("snr", "no SNR points");
    for (std::size_t i = 1; i < spec.snr_points.size(); ++i)
        if (!(spec.snr_points[i] > spec.snr_points[i - 1]))
            throw ConfigError("snr", "points must be strictly increasing");
    SystemConfig probe = c;
    probe.snr_db = spec.snr_points.front();
    probe.validate();
}

/// Applies every `key = value` line of text to spec, without the
/// cross-field checks of finalize(). Syntax problems raise ParseError with
/// the line number; semantic problems raise ConfigError naming the field.
inline void apply_config_text(SweepSpec& spec, std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    std::map<std::string, std::size_t> seen;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw ParseError(line_no, "expected `key = value`");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty()) throw ParseError(line_no, "empty key");
        if (auto it = seen.find(key); it != seen.end())
            throw ParseError(line_no, "`" + key + "` already set on line " + std::to_string(it->second));
        seen[key] = line_no;
        if (!is_config_key(key)) throw ParseError(line_no, "unknown key `" + key + "`");
        apply_config_key(spec, key, value);
    }
}

/// Parses the key/value format over the documented defaults and validates.
inline SweepSpec parse_config_text(std::string_view text) {
    SweepSpec spec;
    apply_config_text(spec, text);
    finalize(spec);
    return spec;
}

inline SweepSpec parse_config(const std::string& path) { return parse_config_text(read_text(path)); }

} // namespace gqsm::harness
