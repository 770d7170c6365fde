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

// gqsm: command-line front end.
//
// Exit codes: 0 success, 2 configuration or input error, 3 numerical
// failure, 4 I/O error.

#include <gqsm/gqsm.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace {

using namespace gqsm;
using namespace gqsm::harness;

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

struct Globals {
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> workers;
    std::optional<std::string> out;
    std::optional<std::string> config;
};

/// Subcommand flags that map one-to-one onto configuration keys.
struct KeyFlags {
    std::vector<std::pair<std::string, std::string>> values; // (key, value) in registration order
    std::vector<std::string> sets;                           // raw `key=value` from --set

    void add(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help,
             const std::string& prefix = "") {
        values.emplace_back(key, "");
        const std::size_t slot = values.size() - 1;
        app->add_option_function<std::string>(
            flag, [this, slot, prefix](const std::string& v) { values[slot].second = prefix + v; }, help);
    }

    void apply(SweepSpec& spec) const {
        for (const auto& [key, value] : values)
            if (!value.empty()) apply_config_key(spec, key, value);
        for (const auto& kv : sets) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw ConfigError("set", "expected key=value, got '" + kv + "'");
            const std::string key = trim(kv.substr(0, eq));
            if (!is_config_key(key)) throw ConfigError(key, "unknown key");
            apply_config_key(spec, key, trim(kv.substr(eq + 1)));
        }
    }
};

void add_system_flags(CLI::App* app, KeyFlags& flags) {
    flags.add(app, "--scheme", "scheme", "SM | GSM | QSM | GQSM");
    flags.add(app, "--n-tx,--ntx", "n_tx", "transmit antennas");
    flags.add(app, "--n-rx,--nrx", "n_rx", "receive antennas");
    flags.add(app, "-k,--k", "k", "symbols per channel use");
    flags.add(app, "--q", "q", "number of activation patterns");
    flags.add(app, "--snr", "snr", "SNR points in dB: a:step:b or a,b,c");
    flags.add(app, "--n-outer", "n_outer", "outer realizations");
    flags.add(app, "--n-inner", "n_inner", "inner Monte Carlo samples");
    flags.add(app, "--ap", "ap", "pattern sources: full, comb, equiprob, ilp, file:<path>");
    flags.add(app, "--q-part,--qpart", "q_part", "single-part patterns kept by a design");
    flags.add(app, "--ap-file", "ap", "pattern file (same as --ap file:<path>)", "file:");
    app->add_option("--set", flags.sets, "any configuration key as key=value (repeatable)");
}

/// Config file, then subcommand flags, then the global overrides.
SweepSpec build_spec(const Globals& g, const KeyFlags& flags, SweepSpec spec = {}) {
    if (g.config) apply_config_text(spec, read_text(*g.config));
    flags.apply(spec);
    if (g.seed) spec.config.master_seed = *g.seed;
    if (g.workers) spec.parallel_workers = *g.workers;
    if (g.out) spec.outputs = {*g.out};
    return spec;
}

void write_or_print(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        return;
    }
    write_text(path, text);
    std::cerr << "wrote " << path << "\n";
}

void write_outputs(const SweepSpec& spec, const std::string& text) {
    for (const auto& path : spec.outputs) write_or_print(path, text);
}

// ---------------------------------------------------------------- ami-continuous / ami-discrete

int run_ami_continuous(const Globals& g, const KeyFlags& flags) {
    SweepSpec spec = build_spec(g, flags);
    finalize(spec);
    std::vector<ResultRow> rows;
    for (const auto& src : spec.ap_sources) {
        const APSet set = resolve_ap_set(spec, src);
        for (double snr : spec.snr_points) {
            SystemConfig cfg = spec.config;
            cfg.snr_db = snr;
            const auto e = ami_continuous(cfg, set, spec.density, spec.parallel_workers);
            ResultRow r;
            r.experiment = "ami-continuous";
            r.scheme = to_string(cfg.scheme);
            r.design_method = src.label();
            r.snr_db = snr;
            r.i_s = e.i_s_bits;
            r.i_a = e.i_a_bits;
            r.i_total = e.i_total_bits;
            r.std_error = e.std_error_bits;
            r.n_outer = e.n_outer;
            r.n_inner = e.n_inner;
            r.density_method = to_string(e.density_method);
            r.seed = cfg.master_seed;
            rows.push_back(r);
        }
    }
    write_outputs(spec, to_csv(rows));
    return 0;
}

int run_ami_discrete(const Globals& g, const KeyFlags& flags) {
    SweepSpec spec = build_spec(g, flags);
    finalize(spec);
    const auto constellation = psk_constellation(spec.config.constellation_order);
    std::vector<ResultRow> rows;
    for (const auto& src : spec.ap_sources) {
        const APSet set = resolve_ap_set(spec, src);
        const Codebook cb = build_codebook(spec.config, set, constellation);
        for (double snr : spec.snr_points) {
            SystemConfig cfg = spec.config;
            cfg.snr_db = snr;
            const auto d = ami_discrete(cfg, cb, spec.parallel_workers);
            ResultRow r;
            r.experiment = "ami-discrete";
            r.scheme = to_string(cfg.scheme);
            r.design_method = src.label();
            r.snr_db = snr;
            r.i_s = d.ami_bits;
            r.i_total = d.ami_bits;
            r.std_error = d.std_error_bits;
            r.n_outer = d.n_outer;
            r.density_method = "discrete";
            r.seed = cfg.master_seed;
            rows.push_back(r);
        }
    }
    write_outputs(spec, to_csv(rows));
    return 0;
}

// ---------------------------------------------------------------- ap-design

std::string join_counts(const std::vector<int>& counts) {
    std::string s;
    for (std::size_t i = 0; i < counts.size(); ++i) s += (i ? " " : "") + std::to_string(counts[i]);
    return s;
}

int run_ap_design(const Globals& g, const KeyFlags& flags, const std::string& method_text) {
    SweepSpec spec = build_spec(g, flags);
    const auto& c = spec.config;
    const DesignMethod method = parse_design_method(method_text);
    if (method == DesignMethod::Explicit) throw ConfigError("method", "explicit sets come from files");
    if (c.k < 1 || c.k > c.n_tx) throw ConfigError("k", "must satisfy 1 <= k <= n_tx");
    const std::uint64_t q_part = spec.q_part.value_or(binomial(c.n_tx, c.k));

    std::ostringstream header;
    header << "# scheme=" << to_string(c.scheme) << " method=" << to_string(method) << " n_tx=" << c.n_tx
           << " k=" << c.k << " q_part=" << q_part << "\n";
    std::vector<PartPattern> parts;
    if (method == DesignMethod::ILP) {
        const auto res = ilp_design(c.n_tx, c.k, q_part, spec.ilp_budget_s);
        parts = res.patterns;
        header << "# optimal=" << (res.optimal ? "yes" : "no") << " nodes=" << res.nodes << "\n";
    } else {
        parts = design_single_part(method, c.n_tx, c.k, q_part);
    }
    const auto stats = activation_stats(parts);
    header << "# activation counts: " << join_counts(stats.counts) << " spread=" << stats.spread << "\n";
    const APSet set = shares_pattern(c.scheme) ? shared_ap_set(parts, method) : joint_ap_set(parts, parts, method);
    header << "# Q=" << set.size() << "\n";

    const std::string path = g.out ? *g.out : "-";
    write_or_print(path, header.str() + format_ap_set(set));
    return 0;
}

// ---------------------------------------------------------------- mc-error

int run_mc_divergence(const Globals& g, const KeyFlags& flags, const std::string& n_list,
                      const std::string& pattern_file) {
    SweepSpec spec;
    spec.config.scheme = Scheme::QSM;
    spec.config.n_tx = 2;
    spec.config.n_rx = 2;
    spec.config.k = 1;
    spec.config.n_outer = 1000;
    spec.snr_points = parse_snr_list("0:10:50");
    spec.outputs = {"-"};
    spec = build_spec(g, flags, spec);
    spec.config.q = 1;

    ActivationPattern pattern;
    if (!pattern_file.empty()) {
        pattern = read_ap_file(pattern_file, spec.config.n_tx)[0];
        spec.config.k = pattern.k();
    } else if (spec.config.n_tx == 2 && spec.config.k == 1) {
        pattern = ActivationPattern(PartPattern(2, {1}), PartPattern(2, {0}));
    } else {
        throw ConfigError("pattern", "give --pattern-file unless n_tx = 2 and k = 1");
    }
    std::vector<std::size_t> ns;
    for (const auto& part : split(n_list, ',')) ns.push_back(harness::detail::config_int<std::size_t>("n-list", trim(part)));
    if (ns.empty()) throw ConfigError("n-list", "needs at least one sample size");

    const auto rows = divergence_experiment(spec.config, pattern, ns, spec.snr_points, spec.parallel_workers);
    Table t;
    t.header = {"snr_db", "n_inner", "i_s_mc", "i_s_closed", "gap", "stderr_gap"};
    for (const auto& r : rows)
        t.rows.push_back({format_number(r.snr_db), std::to_string(r.n_inner), format_number(r.i_s_mc),
                          format_number(r.i_s_closed), format_number(r.gap), format_number(r.std_error_gap)});
    write_outputs(spec, t.to_string());
    return 0;
}

int run_mc_model(const Globals& g, const std::string& n_list, const std::string& sigma_list, std::size_t count) {
    const std::uint64_t seed = g.seed.value_or(SystemConfig{}.master_seed);
    const unsigned workers = g.workers.value_or(1);
    Table t;
    t.header = {"n", "sigma_x2", "mean_y", "stderr_y", "mean_x_min_sq", "g_n", "ratio", "violations", "count"};
    for (const auto& ns : split(n_list, ',')) {
        const auto n = harness::detail::config_int<std::size_t>("n-list", trim(ns));
        const double g_n = g_of_n(n);
        for (const auto& ss : split(sigma_list, ',')) {
            const double sigma_x = harness::detail::config_double("sigma-x", trim(ss));
            const auto s = run_error_model(n, sigma_x, count, seed, workers);
            const double sx2 = sigma_x * sigma_x;
            t.rows.push_back({std::to_string(n), format_number(sx2), format_number(s.mean_y),
                              format_number(s.std_error_y), format_number(s.mean_x_min_sq), format_number(g_n),
                              format_number(s.mean_y * kLn2 / sx2), std::to_string(s.violations),
                              std::to_string(s.count)});
        }
    }
    write_or_print(g.out.value_or("-"), t.to_string());
    return 0;
}

// ---------------------------------------------------------------- preset / plot

int run_preset_cmd(const Globals& g, const std::string& name, double scale, bool timing, const std::string& snr) {
    PresetOptions opt;
    opt.scale = scale;
    opt.timing = timing;
    if (g.seed) opt.master_seed = *g.seed;
    if (g.workers) opt.workers = *g.workers;
    if (g.out) opt.out_dir = *g.out;
    if (!snr.empty()) opt.snr_points = parse_snr_list(snr);
    for (const auto& path : run_preset(parse_preset(name), opt)) std::cout << path << "\n";
    return 0;
}

int run_plot(const Globals& g, const std::string& csv) {
    std::string out = g.out.value_or("");
    if (out.empty()) out = std::filesystem::path(csv).replace_extension(".svg").string();
    emit_plot(csv, out);
    std::cout << out << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Average mutual information of spatial and quadrature spatial modulation"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--seed", g.seed, "master seed");
    app.add_option("--workers", g.workers, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--out", g.out, "output path ('-' for stdout); a directory for `preset`");
    app.add_option("--config", g.config, "key = value configuration file");

    KeyFlags cont_flags, disc_flags, design_flags, mc_flags;

    auto* cont = app.add_subcommand("ami-continuous", "AMI of Gaussian-input index modulation over an SNR sweep");
    add_system_flags(cont, cont_flags);
    cont_flags.add(cont, "--density", "density", "closed | mc | k1");

    auto* disc = app.add_subcommand("ami-discrete", "AMI of the finite PSK codebook over an SNR sweep");
    add_system_flags(disc, disc_flags);
    disc_flags.add(disc, "--constellation-order", "constellation_order", "PSK order");

    std::string method = "comb";
    auto* design = app.add_subcommand("ap-design", "design an activation-pattern set and print it");
    design->add_option("method,--method", method, "comb | equiprob | ilp");
    design_flags.add(design, "--scheme", "scheme", "SM | GSM | QSM | GQSM");
    design_flags.add(design, "--n-tx,--ntx", "n_tx", "transmit antennas");
    design_flags.add(design, "-k,--k", "k", "active antennas per part");
    design_flags.add(design, "--q-part,--qpart", "q_part", "patterns per part");
    design_flags.add(design, "--ilp-budget", "ilp_budget", "branch-and-bound time budget in seconds");

    std::string mode = "divergence", n_list = "10,100,1000", sigma_list = "1,10,100", pattern_file;
    std::size_t count = 100000;
    auto* mc = app.add_subcommand("mc-error", "inner Monte Carlo error: true-system divergence or the Y model");
    mc->add_option("--mode", mode, "divergence | model")->check(CLI::IsMember({"divergence", "model"}));
    mc->add_option("--n-list", n_list, "inner sample sizes, comma separated");
    mc->add_option("--sigma-x", sigma_list, "model mode: sigma_x values, comma separated");
    mc->add_option("--count", count, "model mode: samples per (N, sigma_x)");
    mc->add_option("--pattern-file", pattern_file, "divergence mode: pattern file, first pattern used");
    mc_flags.add(mc, "--n-tx,--ntx", "n_tx", "transmit antennas");
    mc_flags.add(mc, "--n-rx,--nrx", "n_rx", "receive antennas");
    mc_flags.add(mc, "--snr", "snr", "SNR points in dB");
    mc_flags.add(mc, "--n-outer", "n_outer", "outer realizations");

    std::string preset_name;
    double scale = 0.01;
    bool timing = false;
    std::string preset_snr;
    auto* preset = app.add_subcommand("preset", "reproduce a figure: fig1 .. fig5");
    preset->add_option("name", preset_name, "fig1 | fig2 | fig3 | fig4 | fig5")->required();
    preset->add_option("--scale", scale, "fraction of 10^6 outer realizations");
    preset->add_flag("--timing", timing, "record wall-clock seconds (output no longer reproducible)");
    preset->add_option("--snr", preset_snr, "override the SNR grid");

    std::string csv;
    auto* plot = app.add_subcommand("plot", "render a result CSV as SVG");
    plot->add_option("csv", csv, "result CSV")->required();

    for (auto* sub : {cont, disc, design, mc, preset, plot}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*cont) return run_ami_continuous(g, cont_flags);
        if (*disc) return run_ami_discrete(g, disc_flags);
        if (*design) return run_ap_design(g, design_flags, method);
        if (*mc) {
            if (mode == "model") return run_mc_model(g, n_list, sigma_list, count);
            return run_mc_divergence(g, mc_flags, n_list, pattern_file);
        }
        if (*preset) return run_preset_cmd(g, preset_name, scale, timing, preset_snr);
        if (*plot) return run_plot(g, csv);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const gqsm::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return 0;
}
