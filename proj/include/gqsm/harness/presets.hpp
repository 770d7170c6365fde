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

// Experiment presets. `scale` multiplies the reference count of 10^6 outer
// realizations (scale = 0.01 gives 10^4).
//
//   fig1  (2,2,1), A_R = e_2, A_I = e_1. I_s from the inner Monte Carlo
//         density for N = 10 .. 10^7 (N <= 10^7 * scale) and from the closed
//         form. Outer count is 10^4 * scale (at least 20); the inner sums
//         dominate the cost.
//   fig2  (4,4,1,16): SM and QSM, closed-form density. Also writes
//         fig2_discrete.csv with QPSK finite-alphabet AMI.
//   fig3  (4,4,2,36): GSM (all 6 patterns) and GQSM.
//   fig4  (8,8,3,64) GQSM: combinatorial, equiprobable and ILP designs.
//   fig5  the same runs as fig4 reported as paired differences
//         ilp-comb, equiprob-comb and ilp-equiprob.

#include <gqsm/ami_continuous.hpp>
#include <gqsm/ami_discrete.hpp>
#include <gqsm/ap_design.hpp>
#include <gqsm/harness/csv.hpp>
#include <gqsm/mc_error.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

namespace gqsm::harness {

enum class Preset { Fig1, Fig2, Fig3, Fig4, Fig5 };

inline Preset parse_preset(std::string_view name) {
    if (name == "fig1") return Preset::Fig1;
    if (name == "fig2") return Preset::Fig2;
    if (name == "fig3") return Preset::Fig3;
    if (name == "fig4") return Preset::Fig4;
    if (name == "fig5") return Preset::Fig5;
    throw ConfigError("preset", "unknown preset '" + std::string(name) + "' (expected fig1..fig5)");
}

inline std::string_view to_string(Preset p) {
    switch (p) {
    case Preset::Fig1: return "fig1";
    case Preset::Fig2: return "fig2";
    case Preset::Fig3: return "fig3";
    case Preset::Fig4: return "fig4";
    case Preset::Fig5: return "fig5";
    }
    return "?";
}

struct PresetOptions {
    double scale = 0.01;
    std::uint64_t master_seed = SystemConfig{}.master_seed;
    unsigned workers = 1;
    std::string out_dir = ".";
    /// Record wall-clock seconds per row. Off by default so that output files
    /// depend only on (preset, scale, seed).
    bool timing = false;
    /// Overrides the preset's SNR grid when nonempty.
    std::vector<double> snr_points;
};

struct PresetFile {
    std::string path;
    std::vector<ResultRow> rows;
};

namespace detail {

inline std::size_t scaled(double base, double scale, std::size_t floor_value) {
    const auto n = static_cast<std::size_t>(std::llround(base * scale));
    return std::max(n, floor_value);
}

class Stopwatch {
public:
    explicit Stopwatch(bool on) : on_(on), start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        if (!on_) return 0.0;
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    bool on_;
    std::chrono::steady_clock::time_point start_;
};

inline ResultRow ami_row(std::string_view experiment, const SystemConfig& cfg, std::string_view design,
                         const AmiEstimate& e, double seconds) {
    ResultRow r;
    r.experiment = experiment;
    r.scheme = to_string(cfg.scheme);
    r.design_method = design;
    r.snr_db = cfg.snr_db;
    r.i_s = e.i_s_bits;
    r.i_a = e.i_a_bits;
    r.i_total = e.i_total_bits;
    r.std_error = e.std_error_bits;
    r.n_outer = e.n_outer;
    r.n_inner = e.n_inner;
    r.density_method = to_string(e.density_method);
    r.wall_time_s = seconds;
    r.seed = cfg.master_seed;
    return r;
}

inline std::vector<double> grid_or(const PresetOptions& opt, std::vector<double> fallback) {
    return opt.snr_points.empty() ? fallback : opt.snr_points;
}

/// The fixed pattern pair of the two-antenna divergence experiment.
inline ActivationPattern fig1_pattern() { return {PartPattern(2, {1}), PartPattern(2, {0})}; }

inline std::vector<PresetFile> run_fig1(const PresetOptions& opt) {
    SystemConfig base;
    base.scheme = Scheme::QSM;
    base.n_tx = 2;
    base.n_rx = 2;
    base.k = 1;
    base.q = 1;
    base.master_seed = opt.master_seed;
    base.n_outer = scaled(1e4, opt.scale, 20);
    std::vector<std::size_t> ns;
    for (std::size_t n = 10; n <= 10'000'000; n *= 10)
        if (static_cast<double>(n) <= 1e7 * opt.scale || n == 10) ns.push_back(n);
    const auto snrs = grid_or(opt, {0, 5, 10, 15, 20, 25, 30, 35, 40, 45, 50});

    PresetFile file{(std::filesystem::path(opt.out_dir) / "fig1.csv").string(), {}};
    for (double snr : snrs) {
        const Stopwatch clock(opt.timing);
        const auto rows = divergence_experiment(base, fig1_pattern(), ns, {snr}, opt.workers);
        const double seconds = clock.seconds();
        auto emit = [&](double value, double se, std::size_t n_inner, std::string_view density) {
            ResultRow r;
            r.experiment = "fig1";
            r.scheme = to_string(base.scheme);
            r.design_method = to_string(DesignMethod::Explicit);
            r.snr_db = snr;
            r.i_s = value;
            r.i_total = value;
            r.std_error = se;
            r.n_outer = base.n_outer;
            r.n_inner = n_inner;
            r.density_method = density;
            r.wall_time_s = seconds;
            r.seed = base.master_seed;
            file.rows.push_back(r);
        };
        emit(rows.front().i_s_closed, rows.front().std_error_closed, 0, to_string(DensityMethod::ClosedForm));
        // The standard error of an MC row is that of its paired gap to the
        // closed form, which is the quantity the figure is about.
        for (const auto& row : rows)
            emit(row.i_s_mc, row.std_error_gap, row.n_inner, to_string(DensityMethod::InnerMC));
    }
    return {file};
}

struct Curve {
    SystemConfig cfg;
    APSet set;
    std::string design;
};

inline std::vector<PresetFile> run_fig2(const PresetOptions& opt) {
    const auto snrs = grid_or(opt, {0, 5, 10, 15, 20, 25, 30, 35, 40});
    std::vector<Curve> curves;
    for (Scheme s : {Scheme::SM, Scheme::QSM}) {
        SystemConfig cfg;
        cfg.scheme = s;
        cfg.n_tx = 4;
        cfg.n_rx = 4;
        cfg.k = 1;
        cfg.master_seed = opt.master_seed;
        cfg.n_outer = scaled(1e6, opt.scale, 2);
        APSet set = full_ap_set(s, 4, 1);
        cfg.q = set.size();
        curves.push_back({cfg, std::move(set), "full"});
    }
    PresetFile cont{(std::filesystem::path(opt.out_dir) / "fig2.csv").string(), {}};
    PresetFile disc{(std::filesystem::path(opt.out_dir) / "fig2_discrete.csv").string(), {}};
    const auto qpsk = psk_constellation(4);
    for (const auto& c : curves) {
        for (double snr : snrs) {
            SystemConfig cfg = c.cfg;
            cfg.snr_db = snr;
            const Stopwatch clock(opt.timing);
            const auto e = ami_continuous(cfg, c.set, DensityMethod::ClosedForm, opt.workers);
            cont.rows.push_back(ami_row("fig2", cfg, c.design, e, clock.seconds()));
        }
    }
    for (const auto& c : curves) {
        // Offset QPSK keeps both symbol parts nonzero, so QSM codewords stay distinct.
        const Codebook cb = build_codebook(c.cfg, c.set, qpsk);
        for (double snr : snrs) {
            SystemConfig cfg = c.cfg;
            cfg.snr_db = snr;
            const Stopwatch clock(opt.timing);
            const auto d = ami_discrete(cfg, cb, opt.workers);
            ResultRow r;
            r.experiment = "fig2_discrete";
            r.scheme = to_string(cfg.scheme);
            r.design_method = c.design;
            r.snr_db = snr;
            r.i_s = d.ami_bits;
            r.i_a = 0.0;
            r.i_total = d.ami_bits;
            r.std_error = d.std_error_bits;
            r.n_outer = d.n_outer;
            r.n_inner = 0;
            r.density_method = "discrete";
            r.wall_time_s = clock.seconds();
            r.seed = cfg.master_seed;
            disc.rows.push_back(r);
        }
    }
    return {cont, disc};
}

inline std::vector<PresetFile> run_fig3(const PresetOptions& opt) {
    const auto snrs = grid_or(opt, {0, 5, 10, 15, 20, 25, 30, 35, 40});
    PresetFile file{(std::filesystem::path(opt.out_dir) / "fig3.csv").string(), {}};
    for (Scheme s : {Scheme::GSM, Scheme::GQSM}) {
        SystemConfig cfg;
        cfg.scheme = s;
        cfg.n_tx = 4;
        cfg.n_rx = 4;
        cfg.k = 2;
        cfg.master_seed = opt.master_seed;
        cfg.n_outer = scaled(1e6, opt.scale, 2);
        const APSet set = full_ap_set(s, 4, 2);
        cfg.q = set.size();
        for (double snr : snrs) {
            cfg.snr_db = snr;
            const Stopwatch clock(opt.timing);
            const auto e = ami_continuous(cfg, set, DensityMethod::ClosedForm, opt.workers);
            file.rows.push_back(ami_row("fig3", cfg, "full", e, clock.seconds()));
        }
    }
    return {file};
}

inline constexpr DesignMethod kFig4Designs[] = {DesignMethod::Combinatorial, DesignMethod::Equiprobable,
                                                DesignMethod::ILP};

inline SystemConfig fig4_config(const PresetOptions& opt) {
    SystemConfig cfg;
    cfg.scheme = Scheme::GQSM;
    cfg.n_tx = 8;
    cfg.n_rx = 8;
    cfg.k = 3;
    cfg.q = 64;
    cfg.master_seed = opt.master_seed;
    cfg.n_outer = scaled(1e6, opt.scale, 2);
    return cfg;
}

inline std::vector<PresetFile> run_fig45(const PresetOptions& opt, bool differences) {
    const auto snrs = grid_or(opt, {0, 5, 10, 15, 20, 25, 30});
    SystemConfig cfg = fig4_config(opt);
    std::vector<APSet> sets;
    for (DesignMethod m : kFig4Designs) sets.push_back(designed_ap_set(cfg.scheme, m, 8, 3, 8));

    const std::string name = differences ? "fig5" : "fig4";
    PresetFile file{(std::filesystem::path(opt.out_dir) / (name + ".csv")).string(), {}};
    for (double snr : snrs) {
        cfg.snr_db = snr;
        std::vector<AmiSamples> samples;
        std::vector<double> seconds;
        for (const auto& set : sets) {
            const Stopwatch clock(opt.timing);
            samples.push_back(continuous_ami_samples(cfg, set, DensityMethod::ClosedForm, opt.workers));
            seconds.push_back(clock.seconds());
        }
        if (!differences) {
            for (std::size_t i = 0; i < sets.size(); ++i) {
                const auto e = summarize_ami(samples[i], 0, DensityMethod::ClosedForm);
                file.rows.push_back(ami_row(name, cfg, to_string(kFig4Designs[i]), e, seconds[i]));
            }
            continue;
        }
        // Index pairs into kFig4Designs: (ilp, comb), (equiprob, comb), (ilp, equiprob).
        constexpr std::pair<std::size_t, std::size_t> pairs[] = {{2, 0}, {1, 0}, {2, 1}};
        for (const auto& [a, b] : pairs) {
            const auto d = paired_difference(samples[a], samples[b]);
            ResultRow r;
            r.experiment = name;
            r.scheme = to_string(cfg.scheme);
            r.design_method = std::string(to_string(kFig4Designs[a])) + "-" + std::string(to_string(kFig4Designs[b]));
            r.snr_db = snr;
            r.i_s = d.d_s_bits;
            r.i_a = d.d_a_bits;
            r.i_total = d.d_total_bits;
            r.std_error = d.std_error_bits;
            r.n_outer = cfg.n_outer;
            r.n_inner = 0;
            r.density_method = to_string(DensityMethod::ClosedForm);
            r.wall_time_s = seconds[a] + seconds[b];
            r.seed = cfg.master_seed;
            file.rows.push_back(r);
        }
    }
    return {file};
}

} // namespace detail

/// Computes a preset without touching the filesystem.
inline std::vector<PresetFile> compute_preset(Preset preset, const PresetOptions& opt) {
    if (!(opt.scale > 0.0 && opt.scale <= 1.0)) throw ConfigError("scale", "must lie in (0, 1]");
    if (opt.workers < 1) throw ConfigError("workers", "must be positive");
    switch (preset) {
    case Preset::Fig1: return detail::run_fig1(opt);
    case Preset::Fig2: return detail::run_fig2(opt);
    case Preset::Fig3: return detail::run_fig3(opt);
    case Preset::Fig4: return detail::run_fig45(opt, false);
    case Preset::Fig5: return detail::run_fig45(opt, true);
    }
    throw ConfigError("preset", "unknown preset");
}

/// Runs a preset and writes its CSV files into opt.out_dir. Returns the paths.
inline std::vector<std::string> run_preset(Preset preset, const PresetOptions& opt) {
    const auto files = compute_preset(preset, opt);
    std::error_code ec;
    std::filesystem::create_directories(opt.out_dir, ec);
    if (ec) throw IoError("cannot create '" + opt.out_dir + "': " + ec.message());
    std::vector<std::string> paths;
    for (const auto& f : files) {
        write_text(f.path, to_csv(f.rows));
        paths.push_back(f.path);
    }
    return paths;
}

} // namespace gqsm::harness
