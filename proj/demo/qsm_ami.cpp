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

// Library walk-through: AMI of QSM (4,4,1,16) with the closed-form density,
// then an ILP-designed GQSM pattern set for (8,8,3).

#include <gqsm/gqsm.hpp>

#include <cstdio>

int main() {
    using namespace gqsm;

    SystemConfig cfg;
    cfg.scheme = Scheme::QSM;
    cfg.n_tx = 4;
    cfg.n_rx = 4;
    cfg.k = 1;
    cfg.q = 16;
    cfg.n_outer = 2000;
    const APSet set = full_ap_set(cfg.scheme, cfg.n_tx, cfg.k);

    std::printf("QSM (4,4,1,16), %zu realizations\n", cfg.n_outer);
    std::printf("%8s %8s %8s %8s %8s\n", "snr_db", "I_s", "I_A", "AMI", "stderr");
    for (double snr : {0.0, 10.0, 20.0, 30.0}) {
        cfg.snr_db = snr;
        const AmiEstimate e = ami_continuous(cfg, set);
        std::printf("%8.1f %8.3f %8.3f %8.3f %8.3f\n", snr, e.i_s_bits, e.i_a_bits, e.i_total_bits, e.std_error_bits);
    }

    const IlpDesignResult ilp = ilp_design(8, 3, 8);
    const ActivationStats stats = activation_stats(ilp.patterns);
    std::printf("\nILP design for (8,8,3), 8 patterns per part: spread %d, optimal %s\n", stats.spread,
                ilp.optimal ? "yes" : "no");
    const APSet designed = joint_ap_set(ilp.patterns, ilp.patterns, DesignMethod::ILP);
    std::printf("GQSM set has Q = %zu patterns; first three:\n", designed.size());
    const std::string text = format_ap_set(designed);
    std::size_t pos = 0;
    for (int line = 0; line < 3; ++line) {
        const std::size_t next = text.find('\n', pos);
        std::printf("  %s\n", text.substr(pos, next - pos).c_str());
        pos = next + 1;
    }
    return 0;
}
