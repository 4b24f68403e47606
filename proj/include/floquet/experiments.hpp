// SPDX-License-Identifier: Apache-2.0
//
// floquet-ris: time-Floquet RIS channel modelling and ambiguity-aligned estimation
// Copyright (C) 2026 The floquet-ris authors
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

#include <optional>
#include <string>
#include <vector>

#include "floquet/evaluation.hpp"
#include "floquet/io.hpp"

namespace floquet
{

// Shared settings of the experiment drivers. Seeds are split from `seed` as follows:
//   scenario of replicate r:  derive_seed(seed, "scenario/<r>")
//   everything else:          derive_seed(scenario seed, "<purpose>/<cell key>")
// so each cell's content is independent of which other cells run and in which order.
// Rows are written in cell-key order: replicate, then the config lists in declaration order.
struct ExperimentConfig
{
    ScenarioConfig scenario;
    std::uint64_t seed = 0;
    std::size_t replicates = 1;

    std::vector<std::size_t> k_list{30};
    std::vector<std::optional<double>> snr_db_list{std::nullopt}; // empty optional: noiseless
    std::vector<MeasurementMode> modes{MeasurementMode::m3};
    std::vector<bool> mc_flags{true, false};
    std::size_t q = 3; // campaign / calibration Q

    // Proxies: "surrogate" (gauge-disguised truth) or "step1" (static fit).
    std::string proxy_source = "surrogate";
    double spread = 0.3;
    std::size_t step1_k = 0; // 0: automatic
    OptimizerConfig optimizer{400, 3e-2, 1e-4, 0.9, 0.999, 1e-8, true, 0.0, 2e-2, 0};
    std::size_t eval_patterns = kEvaluationPatterns;

    // fig4 / table1
    std::vector<std::size_t> q_eval_list{1, 2, 3, 4, 5};
    std::size_t k = 100;
    MeasurementMode mode = MeasurementMode::m3;
    std::optional<double> snr_db;

    // table1
    std::vector<std::string> models{"trunc-gt", "aligned", "unaligned"};
    std::size_t tx = 0;
    std::size_t rx = 0;
    int target_harmonic = 1;
    std::size_t restarts = 4;
};

ExperimentConfig experiment_config_from_json(const io::Json &j);
io::Json to_json(const ExperimentConfig &c);

struct CsvTable
{
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string to_csv() const;
};

struct ExperimentOutput
{
    CsvTable table;
    io::Json summary; // echo of the configuration plus aggregate statistics
};

// zeta vs K / SNR / mode / MC flag; one row per cell.
ExperimentOutput experiment_fig3(const ExperimentConfig &config, Execution exec = Execution::parallel);
// Align once at config.q, evaluate zeta at each Q in q_eval_list.
ExperimentOutput experiment_fig4(const ExperimentConfig &config, Execution exec = Execution::parallel);
// Coordinate-ascent harmonic gain per (model, MC flag, Q_eval).
ExperimentOutput experiment_table1(const ExperimentConfig &config, Execution exec = Execution::parallel);

// Pieces shared with the CLI.
std::uint64_t replicate_seed(std::uint64_t master, std::size_t replicate);
std::string format_number(double v);
std::string snr_label(const std::optional<double> &snr_db);

// Proxies for one scenario per config.proxy_source.
ProxySet make_proxies(const Scenario &scenario, const ExperimentConfig &config, bool mc_aware, std::uint64_t seed);

// Default Step-1 campaign size: 20 x unknowns / (N_R N_T).
std::size_t default_step1_k(const ScenarioConfig &c, bool mc_aware);

// Full ground truth truncated to `grid` on `count` unseen patterns.
struct TruthSample
{
    std::vector<Eigen::MatrixXi> states;
    std::vector<FloquetChannel> channels;
};
TruthSample truth_sample(const Scenario &scenario, const HarmonicGrid &grid, std::size_t q, std::size_t count,
                         std::uint64_t seed, Execution exec = Execution::parallel);

// zeta of a model on the grid of `truth`.
ZetaReport zeta_against_truth(const TruthSample &truth, const ChannelModel &model, MeasurementMode mode,
                              Execution exec = Execution::parallel);
ZetaReport zeta_against_truth(const Scenario &scenario, const ChannelModel &model, MeasurementMode mode,
                              std::size_t q, std::size_t count, std::uint64_t seed,
                              Execution exec = Execution::parallel);

} // namespace floquet
