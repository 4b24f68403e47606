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

#include <cstdint>
#include <span>
#include <vector>

#include "floquet/estimation.hpp"

namespace floquet
{

// Channel predictor used for evaluation: proxies (delays ignored) or a ground truth restricted
// to a grid (delays kept).
class ChannelModel
{
  public:
    static ChannelModel from_proxies(const ProxySet &proxies);
    // Ground truth on `grid`; Gamma zeroed when !mc_aware. With grid == gt grid this is exact.
    static ChannelModel ground_truth(const Scenario &scenario, const HarmonicGrid &grid, bool mc_aware = true);

    const HarmonicGrid &grid() const noexcept { return grid_; }
    std::size_t n_s() const noexcept { return blocks_.front().n_s(); }
    std::size_t n_states() const noexcept { return static_cast<std::size_t>(rho_.cols()); }

    FloquetChannel predict(const Eigen::MatrixXi &states) const;
    // Entry (rx, tx) of block (h_out, 0).
    Complex entry(const Eigen::MatrixXi &states, int h_out, std::size_t rx, std::size_t tx) const;

  private:
    ChannelModel(HarmonicGrid grid, std::vector<HarmonicBlocks> blocks, CMatrix rho, std::vector<double> delays);

    HarmonicGrid grid_;
    std::vector<HarmonicBlocks> blocks_;
    CMatrix rho_;
    std::vector<double> delays_;
};

struct ZetaReport
{
    MeasurementMode mode = MeasurementMode::m3;
    std::size_t patterns = 0;
    double zeta_linear = 0.0;
    double zeta_db = 0.0;
    bool infinite = false; // zero prediction error
    std::vector<double> error_norms; // Frobenius norm of each projected error
};

// SD(stacked truth) / SD(stacked error) over projected channels; complex entries count as two reals.
ZetaReport zeta(std::span<const FloquetChannel> truth, std::span<const FloquetChannel> predicted, MeasurementMode mode);

inline constexpr std::size_t kEvaluationPatterns = 100;

// Evaluation patterns come from stream derive_seed(seed, "eval"), disjoint from campaign streams.
std::vector<Eigen::MatrixXi> evaluation_states(std::size_t count, std::size_t n_s, std::size_t q, std::size_t p,
                                               std::uint64_t seed);

// zeta of `model` against `truth` over `count` unseen patterns.
ZetaReport evaluate_zeta(const ChannelModel &truth, const ChannelModel &model, MeasurementMode mode, std::size_t q,
                         std::uint64_t seed, std::size_t count = kEvaluationPatterns,
                         Execution exec = Execution::parallel);

struct GainConfig
{
    std::size_t tx = 0;
    std::size_t rx = 0;
    int target_harmonic = 1;
    std::size_t q = 3;
    std::size_t restarts = 4;
    std::uint64_t seed = 0;
};

struct GainResult
{
    Eigen::MatrixXi states;
    double predicted_db = 0.0;
    double true_db = 0.0;
    std::vector<std::vector<double>> traces; // objective after init and after each sweep, per restart
    std::size_t restarts = 0;
};

// Coordinate ascent on |H(target, 0)(rx, tx)|^2 under `model`: element-major, slot-minor sweeps,
// all states tried per coordinate, ties to the lowest state, stop after a sweep without strict
// improvement; best over random restarts. The returned pattern is scored under `truth` as well.
GainResult coordinate_ascent_gain(const ChannelModel &model, const ChannelModel &truth, const GainConfig &config);

// Exhaustive maximum of the same objective (for small instances).
GainResult exhaustive_gain(const ChannelModel &model, const ChannelModel &truth, const GainConfig &config);

} // namespace floquet
