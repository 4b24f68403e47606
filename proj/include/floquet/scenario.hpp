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
#include <vector>

#include "floquet/floquet_core.hpp"
#include "floquet/rng.hpp"

namespace floquet
{

// Synthetic ground-truth configuration. Defaults follow the reference D-band setup:
// 135 GHz carrier, 125 MHz modulation, 201 ground-truth and 11 retained harmonics,
// 4 transmit / 4 receive antennas, 10 tunable elements with 8 states, 3 slots.
struct ScenarioConfig
{
    double f0_hz = 135e9;
    double fm_hz = 125e6;
    std::size_t gt_harmonics = 201;
    std::size_t retained_harmonics = 11;
    std::size_t n_t = 4;
    std::size_t n_r = 4;
    std::size_t n_s = 10;
    std::size_t n_states = 8;
    std::size_t q = 3;
    bool reciprocal = true;
    double passivity_margin = 0.05;
    double dispersion_scale = 2.0;
    double delay_scale = 0.02; // delays drawn in [0, delay_scale * T_m)
    std::uint64_t seed = 0;

    void validate() const;

    HarmonicGrid gt_grid() const { return HarmonicGrid::symmetric(f0_hz, fm_hz, gt_harmonics); }
    HarmonicGrid retained_grid() const { return HarmonicGrid::symmetric(f0_hz, fm_hz, retained_harmonics); }
    PortPartition partition() const { return PortPartition::contiguous(n_t, n_r, n_s); }

    bool operator==(const ScenarioConfig &) const = default;
};

// Full ground truth: static model and loads on the ground-truth grid plus control delays.
struct Scenario
{
    ScenarioConfig config;
    StaticScatterModel model;
    LoadSet loads;
    std::vector<double> delays;

    HarmonicGrid gt_grid() const { return model.grid(); }
    HarmonicGrid retained_grid() const { return config.retained_grid(); }

    // Attach the scenario's delays to a bare state matrix.
    ModulationPattern pattern(Eigen::MatrixXi states) const { return ModulationPattern(std::move(states), delays); }

    // Ground-truth channel on the full grid.
    FloquetChannel channel(const ModulationPattern &pattern) const;
    // Ground-truth channel on the full grid, truncated to `grid`.
    FloquetChannel channel(const ModulationPattern &pattern, const HarmonicGrid &grid) const;
};

// Draws a random passive (and optionally reciprocal) static model with slow linear dispersion,
// P loads on a loop inside the unit disk, and uniform control delays. Deterministic in the seed.
Scenario generate_scenario(const ScenarioConfig &config);
Scenario generate_scenario(const ScenarioConfig &config, Rng &rng);

// Copy of `scenario` with all control delays set to zero.
Scenario without_delays(const Scenario &scenario);

// Ground-truth per-harmonic blocks on `grid`, with Gamma zeroed for the MC-unaware benchmark.
std::vector<HarmonicBlocks> truth_blocks(const Scenario &scenario, const HarmonicGrid &grid, bool mc_aware = true);

} // namespace floquet
