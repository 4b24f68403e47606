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

#include "floquet/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace floquet
{

namespace
{

using Index = Eigen::Index;

CMatrix random_matrix(Rng &rng, Index n, bool symmetric)
{
    CMatrix m(n, n);
    for (Index c = 0; c < n; ++c)
        for (Index r = 0; r < n; ++r)
            m(r, c) = complex_normal(rng);
    if (symmetric)
    {
        const CMatrix t = 0.5 * (m + m.transpose());
        m = t;
    }
    return m;
}

// Scale down to the passivity bound if needed; scaling keeps reciprocity exact.
void project_passive(CMatrix &s, double bound)
{
    const double sv = largest_singular_value(s);
    if (sv > bound)
        s *= bound / sv;
}

} // namespace

void ScenarioConfig::validate() const
{
    if (!(f0_hz > 0.0) || !(fm_hz > 0.0) || !(f0_hz / fm_hz > 10.0))
        throw ValidationError("scenario config: need f0 > 0, fm > 0 and f0/fm > 10");
    if (gt_harmonics % 2 == 0 || retained_harmonics % 2 == 0)
        throw ValidationError("scenario config: harmonic counts must be odd");
    if (retained_harmonics > gt_harmonics)
        throw ValidationError("scenario config: retained harmonics (" + std::to_string(retained_harmonics) +
                              ") exceed ground-truth harmonics (" + std::to_string(gt_harmonics) + ")");
    if (n_t < 1 || n_r < 1 || n_s < 1)
        throw ValidationError("scenario config: port counts must be at least 1");
    if (n_states < 2)
        throw ValidationError("scenario config: at least two load states required");
    if (q < 1)
        throw ValidationError("scenario config: at least one slot required");
    if (!(passivity_margin >= 0.0 && passivity_margin < 1.0))
        throw ValidationError("scenario config: passivity margin must lie in [0, 1)");
    if (!(dispersion_scale >= 0.0))
        throw ValidationError("scenario config: dispersion scale must be nonnegative");
    if (!(delay_scale >= 0.0 && delay_scale < 1.0))
        throw ValidationError("scenario config: delay scale must lie in [0, 1)");
}

FloquetChannel Scenario::channel(const ModulationPattern &pattern) const
{
    return end_to_end_channel(model, assemble_phi(pattern, loads, model.grid()));
}

FloquetChannel Scenario::channel(const ModulationPattern &pattern, const HarmonicGrid &grid) const
{
    return end_to_end_channel(model, assemble_phi(pattern, loads, model.grid()), grid);
}

Scenario generate_scenario(const ScenarioConfig &config)
{
    Rng rng(config.seed);
    return generate_scenario(config, rng);
}

Scenario generate_scenario(const ScenarioConfig &config, Rng &rng)
{
    config.validate();
    const HarmonicGrid grid = config.gt_grid();
    const Index n = static_cast<Index>(config.n_t + config.n_r + config.n_s);
    const double bound = 1.0 - config.passivity_margin;

    CMatrix s0 = random_matrix(rng, n, config.reciprocal);
    s0 *= bound / largest_singular_value(s0);
    CMatrix perturbation = random_matrix(rng, n, config.reciprocal);
    perturbation *= bound / largest_singular_value(perturbation);

    std::vector<CMatrix> mats;
    mats.reserve(grid.size());
    for (int h : grid.harmonics())
    {
        const double x = h * config.fm_hz / config.f0_hz * config.dispersion_scale;
        CMatrix s = s0 + x * perturbation;
        project_passive(s, bound);
        mats.push_back(std::move(s));
    }

    // Load states on a loop: distinct base phases, magnitudes in [0.7, 0.95], per-state drift rates.
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::size_t p_count = config.n_states;
    std::vector<double> base_mag(p_count), base_phase(p_count), mag_drift(p_count), phase_drift(p_count);
    for (std::size_t p = 0; p < p_count; ++p)
    {
        base_mag[p] = 0.7 + 0.25 * unit(rng);
        base_phase[p] = 2.0 * kPi * (static_cast<double>(p) + 0.5 * (unit(rng) - 0.5)) / static_cast<double>(p_count);
        mag_drift[p] = 2.0 * unit(rng) - 1.0;
        phase_drift[p] = 0.5 + unit(rng);
    }
    CMatrix rho(static_cast<Index>(grid.size()), static_cast<Index>(p_count));
    for (std::size_t k = 0; k < grid.size(); ++k)
    {
        const double x = grid.harmonics()[k] * config.fm_hz / config.f0_hz * config.dispersion_scale;
        for (std::size_t p = 0; p < p_count; ++p)
        {
            const double mag = std::clamp(base_mag[p] * (1.0 - 0.5 * mag_drift[p] * x), 0.0, 0.99);
            const double phase = base_phase[p] - 2.0 * kPi * phase_drift[p] * x;
            rho(static_cast<Index>(k), static_cast<Index>(p)) = std::polar(mag, phase);
        }
    }

    std::vector<double> delays(config.n_s, 0.0);
    const double period = 1.0 / config.fm_hz;
    for (auto &tau : delays)
        tau = config.delay_scale * period * unit(rng);

    return Scenario{config, StaticScatterModel(grid, config.partition(), std::move(mats), config.reciprocal),
                    LoadSet(grid, std::move(rho)), std::move(delays)};
}

Scenario without_delays(const Scenario &scenario)
{
    Scenario out = scenario;
    std::fill(out.delays.begin(), out.delays.end(), 0.0);
    out.config.delay_scale = 0.0;
    return out;
}

std::vector<HarmonicBlocks> truth_blocks(const Scenario &scenario, const HarmonicGrid &grid, bool mc_aware)
{
    std::vector<HarmonicBlocks> out;
    out.reserve(grid.size());
    for (int h : grid.harmonics())
    {
        out.push_back(scenario.model.blocks(scenario.model.grid().index_of(h)));
        if (!mc_aware)
            out.back().gamma.setZero();
    }
    return out;
}

} // namespace floquet
