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

#include "floquet/measurement.hpp"

#include <cmath>
#include <numeric>

namespace floquet
{

namespace
{

using Index = Eigen::Index;

Index idx(std::size_t v) { return static_cast<Index>(v); }

} // namespace

MeasurementMode parse_mode(std::string_view text)
{
    if (text == "m1" || text == "M1")
        return MeasurementMode::m1;
    if (text == "m2" || text == "M2")
        return MeasurementMode::m2;
    if (text == "m3" || text == "M3")
        return MeasurementMode::m3;
    throw ValidationError("unknown measurement mode '" + std::string(text) + "' (expected m1, m2 or m3)");
}

std::string to_string(MeasurementMode mode)
{
    switch (mode)
    {
    case MeasurementMode::m1:
        return "m1";
    case MeasurementMode::m2:
        return "m2";
    case MeasurementMode::m3:
        return "m3";
    }
    return "m3";
}

std::string to_string(SnrReference ref)
{
    return ref == SnrReference::all_entries ? "all_entries" : "fundamental_block";
}

SnrReference parse_snr_reference(std::string_view text)
{
    if (text == "all_entries")
        return SnrReference::all_entries;
    if (text == "fundamental_block")
        return SnrReference::fundamental_block;
    throw ValidationError("unknown SNR reference '" + std::string(text) + "'");
}

Observation project(MeasurementMode mode, const FloquetChannel &channel)
{
    if (!channel.grid().contains(0))
        throw GridMismatchError("projection needs the fundamental harmonic in the channel grid");
    switch (mode)
    {
    case MeasurementMode::m1: {
        const std::size_t f = channel.grid().fundamental_index();
        return {mode, channel.block_at(f, f)};
    }
    case MeasurementMode::m2:
        return {mode, channel.matrix().cwiseAbs().cast<Complex>()};
    case MeasurementMode::m3:
        return {mode, channel.matrix()};
    }
    return {mode, channel.matrix()};
}

double reference_power(const Scenario &scenario, const HarmonicGrid &grid, std::size_t q, std::uint64_t seed,
                       SnrReference ref, std::size_t pilots)
{
    if (pilots == 0)
        throw ValidationError("reference power needs at least one pilot pattern");
    Rng rng(derive_seed(seed, "pilot"));
    const auto &cfg = scenario.config;
    double total = 0.0;
    for (std::size_t k = 0; k < pilots; ++k)
    {
        const auto pattern = scenario.pattern(random_states(cfg.n_s, q, cfg.n_states, rng));
        const FloquetChannel ch = scenario.channel(pattern, grid);
        if (ref == SnrReference::all_entries)
            total += ch.matrix().squaredNorm() / static_cast<double>(ch.matrix().size());
        else
        {
            const std::size_t f = grid.fundamental_index();
            const CMatrix b = ch.block_at(f, f);
            total += b.squaredNorm() / static_cast<double>(b.size());
        }
    }
    return total / static_cast<double>(pilots);
}

double noise_variance(double p_ref, double snr_db)
{
    if (!(p_ref > 0.0) || !std::isfinite(p_ref))
        throw NumericalError("reference power must be positive and finite");
    if (!std::isfinite(snr_db))
        throw ValidationError("SNR must be finite; use the noiseless flag instead");
    return p_ref * std::pow(10.0, -snr_db / 10.0);
}

FloquetChannel add_noise(const FloquetChannel &channel, double sigma2, Rng &rng)
{
    if (!(sigma2 >= 0.0))
        throw ValidationError("noise variance must be nonnegative");
    FloquetChannel out = channel;
    const double scale = std::sqrt(sigma2);
    CMatrix &m = out.matrix();
    for (Index c = 0; c < m.cols(); ++c)
        for (Index r = 0; r < m.rows(); ++r)
            m(r, c) += scale * complex_normal(rng);
    return out;
}

FloquetChannel add_noise(const FloquetChannel &channel, double snr_db, double p_ref, Rng &rng)
{
    return add_noise(channel, noise_variance(p_ref, snr_db), rng);
}

Eigen::MatrixXi random_states(std::size_t n_s, std::size_t q, std::size_t p, Rng &rng)
{
    if (n_s == 0 || q == 0 || p == 0)
        throw ValidationError("random patterns need n_s, q and p of at least 1");
    std::uniform_int_distribution<int> pick(0, static_cast<int>(p) - 1);
    Eigen::MatrixXi states(idx(n_s), idx(q));
    for (Index i = 0; i < states.rows(); ++i)
        for (Index s = 0; s < states.cols(); ++s)
            states(i, s) = pick(rng);
    return states;
}

std::vector<ModulationPattern> random_patterns(std::size_t k, std::size_t n_s, std::size_t q, std::size_t p, Rng &rng)
{
    std::vector<ModulationPattern> out;
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i)
        out.emplace_back(random_states(n_s, q, p, rng));
    return out;
}

void Campaign::validate() const
{
    if (records.empty())
        throw ValidationError("campaign has no records");
    if (!grid.contains(0))
        throw GridMismatchError("campaign grid lacks the fundamental harmonic");
    const std::size_t nh = mode == MeasurementMode::m1 ? 1 : grid.size();
    for (std::size_t k = 0; k < records.size(); ++k)
    {
        const auto &rec = records[k];
        if (rec.observation.mode != mode)
            throw ValidationError("campaign record " + std::to_string(k) + ": mode differs from campaign mode");
        if (rec.observation.data.rows() != idx(nh * n_r) || rec.observation.data.cols() != idx(nh * n_t))
            throw DimensionError("campaign record " + std::to_string(k) + ": observation shape does not match mode " +
                                 to_string(mode));
        if (rec.pattern.q() != q)
            throw DimensionError("campaign record " + std::to_string(k) + ": pattern slot count differs from q");
    }
}

Campaign simulate_campaign(const Scenario &scenario, const HarmonicGrid &grid, const CampaignSpec &spec,
                           Execution exec)
{
    if (spec.k < 1)
        throw ValidationError("campaign size K must be at least 1");
    if (spec.q < 1)
        throw ValidationError("slot count Q must be at least 1");
    if (!scenario.gt_grid().covers(grid))
        throw GridMismatchError("campaign grid is not contained in the ground-truth grid");
    const auto &cfg = scenario.config;

    Campaign out;
    out.mode = spec.mode;
    out.snr_db = spec.snr_db;
    out.snr_reference = spec.snr_reference;
    out.grid = grid;
    out.n_t = cfg.n_t;
    out.n_r = cfg.n_r;
    out.q = spec.q;
    out.seed = spec.seed;
    if (spec.snr_db)
        out.noise_variance = noise_variance(reference_power(scenario, grid, spec.q, spec.seed, spec.snr_reference),
                                            *spec.snr_db);

    out.records.resize(spec.k);
    for_each_index(spec.k, exec, [&](std::size_t k) {
        Rng rng(derive_seed(spec.seed, static_cast<std::uint64_t>(k)));
        auto pattern = scenario.pattern(random_states(cfg.n_s, spec.q, cfg.n_states, rng));
        FloquetChannel ch = scenario.channel(pattern, grid);
        if (spec.snr_db)
            ch = add_noise(ch, out.noise_variance, rng);
        out.records[k] = CampaignRecord{std::move(pattern), project(spec.mode, ch)};
    });
    return out;
}

CMatrix static_block(const HarmonicBlocks &blocks, const CVector &reflection)
{
    const Index ns = blocks.gamma.rows();
    CMatrix x = CMatrix::Identity(ns, ns) - reflection.asDiagonal() * blocks.gamma;
    const auto lu = resolvent::factor(x);
    const CMatrix z = reflection.asDiagonal() * blocks.b;
    return blocks.hd + blocks.a * lu.solve(z);
}

StaticCampaign simulate_static_campaign(const Scenario &scenario, int harmonic, std::size_t k,
                                        std::optional<double> snr_db, std::uint64_t seed)
{
    if (k < 1)
        throw ValidationError("static campaign size must be at least 1");
    const auto &cfg = scenario.config;
    const std::size_t hi = scenario.gt_grid().index_of(harmonic);
    const HarmonicBlocks blocks = scenario.model.blocks(hi);
    const CVector rho_h = scenario.loads.rho().row(idx(hi)).transpose();

    StaticCampaign out;
    out.harmonic = harmonic;
    out.n_states = cfg.n_states;
    out.records.resize(k);
    double p_ref = 0.0;
    for (std::size_t r = 0; r < k; ++r)
    {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
        const Eigen::MatrixXi s = random_states(cfg.n_s, 1, cfg.n_states, rng);
        CVector refl(idx(cfg.n_s));
        for (Index i = 0; i < refl.size(); ++i)
            refl(i) = rho_h(s(i, 0));
        out.records[r] = StaticRecord{s.col(0), static_block(blocks, refl)};
        p_ref += out.records[r].block.squaredNorm() / static_cast<double>(out.records[r].block.size());
    }
    if (snr_db)
    {
        const double sigma = std::sqrt(noise_variance(p_ref / static_cast<double>(k), *snr_db));
        Rng rng(derive_seed(seed, "noise"));
        for (auto &rec : out.records)
            for (Index c = 0; c < rec.block.cols(); ++c)
                for (Index r = 0; r < rec.block.rows(); ++r)
                    rec.block(r, c) += sigma * complex_normal(rng);
    }
    return out;
}

} // namespace floquet
