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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "floquet/parallel.hpp"
#include "floquet/rng.hpp"
#include "floquet/scenario.hpp"

namespace floquet
{

// M1: complex fundamental-to-fundamental block. M2: moduli of the multi-harmonic channel.
// M3: complex multi-harmonic channel.
enum class MeasurementMode
{
    m1,
    m2,
    m3
};

MeasurementMode parse_mode(std::string_view text);
std::string to_string(MeasurementMode mode);

// Projected measurement. M2 data is real and stored with zero imaginary part.
struct Observation
{
    MeasurementMode mode = MeasurementMode::m3;
    CMatrix data;

    bool operator==(const Observation &other) const { return mode == other.mode && data == other.data; }
};

Observation project(MeasurementMode mode, const FloquetChannel &channel);

// Which entries define the SNR reference power.
enum class SnrReference
{
    all_entries,      // mean |H| entry power over the whole multi-harmonic matrix
    fundamental_block // mean entry power of the (0, 0) block only
};

std::string to_string(SnrReference ref);
SnrReference parse_snr_reference(std::string_view text);

inline constexpr std::size_t kPilotPatterns = 50;

// Noiseless reference power over a pilot ensemble of random patterns on `grid`.
double reference_power(const Scenario &scenario, const HarmonicGrid &grid, std::size_t q, std::uint64_t seed,
                       SnrReference ref = SnrReference::all_entries, std::size_t pilots = kPilotPatterns);

// sigma^2 = p_ref * 10^(-snr_db / 10).
double noise_variance(double p_ref, double snr_db);

// Adds circular complex Gaussian noise of per-entry variance sigma2.
FloquetChannel add_noise(const FloquetChannel &channel, double sigma2, Rng &rng);
FloquetChannel add_noise(const FloquetChannel &channel, double snr_db, double p_ref, Rng &rng);

// Uniform i.i.d. states in 0..p-1 (stored 0-based).
Eigen::MatrixXi random_states(std::size_t n_s, std::size_t q, std::size_t p, Rng &rng);
// K state-only patterns (zero delays).
std::vector<ModulationPattern> random_patterns(std::size_t k, std::size_t n_s, std::size_t q, std::size_t p, Rng &rng);

struct CampaignRecord
{
    ModulationPattern pattern;
    Observation observation;

    bool operator==(const CampaignRecord &) const = default;
};

struct Campaign
{
    MeasurementMode mode = MeasurementMode::m3;
    std::optional<double> snr_db; // empty: noiseless
    SnrReference snr_reference = SnrReference::all_entries;
    double noise_variance = 0.0;
    HarmonicGrid grid = HarmonicGrid::symmetric(135e9, 125e6, 1);
    std::size_t n_t = 0;
    std::size_t n_r = 0;
    std::size_t q = 0;
    std::uint64_t seed = 0;
    std::vector<CampaignRecord> records;

    std::size_t size() const noexcept { return records.size(); }
    // Throws ValidationError on shape or mode inconsistencies.
    void validate() const;

    bool operator==(const Campaign &) const = default;
};

struct CampaignSpec
{
    std::size_t k = 1;
    std::size_t q = 1;
    MeasurementMode mode = MeasurementMode::m3;
    std::optional<double> snr_db;
    SnrReference snr_reference = SnrReference::all_entries;
    std::uint64_t seed = 0;
};

// K random patterns; each record draws its pattern and noise from its own stream
// derive_seed(seed, k), so the result does not depend on execution order.
Campaign simulate_campaign(const Scenario &scenario, const HarmonicGrid &grid, const CampaignSpec &spec,
                           Execution exec = Execution::parallel);

// Static (Q = 1) measurements of the complex block at a single harmonic.
struct StaticRecord
{
    Eigen::VectorXi states;
    CMatrix block;

    bool operator==(const StaticRecord &) const = default;
};

struct StaticCampaign
{
    int harmonic = 0;
    std::size_t n_states = 0;
    std::vector<StaticRecord> records;

    bool operator==(const StaticCampaign &) const = default;
};

// Noise uses sigma2 derived from the per-harmonic mean block power when snr_db is set.
StaticCampaign simulate_static_campaign(const Scenario &scenario, int harmonic, std::size_t k,
                                        std::optional<double> snr_db, std::uint64_t seed);

// Q = 1 block at one harmonic: Hd + A (I - diag(r) Gamma)^-1 diag(r) B.
CMatrix static_block(const HarmonicBlocks &blocks, const CVector &reflection);

} // namespace floquet
