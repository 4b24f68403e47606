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

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "floquet/floquet_core.hpp"

namespace floquet::touchstone
{

enum class DataFormat
{
    ma, // magnitude, angle in degrees
    db, // 20 log10 magnitude, angle in degrees
    ri  // real, imaginary
};

enum class Version
{
    v1,
    v2
};

struct FrequencyPoint
{
    double hz = 0.0;
    CMatrix s;
};

struct NetworkData
{
    std::size_t n_ports = 0;
    double reference_ohm = 50.0;
    std::vector<FrequencyPoint> points;
};

// Parses Touchstone text. Version 1 needs the port count (from the .sNp extension); version 2
// takes it from [Number of Ports] and ignores `n_ports`.
NetworkData parse(std::string_view text, std::size_t n_ports = 0);
NetworkData read(const std::filesystem::path &path);

std::string format(const NetworkData &data, Version version = Version::v1, DataFormat fmt = DataFormat::ri);
void write(const std::filesystem::path &path, const NetworkData &data, Version version = Version::v1,
           DataFormat fmt = DataFormat::ri);

// Rows/columns `ports` of every point, in the given order (matched termination of the rest).
NetworkData select_ports(const NetworkData &data, std::span<const std::size_t> ports);

// Keeps `keep` and terminates the remaining ports in loads with reflection coefficients `loads`:
// S_kk + S_ku L (I - S_uu L)^-1 S_uk.
CMatrix terminate_ports(const CMatrix &s, std::span<const std::size_t> keep, const CVector &loads);

struct ImportWarning
{
    enum class Kind
    {
        frequency_gap,
        passivity_note,     // largest singular value slightly above 1
        passivity_violation // above the 1.01 tolerance
    };
    Kind kind;
    int harmonic = 0;
    double value = 0.0;
    std::string message;
};

inline constexpr double kPassivityTolerance = 1.01;

struct ImportResult
{
    StaticScatterModel model;
    std::vector<ImportWarning> warnings;
};

// 0-based port numbers of a file assigned to the three port groups; unlisted ports are treated
// as terminated in matched loads.
struct PortSelection
{
    std::vector<std::size_t> tx;
    std::vector<std::size_t> rx;
    std::vector<std::size_t> ris;
};

// One file per grid harmonic (in grid order), or a single file used for all harmonics. The
// imported model is re-indexed to the contiguous order tx, rx, ris.
ImportResult import_touchstone_set(std::span<const std::filesystem::path> files, const HarmonicGrid &grid,
                                   const PortSelection &ports, bool reciprocal = false);
ImportResult import_networks(std::span<const NetworkData> networks, const HarmonicGrid &grid,
                             const PortSelection &ports, bool reciprocal = false);

// Per-harmonic export of a model (one single-frequency network per harmonic).
std::vector<NetworkData> export_networks(const StaticScatterModel &model);

} // namespace floquet::touchstone
