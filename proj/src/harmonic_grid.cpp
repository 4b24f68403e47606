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

#include "floquet/harmonic_grid.hpp"

#include <algorithm>
#include <string>

namespace floquet
{

HarmonicGrid::HarmonicGrid(double f0, double fm, std::vector<int> harmonics)
    : f0_(f0), fm_(fm), harmonics_(std::move(harmonics))
{
    if (!(fm_ > 0.0) || !(f0_ > 0.0))
        throw ValidationError("harmonic grid: f0 and fm must be positive");
    if (!(f0_ / fm_ > 10.0))
        throw ValidationError("harmonic grid: f0/fm must exceed 10 (modulation must be slow against the carrier)");
    if (harmonics_.empty() || harmonics_.size() % 2 == 0)
        throw ValidationError("harmonic grid: harmonic count must be odd, got " + std::to_string(harmonics_.size()));
    for (std::size_t i = 1; i < harmonics_.size(); ++i)
        if (harmonics_[i] <= harmonics_[i - 1])
            throw ValidationError("harmonic grid: harmonics must be strictly increasing");
    const std::size_t n = harmonics_.size();
    for (std::size_t i = 0; i < n; ++i)
        if (harmonics_[i] != -harmonics_[n - 1 - i])
            throw ValidationError("harmonic grid: harmonics must be symmetric around 0");
}

HarmonicGrid HarmonicGrid::symmetric(double f0, double fm, std::size_t count)
{
    if (count % 2 == 0)
        throw ValidationError("harmonic grid: harmonic count must be odd, got " + std::to_string(count));
    const int half = static_cast<int>(count / 2);
    std::vector<int> h(count);
    for (std::size_t i = 0; i < count; ++i)
        h[i] = static_cast<int>(i) - half;
    return HarmonicGrid(f0, fm, std::move(h));
}

bool HarmonicGrid::contains(int h) const noexcept
{
    return std::binary_search(harmonics_.begin(), harmonics_.end(), h);
}

std::size_t HarmonicGrid::index_of(int h) const
{
    auto it = std::lower_bound(harmonics_.begin(), harmonics_.end(), h);
    if (it == harmonics_.end() || *it != h)
        throw GridMismatchError("harmonic " + std::to_string(h) + " is not on the grid");
    return static_cast<std::size_t>(it - harmonics_.begin());
}

bool HarmonicGrid::covers(const HarmonicGrid &other) const noexcept
{
    if (f0_ != other.f0_ || fm_ != other.fm_)
        return false;
    return std::all_of(other.harmonics_.begin(), other.harmonics_.end(), [&](int h) { return contains(h); });
}

PortPartition::PortPartition(std::vector<std::size_t> tx, std::vector<std::size_t> rx, std::vector<std::size_t> ris)
    : tx_(std::move(tx)), rx_(std::move(rx)), ris_(std::move(ris))
{
    if (tx_.empty() || rx_.empty() || ris_.empty())
        throw ValidationError("port partition: transmit, receive and tunable sets must be non-empty");
    const std::size_t n = n_ports();
    std::vector<int> seen(n, 0);
    for (const auto *set : {&tx_, &rx_, &ris_})
        for (std::size_t p : *set)
        {
            if (p >= n)
                throw ValidationError("port partition: index " + std::to_string(p) + " outside 0.." +
                                      std::to_string(n - 1));
            if (seen[p]++)
                throw ValidationError("port partition: port " + std::to_string(p) + " assigned twice");
        }
}

PortPartition PortPartition::contiguous(std::size_t nt, std::size_t nr, std::size_t ns)
{
    std::vector<std::size_t> tx(nt), rx(nr), ris(ns);
    for (std::size_t i = 0; i < nt; ++i)
        tx[i] = i;
    for (std::size_t i = 0; i < nr; ++i)
        rx[i] = nt + i;
    for (std::size_t i = 0; i < ns; ++i)
        ris[i] = nt + nr + i;
    return PortPartition(std::move(tx), std::move(rx), std::move(ris));
}

CMatrix select_block(const CMatrix &m, std::span<const std::size_t> rows, std::span<const std::size_t> cols)
{
    CMatrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < cols.size(); ++c)
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                m(static_cast<Eigen::Index>(rows[r]), static_cast<Eigen::Index>(cols[c]));
    return out;
}

} // namespace floquet
