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

#include <cstddef>
#include <span>
#include <vector>

#include "floquet/types.hpp"

namespace floquet
{

// Harmonic comb f_h = f0 + h * fm, symmetric around the fundamental.
class HarmonicGrid
{
  public:
    HarmonicGrid(double f0, double fm, std::vector<int> harmonics);

    // Grid with `count` harmonics -(count-1)/2 .. (count-1)/2; count must be odd.
    static HarmonicGrid symmetric(double f0, double fm, std::size_t count);

    double f0() const noexcept { return f0_; }
    double fm() const noexcept { return fm_; }
    double period() const noexcept { return 1.0 / fm_; }
    double frequency(int h) const noexcept { return f0_ + h * fm_; }

    const std::vector<int> &harmonics() const noexcept { return harmonics_; }
    std::size_t size() const noexcept { return harmonics_.size(); }
    int max_harmonic() const noexcept { return harmonics_.back(); }

    bool contains(int h) const noexcept;
    // Position of harmonic h in the ordered list; throws GridMismatchError if absent.
    std::size_t index_of(int h) const;
    std::size_t fundamental_index() const { return index_of(0); }

    // True if both grids share f0, fm and every harmonic of `other` is also in this grid.
    bool covers(const HarmonicGrid &other) const noexcept;

    bool operator==(const HarmonicGrid &other) const noexcept
    {
        return f0_ == other.f0_ && fm_ == other.fm_ && harmonics_ == other.harmonics_;
    }

  private:
    double f0_;
    double fm_;
    std::vector<int> harmonics_;
};

// Transmit / receive / tunable port index sets over 0..N-1.
class PortPartition
{
  public:
    PortPartition(std::vector<std::size_t> tx, std::vector<std::size_t> rx, std::vector<std::size_t> ris);

    // tx = {0..nt-1}, rx = {nt..nt+nr-1}, ris = the remaining ns ports.
    static PortPartition contiguous(std::size_t nt, std::size_t nr, std::size_t ns);

    const std::vector<std::size_t> &tx() const noexcept { return tx_; }
    const std::vector<std::size_t> &rx() const noexcept { return rx_; }
    const std::vector<std::size_t> &ris() const noexcept { return ris_; }

    std::size_t n_t() const noexcept { return tx_.size(); }
    std::size_t n_r() const noexcept { return rx_.size(); }
    std::size_t n_s() const noexcept { return ris_.size(); }
    std::size_t n_antennas() const noexcept { return tx_.size() + rx_.size(); }
    std::size_t n_ports() const noexcept { return n_antennas() + ris_.size(); }

    bool operator==(const PortPartition &) const = default;

  private:
    std::vector<std::size_t> tx_;
    std::vector<std::size_t> rx_;
    std::vector<std::size_t> ris_;
};

// Rows `rows` and columns `cols` of `m`.
CMatrix select_block(const CMatrix &m, std::span<const std::size_t> rows, std::span<const std::size_t> cols);

} // namespace floquet
