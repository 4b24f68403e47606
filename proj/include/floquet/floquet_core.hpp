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

#include "floquet/harmonic_grid.hpp"
#include "floquet/types.hpp"

namespace floquet
{

// Resolvents whose condition estimate exceeds this are rejected as singular.
inline constexpr double kMaxResolventCondition = 1e12;

// Per-harmonic partition of a static scattering matrix:
// hd = S_RT, a = S_RS, gamma = S_SS, b = S_ST.
struct HarmonicBlocks
{
    CMatrix hd;
    CMatrix a;
    CMatrix gamma;
    CMatrix b;

    std::size_t n_t() const { return static_cast<std::size_t>(hd.cols()); }
    std::size_t n_r() const { return static_cast<std::size_t>(hd.rows()); }
    std::size_t n_s() const { return static_cast<std::size_t>(gamma.rows()); }
};

// Linear time-invariant part of the system: one N x N scattering matrix per harmonic,
// referenced to 50 ohm.
class StaticScatterModel
{
  public:
    StaticScatterModel(HarmonicGrid grid, PortPartition partition, std::vector<CMatrix> matrices, bool reciprocal);

    const HarmonicGrid &grid() const noexcept { return grid_; }
    const PortPartition &partition() const noexcept { return partition_; }
    const std::vector<CMatrix> &matrices() const noexcept { return matrices_; }
    const CMatrix &matrix(std::size_t harmonic_index) const { return matrices_.at(harmonic_index); }
    bool reciprocal() const noexcept { return reciprocal_; }
    static constexpr double reference_impedance() noexcept { return 50.0; }

    HarmonicBlocks blocks(std::size_t harmonic_index) const;
    std::vector<HarmonicBlocks> all_blocks() const;

    // Largest singular value over all harmonics.
    double max_singular_value() const;

  private:
    HarmonicGrid grid_;
    PortPartition partition_;
    std::vector<CMatrix> matrices_;
    bool reciprocal_;
};

double largest_singular_value(const CMatrix &m);

// Reflection coefficients rho(h, p) of P load states at every grid harmonic.
class LoadSet
{
  public:
    LoadSet(HarmonicGrid grid, CMatrix rho);

    const HarmonicGrid &grid() const noexcept { return grid_; }
    // Rows: harmonics in grid order; columns: load states.
    const CMatrix &rho() const noexcept { return rho_; }
    std::size_t n_states() const noexcept { return static_cast<std::size_t>(rho_.cols()); }

  private:
    HarmonicGrid grid_;
    CMatrix rho_;
};

// Slot-wise load states (0-based) of every tunable element plus per-element control delays.
struct ModulationPattern
{
    Eigen::MatrixXi states; // n_s x q
    std::vector<double> delays; // seconds, one per element

    ModulationPattern() = default;
    ModulationPattern(Eigen::MatrixXi states_, std::vector<double> delays_);
    // Zero delays.
    explicit ModulationPattern(Eigen::MatrixXi states_);

    std::size_t n_s() const noexcept { return static_cast<std::size_t>(states.rows()); }
    std::size_t q() const noexcept { return static_cast<std::size_t>(states.cols()); }

    // Throws unless states lie in 0..n_states-1 and delays lie in [0, period).
    void validate(std::size_t n_states, double period) const;

    bool operator==(const ModulationPattern &other) const
    {
        return states == other.states && delays == other.delays;
    }
};

// Time-Floquet scattering matrix of the tunable loads. Every harmonic block is diagonal,
// so only N_S entries per (output, input) harmonic pair are stored.
class FloquetLoadScatter
{
  public:
    FloquetLoadScatter(std::size_t n_harmonics, std::size_t n_s);

    std::size_t n_harmonics() const noexcept { return nh_; }
    std::size_t n_s() const noexcept { return ns_; }

    Complex &operator()(std::size_t out, std::size_t in, std::size_t element)
    {
        return data_[(out * nh_ + in) * ns_ + element];
    }
    Complex operator()(std::size_t out, std::size_t in, std::size_t element) const
    {
        return data_[(out * nh_ + in) * ns_ + element];
    }

    // Dense |H| N_S square matrix, harmonic-major.
    CMatrix dense() const;

  private:
    std::size_t nh_;
    std::size_t ns_;
    std::vector<Complex> data_;
};

// |H| N_R x |H| N_T multi-harmonic end-to-end channel, harmonic-major / port-minor.
class FloquetChannel
{
  public:
    FloquetChannel(HarmonicGrid grid, std::size_t n_r, std::size_t n_t, CMatrix matrix);

    const HarmonicGrid &grid() const noexcept { return grid_; }
    std::size_t n_r() const noexcept { return nr_; }
    std::size_t n_t() const noexcept { return nt_; }
    const CMatrix &matrix() const noexcept { return matrix_; }
    CMatrix &matrix() noexcept { return matrix_; }

    // Block mapping input harmonic h_in to output harmonic h_out (harmonic values, not indices).
    CMatrix block(int h_out, int h_in) const;
    CMatrix block_at(std::size_t out_index, std::size_t in_index) const;

    // b = H a for a stacked multi-harmonic input wavefront.
    CVector apply(const CVector &a) const;

  private:
    HarmonicGrid grid_;
    std::size_t nr_;
    std::size_t nt_;
    CMatrix matrix_;
};

// (1/T) * integral over slot `slot` (0-based) of exp(-j 2 pi dh t / T), for Q equal slots.
Complex slot_fourier_weight(int dh, std::size_t slot, std::size_t q);

// Fourier coefficient phi_i^(h_n, h_m) of one element's periodically switched reflection
// coefficient, including the control-delay phase.
Complex fourier_load_coefficient(std::span<const int> slot_states, double delay, const LoadSet &loads, int h_n,
                                 int h_m, const HarmonicGrid &grid);

FloquetLoadScatter assemble_phi(const ModulationPattern &pattern, const LoadSet &loads, const HarmonicGrid &grid);

// Same, from a raw rho table (rows follow `grid`); proxies may carry non-passive rho.
// With `use_delays` false the pattern's delays are ignored.
FloquetLoadScatter assemble_phi(const ModulationPattern &pattern, const CMatrix &rho_table, const HarmonicGrid &grid,
                                bool use_delays = true);

FloquetChannel end_to_end_channel(const StaticScatterModel &model, const FloquetLoadScatter &phi);
FloquetChannel end_to_end_channel(std::span<const HarmonicBlocks> blocks, const FloquetLoadScatter &phi,
                                  const HarmonicGrid &grid);

// Channel on the full model grid, truncated to `retained`. Only the retained input harmonics are
// solved for; equals truncate(end_to_end_channel(model, phi), retained).
FloquetChannel end_to_end_channel(const StaticScatterModel &model, const FloquetLoadScatter &phi,
                                  const HarmonicGrid &retained);

// Single column of the channel (input harmonic index `in_index`, transmit port `tx`).
CVector end_to_end_column(std::span<const HarmonicBlocks> blocks, const FloquetLoadScatter &phi,
                          std::size_t in_index, std::size_t tx);

StaticScatterModel truncate(const StaticScatterModel &model, const HarmonicGrid &retained);
LoadSet truncate(const LoadSet &loads, const HarmonicGrid &retained);
FloquetChannel truncate(const FloquetChannel &channel, const HarmonicGrid &retained);

// Building blocks of the resolvent evaluation, shared with the gradient code.
namespace resolvent
{

// X = I - Phi * blkdiag(Gamma).
CMatrix system_matrix(std::span<const HarmonicBlocks> blocks, const FloquetLoadScatter &phi);

// Z = Phi * blkdiag(B), restricted to the columns of the listed input harmonic indices.
CMatrix drive(std::span<const HarmonicBlocks> blocks, const FloquetLoadScatter &phi,
              std::span<const std::size_t> input_harmonics);

// LU factorization; throws IllConditionedError above kMaxResolventCondition.
Eigen::PartialPivLU<CMatrix> factor(const CMatrix &x);

// H = blkdiag(Hd) + blkdiag(A) * Y for the listed input harmonics.
CMatrix combine(std::span<const HarmonicBlocks> blocks, const CMatrix &y,
                std::span<const std::size_t> input_harmonics);

std::vector<std::size_t> all_harmonics(std::size_t n_harmonics);

} // namespace resolvent

} // namespace floquet
