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

#include "floquet/floquet_core.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <string>

namespace floquet
{

namespace
{

using Index = Eigen::Index;

Index idx(std::size_t v) { return static_cast<Index>(v); }

std::vector<std::size_t> retained_indices(const HarmonicGrid &source, const HarmonicGrid &retained)
{
    if (source.f0() != retained.f0() || source.fm() != retained.fm())
        throw GridMismatchError("truncate: retained grid has different carrier or modulation frequency");
    std::vector<std::size_t> out;
    out.reserve(retained.size());
    for (int h : retained.harmonics())
    {
        if (!source.contains(h))
            throw GridMismatchError("truncate: retained harmonic " + std::to_string(h) + " missing from source grid");
        out.push_back(source.index_of(h));
    }
    return out;
}

void check_blocks(std::span<const HarmonicBlocks> blocks, const FloquetLoadScatter &phi)
{
    if (blocks.size() != phi.n_harmonics())
        throw DimensionError("channel: " + std::to_string(blocks.size()) + " harmonic blocks but phi covers " +
                             std::to_string(phi.n_harmonics()) + " harmonics");
    if (blocks.empty())
        throw DimensionError("channel: no harmonics");
    const auto &b0 = blocks.front();
    for (const auto &b : blocks)
    {
        if (b.n_s() != phi.n_s() || b.gamma.cols() != idx(phi.n_s()) || b.a.cols() != idx(phi.n_s()) ||
            b.b.rows() != idx(phi.n_s()))
            throw DimensionError("channel: tunable port count of harmonic blocks does not match phi");
        if (b.hd.rows() != b0.hd.rows() || b.hd.cols() != b0.hd.cols() || b.a.rows() != b0.hd.rows() ||
            b.b.cols() != b0.hd.cols())
            throw DimensionError("channel: inconsistent antenna block sizes across harmonics");
    }
}

} // namespace

StaticScatterModel::StaticScatterModel(HarmonicGrid grid, PortPartition partition, std::vector<CMatrix> matrices,
                                       bool reciprocal)
    : grid_(std::move(grid)), partition_(std::move(partition)), matrices_(std::move(matrices)), reciprocal_(reciprocal)
{
    if (matrices_.size() != grid_.size())
        throw DimensionError("static model: " + std::to_string(matrices_.size()) + " matrices for " +
                             std::to_string(grid_.size()) + " harmonics");
    const Index n = idx(partition_.n_ports());
    for (std::size_t k = 0; k < matrices_.size(); ++k)
    {
        const auto &s = matrices_[k];
        if (s.rows() != n || s.cols() != n)
            throw DimensionError("static model: matrix " + std::to_string(k) + " is not " + std::to_string(n) + "x" +
                                 std::to_string(n));
        if (reciprocal_)
        {
            const double scale = std::max(s.norm(), 1e-300);
            if ((s - s.transpose()).norm() > 1e-12 * scale)
                throw ValidationError("static model: matrix " + std::to_string(k) +
                                      " violates reciprocity beyond 1e-12 relative error");
        }
    }
}

HarmonicBlocks StaticScatterModel::blocks(std::size_t harmonic_index) const
{
    const CMatrix &s = matrices_.at(harmonic_index);
    const auto &p = partition_;
    return HarmonicBlocks{select_block(s, p.rx(), p.tx()), select_block(s, p.rx(), p.ris()),
                          select_block(s, p.ris(), p.ris()), select_block(s, p.ris(), p.tx())};
}

std::vector<HarmonicBlocks> StaticScatterModel::all_blocks() const
{
    std::vector<HarmonicBlocks> out;
    out.reserve(matrices_.size());
    for (std::size_t k = 0; k < matrices_.size(); ++k)
        out.push_back(blocks(k));
    return out;
}

double largest_singular_value(const CMatrix &m)
{
    Eigen::JacobiSVD<CMatrix> svd(m);
    return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

double StaticScatterModel::max_singular_value() const
{
    double best = 0.0;
    for (const auto &s : matrices_)
        best = std::max(best, largest_singular_value(s));
    return best;
}

LoadSet::LoadSet(HarmonicGrid grid, CMatrix rho) : grid_(std::move(grid)), rho_(std::move(rho))
{
    if (rho_.rows() != idx(grid_.size()))
        throw DimensionError("load set: rho table has " + std::to_string(rho_.rows()) + " rows for " +
                             std::to_string(grid_.size()) + " harmonics");
    if (rho_.cols() < 1)
        throw DimensionError("load set: at least one load state required");
    for (Index h = 0; h < rho_.rows(); ++h)
        for (Index p = 0; p < rho_.cols(); ++p)
            if (std::abs(rho_(h, p)) > 1.0 + 1e-12)
                throw ValidationError("load set: |rho| > 1 for state " + std::to_string(p) + " at harmonic " +
                                      std::to_string(grid_.harmonics()[static_cast<std::size_t>(h)]));
}

ModulationPattern::ModulationPattern(Eigen::MatrixXi states_, std::vector<double> delays_)
    : states(std::move(states_)), delays(std::move(delays_))
{
    if (delays.size() != static_cast<std::size_t>(states.rows()))
        throw DimensionError("modulation pattern: " + std::to_string(delays.size()) + " delays for " +
                             std::to_string(states.rows()) + " elements");
}

ModulationPattern::ModulationPattern(Eigen::MatrixXi states_)
    : states(std::move(states_)), delays(static_cast<std::size_t>(states.rows()), 0.0)
{
}

void ModulationPattern::validate(std::size_t n_states, double period) const
{
    if (states.cols() < 1 || states.rows() < 1)
        throw DimensionError("modulation pattern: need at least one element and one slot");
    if (delays.size() != n_s())
        throw DimensionError("modulation pattern: delay count does not match element count");
    for (Index i = 0; i < states.size(); ++i)
        if (states.data()[i] < 0 || static_cast<std::size_t>(states.data()[i]) >= n_states)
            throw ValidationError("modulation pattern: state index " + std::to_string(states.data()[i]) +
                                  " outside 0.." + std::to_string(n_states - 1));
    for (double tau : delays)
        if (!(tau >= 0.0 && tau < period))
            throw ValidationError("modulation pattern: delay " + std::to_string(tau) + " s outside [0, T_m)");
}

FloquetLoadScatter::FloquetLoadScatter(std::size_t n_harmonics, std::size_t n_s)
    : nh_(n_harmonics), ns_(n_s), data_(n_harmonics * n_harmonics * n_s, Complex{})
{
}

CMatrix FloquetLoadScatter::dense() const
{
    CMatrix out = CMatrix::Zero(idx(nh_ * ns_), idx(nh_ * ns_));
    for (std::size_t n = 0; n < nh_; ++n)
        for (std::size_t m = 0; m < nh_; ++m)
            for (std::size_t i = 0; i < ns_; ++i)
                out(idx(n * ns_ + i), idx(m * ns_ + i)) = (*this)(n, m, i);
    return out;
}

FloquetChannel::FloquetChannel(HarmonicGrid grid, std::size_t n_r, std::size_t n_t, CMatrix matrix)
    : grid_(std::move(grid)), nr_(n_r), nt_(n_t), matrix_(std::move(matrix))
{
    if (matrix_.rows() != idx(grid_.size() * nr_) || matrix_.cols() != idx(grid_.size() * nt_))
        throw DimensionError("channel: matrix is " + std::to_string(matrix_.rows()) + "x" +
                             std::to_string(matrix_.cols()) + ", expected " + std::to_string(grid_.size() * nr_) +
                             "x" + std::to_string(grid_.size() * nt_));
}

CMatrix FloquetChannel::block(int h_out, int h_in) const
{
    return block_at(grid_.index_of(h_out), grid_.index_of(h_in));
}

CMatrix FloquetChannel::block_at(std::size_t out_index, std::size_t in_index) const
{
    return matrix_.block(idx(out_index * nr_), idx(in_index * nt_), idx(nr_), idx(nt_));
}

CVector FloquetChannel::apply(const CVector &a) const
{
    if (a.size() != matrix_.cols())
        throw DimensionError("channel: input wavefront has wrong length");
    return matrix_ * a;
}

Complex slot_fourier_weight(int dh, std::size_t slot, std::size_t q)
{
    const double qd = static_cast<double>(q);
    if (dh == 0)
        return Complex{1.0 / qd, 0.0};
    // A slot spanning a whole number of cycles integrates to exactly zero.
    if (dh % static_cast<int>(q) == 0)
        return Complex{};
    const double w = 2.0 * kPi * dh;
    const Complex start = std::exp(Complex{0.0, -w * static_cast<double>(slot) / qd});
    const Complex stop = std::exp(Complex{0.0, -w * static_cast<double>(slot + 1) / qd});
    return (start - stop) / Complex{0.0, w};
}

Complex fourier_load_coefficient(std::span<const int> slot_states, double delay, const LoadSet &loads, int h_n,
                                 int h_m, const HarmonicGrid &grid)
{
    if (!(loads.grid() == grid))
        throw GridMismatchError("fourier coefficient: load set is defined on a different grid");
    grid.index_of(h_n);
    const std::size_t m = grid.index_of(h_m);
    const int dh = h_n - h_m;
    const std::size_t q = slot_states.size();
    if (q == 0)
        throw DimensionError("fourier coefficient: empty slot sequence");
    Complex sum{};
    for (std::size_t s = 0; s < q; ++s)
    {
        const int state = slot_states[s];
        if (state < 0 || static_cast<std::size_t>(state) >= loads.n_states())
            throw ValidationError("fourier coefficient: invalid state index " + std::to_string(state));
        sum += loads.rho()(idx(m), state) * slot_fourier_weight(dh, s, q);
    }
    const double theta = -2.0 * kPi * dh * delay / grid.period();
    return std::exp(Complex{0.0, theta}) * sum;
}

FloquetLoadScatter assemble_phi(const ModulationPattern &pattern, const LoadSet &loads, const HarmonicGrid &grid)
{
    if (!(loads.grid() == grid))
        throw GridMismatchError("assemble_phi: load set is defined on a different grid");
    return assemble_phi(pattern, loads.rho(), grid, true);
}

FloquetLoadScatter assemble_phi(const ModulationPattern &pattern, const CMatrix &rho_table, const HarmonicGrid &grid,
                                bool use_delays)
{
    const std::size_t nh = grid.size();
    if (rho_table.rows() != idx(nh))
        throw DimensionError("assemble_phi: rho table rows do not match grid size");
    pattern.validate(static_cast<std::size_t>(rho_table.cols()), grid.period());

    const std::size_t ns = pattern.n_s();
    const std::size_t q = pattern.q();
    const auto &h = grid.harmonics();
    const int span = h.back() - h.front();

    // weights[(dh + span) * q + slot]
    std::vector<Complex> weights(static_cast<std::size_t>(2 * span + 1) * q);
    for (int dh = -span; dh <= span; ++dh)
        for (std::size_t s = 0; s < q; ++s)
            weights[static_cast<std::size_t>(dh + span) * q + s] = slot_fourier_weight(dh, s, q);

    FloquetLoadScatter phi(nh, ns);
    std::vector<Complex> slot_rho(q);
    for (std::size_t i = 0; i < ns; ++i)
    {
        const double tau = use_delays ? pattern.delays[i] : 0.0;
        for (std::size_t m = 0; m < nh; ++m)
        {
            for (std::size_t s = 0; s < q; ++s)
                slot_rho[s] = rho_table(idx(m), pattern.states(idx(i), idx(s)));
            for (std::size_t n = 0; n < nh; ++n)
            {
                const int dh = h[n] - h[m];
                const Complex *w = &weights[static_cast<std::size_t>(dh + span) * q];
                Complex sum{};
                for (std::size_t s = 0; s < q; ++s)
                    sum += slot_rho[s] * w[s];
                if (tau != 0.0 && dh != 0)
                    sum *= std::exp(Complex{0.0, -2.0 * kPi * dh * tau / grid.period()});
                phi(n, m, i) = sum;
            }
        }
    }
    return phi;
}

namespace resolvent
{

std::vector<std::size_t> all_harmonics(std::size_t n_harmonics)
{
    std::vector<std::size_t> out(n_harmonics);
    for (std::size_t k = 0; k < n_harmonics; ++k)
        out[k] = k;
    return out;
}

CMatrix system_matrix(std::span<const HarmonicBlocks> blocks, const FloquetLoadScatter &phi)
{
    const std::size_t nh = phi.n_harmonics();
    const std::size_t ns = phi.n_s();
    CMatrix x = CMatrix::Identity(idx(nh * ns), idx(nh * ns));
    for (std::size_t n = 0; n < nh; ++n)
        for (std::size_t m = 0; m < nh; ++m)
        {
            const CMatrix &gamma = blocks[m].gamma;
            for (std::size_t i = 0; i < ns; ++i)
            {
                const Complex f = phi(n, m, i);
                if (f == Complex{})
                    continue;
                x.row(idx(n * ns + i)).segment(idx(m * ns), idx(ns)) -= f * gamma.row(idx(i));
            }
        }
    return x;
}

CMatrix drive(std::span<const HarmonicBlocks> blocks, const FloquetLoadScatter &phi,
              std::span<const std::size_t> input_harmonics)
{
    const std::size_t nh = phi.n_harmonics();
    const std::size_t ns = phi.n_s();
    const std::size_t nt = blocks.front().n_t();
    CMatrix z(idx(nh * ns), idx(input_harmonics.size() * nt));
    for (std::size_t j = 0; j < input_harmonics.size(); ++j)
    {
        const std::size_t m = input_harmonics[j];
        const CMatrix &b = blocks[m].b;
        for (std::size_t n = 0; n < nh; ++n)
            for (std::size_t i = 0; i < ns; ++i)
                z.row(idx(n * ns + i)).segment(idx(j * nt), idx(nt)) = phi(n, m, i) * b.row(idx(i));
    }
    return z;
}

Eigen::PartialPivLU<CMatrix> factor(const CMatrix &x)
{
    Eigen::PartialPivLU<CMatrix> lu(x);
    const double rc = lu.rcond();
    if (!(rc * kMaxResolventCondition >= 1.0))
        throw IllConditionedError("resolvent is singular or ill-conditioned", rc > 0.0 ? 1.0 / rc : INFINITY);
    return lu;
}

CMatrix combine(std::span<const HarmonicBlocks> blocks, const CMatrix &y,
                std::span<const std::size_t> input_harmonics)
{
    const std::size_t nh = blocks.size();
    const std::size_t nr = blocks.front().n_r();
    const std::size_t nt = blocks.front().n_t();
    const std::size_t ns = blocks.front().n_s();
    CMatrix h(idx(nh * nr), idx(input_harmonics.size() * nt));
    for (std::size_t n = 0; n < nh; ++n)
        h.middleRows(idx(n * nr), idx(nr)).noalias() = blocks[n].a * y.middleRows(idx(n * ns), idx(ns));
    for (std::size_t j = 0; j < input_harmonics.size(); ++j)
    {
        const std::size_t m = input_harmonics[j];
        h.block(idx(m * nr), idx(j * nt), idx(nr), idx(nt)) += blocks[m].hd;
    }
    return h;
}

} // namespace resolvent

FloquetChannel end_to_end_channel(std::span<const HarmonicBlocks> blocks, const FloquetLoadScatter &phi,
                                  const HarmonicGrid &grid)
{
    check_blocks(blocks, phi);
    if (grid.size() != blocks.size())
        throw GridMismatchError("channel: grid size does not match harmonic block count");
    const auto inputs = resolvent::all_harmonics(grid.size());
    const auto lu = resolvent::factor(resolvent::system_matrix(blocks, phi));
    const CMatrix y = lu.solve(resolvent::drive(blocks, phi, inputs));
    return FloquetChannel(grid, blocks.front().n_r(), blocks.front().n_t(), resolvent::combine(blocks, y, inputs));
}

FloquetChannel end_to_end_channel(const StaticScatterModel &model, const FloquetLoadScatter &phi)
{
    const auto blocks = model.all_blocks();
    return end_to_end_channel(blocks, phi, model.grid());
}

FloquetChannel end_to_end_channel(const StaticScatterModel &model, const FloquetLoadScatter &phi,
                                  const HarmonicGrid &retained)
{
    const auto keep = retained_indices(model.grid(), retained);
    const auto blocks = model.all_blocks();
    check_blocks(blocks, phi);
    const auto lu = resolvent::factor(resolvent::system_matrix(blocks, phi));
    const CMatrix y = lu.solve(resolvent::drive(blocks, phi, keep));
    const CMatrix full_rows = resolvent::combine(blocks, y, keep);
    const std::size_t nr = model.partition().n_r();
    CMatrix m(idx(keep.size() * nr), full_rows.cols());
    for (std::size_t a = 0; a < keep.size(); ++a)
        m.middleRows(idx(a * nr), idx(nr)) = full_rows.middleRows(idx(keep[a] * nr), idx(nr));
    return FloquetChannel(retained, nr, model.partition().n_t(), std::move(m));
}

CVector end_to_end_column(std::span<const HarmonicBlocks> blocks, const FloquetLoadScatter &phi,
                          std::size_t in_index, std::size_t tx)
{
    check_blocks(blocks, phi);
    const std::size_t nh = blocks.size();
    const std::size_t ns = phi.n_s();
    const std::size_t nr = blocks.front().n_r();
    if (in_index >= nh || tx >= blocks.front().n_t())
        throw DimensionError("channel column: input harmonic or transmit port out of range");
    const auto lu = resolvent::factor(resolvent::system_matrix(blocks, phi));
    CVector z(idx(nh * ns));
    for (std::size_t n = 0; n < nh; ++n)
        for (std::size_t i = 0; i < ns; ++i)
            z(idx(n * ns + i)) = phi(n, in_index, i) * blocks[in_index].b(idx(i), idx(tx));
    const CVector y = lu.solve(z);
    CVector col(idx(nh * nr));
    for (std::size_t n = 0; n < nh; ++n)
        col.segment(idx(n * nr), idx(nr)) = blocks[n].a * y.segment(idx(n * ns), idx(ns));
    col.segment(idx(in_index * nr), idx(nr)) += blocks[in_index].hd.col(idx(tx));
    return col;
}

StaticScatterModel truncate(const StaticScatterModel &model, const HarmonicGrid &retained)
{
    const auto keep = retained_indices(model.grid(), retained);
    std::vector<CMatrix> mats;
    mats.reserve(keep.size());
    for (std::size_t k : keep)
        mats.push_back(model.matrix(k));
    return StaticScatterModel(retained, model.partition(), std::move(mats), model.reciprocal());
}

LoadSet truncate(const LoadSet &loads, const HarmonicGrid &retained)
{
    const auto keep = retained_indices(loads.grid(), retained);
    CMatrix rho(idx(keep.size()), loads.rho().cols());
    for (std::size_t r = 0; r < keep.size(); ++r)
        rho.row(idx(r)) = loads.rho().row(idx(keep[r]));
    return LoadSet(retained, std::move(rho));
}

FloquetChannel truncate(const FloquetChannel &channel, const HarmonicGrid &retained)
{
    const auto keep = retained_indices(channel.grid(), retained);
    const std::size_t nr = channel.n_r();
    const std::size_t nt = channel.n_t();
    CMatrix m(idx(keep.size() * nr), idx(keep.size() * nt));
    for (std::size_t a = 0; a < keep.size(); ++a)
        for (std::size_t b = 0; b < keep.size(); ++b)
            m.block(idx(a * nr), idx(b * nt), idx(nr), idx(nt)) = channel.block_at(keep[a], keep[b]);
    return FloquetChannel(retained, nr, nt, std::move(m));
}

} // namespace floquet
