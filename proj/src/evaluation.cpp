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

#include "floquet/evaluation.hpp"

#include <cmath>
#include <limits>

namespace floquet
{

namespace
{

using Index = Eigen::Index;

Index idx(std::size_t v) { return static_cast<Index>(v); }

// Population SD of the real scalars of a projected stack.
double stack_sd(std::span<const CMatrix> parts, bool complex_values)
{
    double sum = 0.0;
    double count = 0.0;
    for (const auto &m : parts)
    {
        sum += m.real().sum();
        count += static_cast<double>(m.size());
        if (complex_values)
        {
            sum += m.imag().sum();
            count += static_cast<double>(m.size());
        }
    }
    const double mean = sum / count;
    double ss = 0.0;
    for (const auto &m : parts)
    {
        ss += (m.real().array() - mean).square().sum();
        if (complex_values)
            ss += (m.imag().array() - mean).square().sum();
    }
    return std::sqrt(ss / count);
}

double to_db(double power)
{
    return power > 0.0 ? 10.0 * std::log10(power) : -std::numeric_limits<double>::infinity();
}

} // namespace

ChannelModel::ChannelModel(HarmonicGrid grid, std::vector<HarmonicBlocks> blocks, CMatrix rho, std::vector<double> delays)
    : grid_(std::move(grid)), blocks_(std::move(blocks)), rho_(std::move(rho)), delays_(std::move(delays))
{
}

ChannelModel ChannelModel::from_proxies(const ProxySet &proxies)
{
    return ChannelModel(proxies.grid(), proxies.blocks(), proxies.rho_table(),
                        std::vector<double>(proxies.n_s(), 0.0));
}

ChannelModel ChannelModel::ground_truth(const Scenario &scenario, const HarmonicGrid &grid, bool mc_aware)
{
    return ChannelModel(grid, truth_blocks(scenario, grid, mc_aware), truncate(scenario.loads, grid).rho(),
                        scenario.delays);
}

FloquetChannel ChannelModel::predict(const Eigen::MatrixXi &states) const
{
    const FloquetLoadScatter phi = assemble_phi(ModulationPattern(states, delays_), rho_, grid_, true);
    return end_to_end_channel(std::span<const HarmonicBlocks>(blocks_), phi, grid_);
}

Complex ChannelModel::entry(const Eigen::MatrixXi &states, int h_out, std::size_t rx, std::size_t tx) const
{
    const FloquetLoadScatter phi = assemble_phi(ModulationPattern(states, delays_), rho_, grid_, true);
    const CVector col = end_to_end_column(blocks_, phi, grid_.fundamental_index(), tx);
    return col(idx(grid_.index_of(h_out) * blocks_.front().n_r() + rx));
}

ZetaReport zeta(std::span<const FloquetChannel> truth, std::span<const FloquetChannel> predicted, MeasurementMode mode)
{
    if (truth.size() != predicted.size())
        throw DimensionError("zeta: truth and prediction lists differ in length");
    if (truth.size() < 2)
        throw ValidationError("zeta: at least two patterns required");
    std::vector<CMatrix> t, e;
    t.reserve(truth.size());
    e.reserve(truth.size());
    ZetaReport rep;
    rep.mode = mode;
    rep.patterns = truth.size();
    for (std::size_t k = 0; k < truth.size(); ++k)
    {
        const Observation ot = project(mode, truth[k]);
        const Observation op = project(mode, predicted[k]);
        if (ot.data.rows() != op.data.rows() || ot.data.cols() != op.data.cols())
            throw DimensionError("zeta: shape mismatch at pattern " + std::to_string(k));
        t.push_back(ot.data);
        e.push_back(op.data - ot.data);
        rep.error_norms.push_back(e.back().norm());
    }
    const bool cplx = mode != MeasurementMode::m2;
    const double sd_t = stack_sd(t, cplx);
    if (!(sd_t > 0.0))
        throw NumericalError("zeta: truth stack has zero spread");
    const double sd_e = stack_sd(e, cplx);
    if (sd_e == 0.0)
    {
        rep.infinite = true;
        rep.zeta_linear = std::numeric_limits<double>::infinity();
        rep.zeta_db = std::numeric_limits<double>::infinity();
        return rep;
    }
    rep.zeta_linear = sd_t / sd_e;
    rep.zeta_db = 20.0 * std::log10(rep.zeta_linear);
    return rep;
}

std::vector<Eigen::MatrixXi> evaluation_states(std::size_t count, std::size_t n_s, std::size_t q, std::size_t p,
                                               std::uint64_t seed)
{
    Rng rng(derive_seed(seed, "eval"));
    std::vector<Eigen::MatrixXi> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k)
        out.push_back(random_states(n_s, q, p, rng));
    return out;
}

ZetaReport evaluate_zeta(const ChannelModel &truth, const ChannelModel &model, MeasurementMode mode, std::size_t q,
                         std::uint64_t seed, std::size_t count, Execution exec)
{
    if (!(truth.grid() == model.grid()))
        throw GridMismatchError("zeta: truth and model grids differ");
    const auto states = evaluation_states(count, truth.n_s(), q, truth.n_states(), seed);
    std::vector<FloquetChannel> t(count, FloquetChannel(truth.grid(), 0, 0, CMatrix()));
    std::vector<FloquetChannel> p = t;
    for_each_index(count, exec, [&](std::size_t k) {
        t[k] = truth.predict(states[k]);
        p[k] = model.predict(states[k]);
    });
    return zeta(t, p, mode);
}

namespace
{

void check_gain_config(const ChannelModel &model, const ChannelModel &truth, const GainConfig &c)
{
    if (c.q < 1)
        throw ValidationError("gain: Q must be at least 1");
    if (!model.grid().contains(c.target_harmonic))
        throw GridMismatchError("gain: target harmonic " + std::to_string(c.target_harmonic) +
                                " is not in the model grid");
    if (!truth.grid().contains(c.target_harmonic))
        throw GridMismatchError("gain: target harmonic is not in the truth grid");
    if (model.n_s() != truth.n_s() || model.n_states() > truth.n_states())
        throw DimensionError("gain: model and truth disagree on N_S, or the model has states the truth lacks");
}

GainResult finish(const ChannelModel &truth, const GainConfig &c, Eigen::MatrixXi best,
                  double best_obj)
{
    GainResult r;
    r.predicted_db = to_db(best_obj);
    r.true_db = to_db(std::norm(truth.entry(best, c.target_harmonic, c.rx, c.tx)));
    r.states = std::move(best);
    return r;
}

} // namespace

GainResult coordinate_ascent_gain(const ChannelModel &model, const ChannelModel &truth, const GainConfig &c)
{
    check_gain_config(model, truth, c);
    const std::size_t ns = model.n_s();
    const int p = static_cast<int>(model.n_states());
    const std::size_t restarts = std::max<std::size_t>(c.restarts, 1);
    auto objective = [&](const Eigen::MatrixXi &s) { return std::norm(model.entry(s, c.target_harmonic, c.rx, c.tx)); };

    Eigen::MatrixXi best;
    double best_obj = -1.0;
    std::vector<std::vector<double>> traces;
    for (std::size_t r = 0; r < restarts; ++r)
    {
        Rng rng(derive_seed(c.seed, static_cast<std::uint64_t>(r)));
        Eigen::MatrixXi s = random_states(ns, c.q, static_cast<std::size_t>(p), rng);
        double cur = objective(s);
        std::vector<double> trace{cur};
        for (;;)
        {
            bool improved = false;
            for (std::size_t i = 0; i < ns; ++i)
                for (std::size_t q = 0; q < c.q; ++q)
                {
                    const int keep = s(idx(i), idx(q));
                    int arg = keep;
                    double val = cur;
                    for (int state = 0; state < p; ++state)
                    {
                        if (state == keep)
                            continue;
                        s(idx(i), idx(q)) = state;
                        const double o = objective(s);
                        if (o > val || (o == val && state < arg))
                        {
                            val = o;
                            arg = state;
                        }
                    }
                    s(idx(i), idx(q)) = arg;
                    if (val > cur)
                        improved = true;
                    cur = val;
                }
            trace.push_back(cur);
            if (!improved)
                break;
        }
        if (cur > best_obj)
        {
            best_obj = cur;
            best = s;
        }
        traces.push_back(std::move(trace));
    }
    GainResult res = finish(truth, c, std::move(best), best_obj);
    res.traces = std::move(traces);
    res.restarts = restarts;
    return res;
}

GainResult exhaustive_gain(const ChannelModel &model, const ChannelModel &truth, const GainConfig &c)
{
    check_gain_config(model, truth, c);
    const std::size_t ns = model.n_s();
    const std::size_t p = model.n_states();
    const std::size_t cells = ns * c.q;
    double total = std::pow(static_cast<double>(p), static_cast<double>(cells));
    if (total > 1e7)
        throw ValidationError("exhaustive gain: search space too large");
    const std::size_t n = static_cast<std::size_t>(total);
    Eigen::MatrixXi s = Eigen::MatrixXi::Zero(idx(ns), idx(c.q));
    Eigen::MatrixXi best = s;
    double best_obj = -1.0;
    for (std::size_t code = 0; code < n; ++code)
    {
        std::size_t rest = code;
        // Cell (i, q) in element-major order is the most significant digit.
        for (std::size_t cell = cells; cell-- > 0;)
        {
            s(idx(cell / c.q), idx(cell % c.q)) = static_cast<int>(rest % p);
            rest /= p;
        }
        const double o = std::norm(model.entry(s, c.target_harmonic, c.rx, c.tx));
        if (o > best_obj)
        {
            best_obj = o;
            best = s;
        }
    }
    GainResult res = finish(truth, c, std::move(best), best_obj);
    res.restarts = 0;
    return res;
}

} // namespace floquet
