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

#include "floquet/estimation.hpp"
#include "floquet/scenario.hpp"

namespace floquet::test
{

// Small scenario with ground-truth grid = retained grid.
inline ScenarioConfig tiny_config(std::size_t harmonics, std::size_t ns, std::size_t ant, std::uint64_t seed)
{
    ScenarioConfig c;
    c.gt_harmonics = harmonics;
    c.retained_harmonics = harmonics;
    c.n_t = ant;
    c.n_r = ant;
    c.n_s = ns;
    c.n_states = 4;
    c.q = 3;
    c.seed = seed;
    return c;
}

inline double rel_err(const CMatrix &a, const CMatrix &b) { return (a - b).norm() / std::max(b.norm(), 1e-300); }

inline ProxyParams random_proxy(Rng &rng, std::size_t nr, std::size_t nt, std::size_t ns, std::size_t p, bool mc)
{
    auto rnd = [&](Eigen::Index r, Eigen::Index c, double s) {
        CMatrix m(r, c);
        for (Eigen::Index j = 0; j < c; ++j)
            for (Eigen::Index i = 0; i < r; ++i)
                m(i, j) = s * complex_normal(rng);
        return m;
    };
    ProxyParams t;
    t.hd = rnd(static_cast<Eigen::Index>(nr), static_cast<Eigen::Index>(nt), 0.3);
    t.a = rnd(static_cast<Eigen::Index>(nr), static_cast<Eigen::Index>(ns), 0.3);
    t.gamma = mc ? rnd(static_cast<Eigen::Index>(ns), static_cast<Eigen::Index>(ns), 0.15)
                 : CMatrix::Zero(static_cast<Eigen::Index>(ns), static_cast<Eigen::Index>(ns));
    t.b = rnd(static_cast<Eigen::Index>(ns), static_cast<Eigen::Index>(nt), 0.3);
    t.rho.resize(static_cast<Eigen::Index>(p));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (Eigen::Index k = 0; k < t.rho.size(); ++k)
        t.rho(k) = std::polar(0.5 + 0.4 * u(rng), 2.0 * kPi * u(rng));
    t.mc_aware = mc;
    return t;
}

// Q = 1 channel of one harmonic's proxy parameters under static states, evaluated through the
// Floquet core on a single-harmonic grid.
inline CMatrix static_channel(const ProxyParams &theta, const Eigen::VectorXi &states)
{
    const auto grid = HarmonicGrid::symmetric(1e9, 1e7, 1);
    const std::vector<HarmonicBlocks> blocks{theta.blocks()};
    const CMatrix rho = theta.rho.transpose();
    Eigen::MatrixXi c = states;
    const auto phi = assemble_phi(ModulationPattern(c), rho, grid);
    return end_to_end_channel(blocks, phi, grid).matrix();
}

inline Eigen::VectorXi random_static_states(Rng &rng, std::size_t ns, std::size_t p)
{
    Eigen::VectorXi c(static_cast<Eigen::Index>(ns));
    for (Eigen::Index i = 0; i < c.size(); ++i)
        c(i) = static_cast<int>(rng() % p);
    return c;
}

} // namespace floquet::test
