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

// Independent reference computations for the closed-form kernels.

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "floquet/floquet_core.hpp"

namespace floquet::oracle
{

// (1/T) * integral over one period of rho(state(t - tau)) exp(-j 2 pi dh t / T), with T = 1 and
// the period split at every switching instant so each piece is smooth. `rho` holds one value per slot.
inline Complex quadrature_coefficient(const std::vector<Complex> &rho, double tau, int dh)
{
    const std::size_t q = rho.size();
    std::vector<double> cuts{0.0, 1.0};
    for (std::size_t s = 0; s < q; ++s)
        cuts.push_back(std::fmod(static_cast<double>(s) / static_cast<double>(q) + tau, 1.0));
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    auto slot_at = [&](double t) {
        double u = std::fmod(t - tau, 1.0);
        if (u < 0.0)
            u += 1.0;
        return std::min(static_cast<std::size_t>(u * static_cast<double>(q)), q - 1);
    };
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    Complex total{};
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
    {
        const double a = cuts[k];
        const double b = cuts[k + 1];
        if (b - a < 1e-15)
            continue;
        const Complex r = rho[slot_at(0.5 * (a + b))];
        const double w = 2.0 * kPi * dh;
        auto re = [&](double t) { return (r * std::exp(Complex{0.0, -w * t})).real(); };
        auto im = [&](double t) { return (r * std::exp(Complex{0.0, -w * t})).imag(); };
        total += Complex{GK::integrate(re, a, b, 12, 1e-13), GK::integrate(im, a, b, 12, 1e-13)};
    }
    return total;
}

inline CMatrix blkdiag(const std::vector<CMatrix> &blocks)
{
    Eigen::Index rows = 0;
    Eigen::Index cols = 0;
    for (const auto &b : blocks)
    {
        rows += b.rows();
        cols += b.cols();
    }
    CMatrix out = CMatrix::Zero(rows, cols);
    Eigen::Index r = 0;
    Eigen::Index c = 0;
    for (const auto &b : blocks)
    {
        out.block(r, c, b.rows(), b.cols()) = b;
        r += b.rows();
        c += b.cols();
    }
    return out;
}

// H = Hd + A * sum_{n < terms} (Phi Gamma)^n * Phi * B on dense stacked matrices.
inline CMatrix neumann_channel(const std::vector<HarmonicBlocks> &blocks, const FloquetLoadScatter &phi,
                               int terms = 50)
{
    std::vector<CMatrix> hd, a, g, b;
    for (const auto &k : blocks)
    {
        hd.push_back(k.hd);
        a.push_back(k.a);
        g.push_back(k.gamma);
        b.push_back(k.b);
    }
    const CMatrix p = phi.dense();
    const CMatrix pg = p * blkdiag(g);
    CMatrix term = p * blkdiag(b);
    CMatrix sum = term;
    for (int n = 1; n < terms; ++n)
    {
        term = pg * term;
        sum += term;
    }
    return blkdiag(hd) + blkdiag(a) * sum;
}

} // namespace floquet::oracle
