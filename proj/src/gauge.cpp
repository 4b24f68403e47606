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

#include "floquet/gauge.hpp"

#include <cmath>
#include <sstream>

#include "floquet/rng.hpp"

namespace floquet
{

namespace
{

using Index = Eigen::Index;

[[noreturn]] void fail(GaugeConstraint c, const std::string &what)
{
    throw GaugeConstraintError(c, "inadmissible gauge (" + to_string(c) + "): " + what);
}

// (I - mu Gamma)^-1 with the admissibility condition check.
CMatrix mobius_resolvent(const CMatrix &gamma, Complex mu, double max_condition, double *condition = nullptr)
{
    const Index n = gamma.rows();
    const CMatrix m = CMatrix::Identity(n, n) - mu * gamma;
    Eigen::PartialPivLU<CMatrix> lu(m);
    const double rc = lu.rcond();
    if (condition)
        *condition = rc > 0.0 ? 1.0 / rc : INFINITY;
    if (!(rc * max_condition >= 1.0))
        fail(GaugeConstraint::mobius_resolvent, "I - mu*Gamma is singular or ill-conditioned");
    return lu.inverse();
}

} // namespace

void ProxyParams::validate() const
{
    const Index nr = hd.rows(), nt = hd.cols(), ns = gamma.rows();
    if (nr < 1 || nt < 1 || ns < 1)
        throw DimensionError("proxy params: empty blocks");
    if (gamma.cols() != ns)
        throw DimensionError("proxy params: Gamma must be square");
    if (a.rows() != nr || a.cols() != ns)
        throw DimensionError("proxy params: A must be N_R x N_S");
    if (b.rows() != ns || b.cols() != nt)
        throw DimensionError("proxy params: B must be N_S x N_T");
    if (rho.size() < 1)
        throw DimensionError("proxy params: at least one load state required");
    if (!mc_aware && gamma.cwiseAbs().maxCoeff() != 0.0)
        throw ValidationError("proxy params: MC-unaware parameters must have Gamma identically zero");
}

ProxyParams ProxyParams::from_blocks(const HarmonicBlocks &blocks, CVector rho, bool mc_aware)
{
    ProxyParams p{blocks.hd, blocks.a, blocks.gamma, blocks.b, std::move(rho), mc_aware};
    if (!mc_aware)
        p.gamma.setZero();
    return p;
}

ProxySet::ProxySet(HarmonicGrid grid, std::vector<ProxyParams> params) : grid_(std::move(grid)), params_(std::move(params))
{
    if (params_.size() != grid_.size())
        throw DimensionError("proxy set: " + std::to_string(params_.size()) + " parameter tuples for " +
                             std::to_string(grid_.size()) + " harmonics");
    const auto &p0 = params_.front();
    for (const auto &p : params_)
    {
        p.validate();
        if (p.n_t() != p0.n_t() || p.n_r() != p0.n_r() || p.n_s() != p0.n_s() || p.n_states() != p0.n_states())
            throw DimensionError("proxy set: dimensions differ across harmonics");
        if (p.mc_aware != p0.mc_aware)
            throw ValidationError("proxy set: mixed MC-aware and MC-unaware harmonics");
    }
}

std::vector<HarmonicBlocks> ProxySet::blocks() const
{
    std::vector<HarmonicBlocks> out;
    out.reserve(params_.size());
    for (const auto &p : params_)
        out.push_back(p.blocks());
    return out;
}

CMatrix ProxySet::rho_table() const
{
    CMatrix t(static_cast<Index>(params_.size()), static_cast<Index>(n_states()));
    for (std::size_t h = 0; h < params_.size(); ++h)
        t.row(static_cast<Index>(h)) = params_[h].rho.transpose();
    return t;
}

GaugeParams GaugeParams::identity(std::size_t n_s, GaugeVariant variant)
{
    return GaugeParams{CVector::Ones(static_cast<Index>(n_s)), Complex{1.0, 0.0}, Complex{0.0, 0.0}, variant};
}

void GaugeParams::write_coordinates(double *out) const
{
    for (Index i = 0; i < d.size(); ++i)
    {
        *out++ = d(i).real();
        *out++ = d(i).imag();
    }
    *out++ = gamma.real();
    *out++ = gamma.imag();
    *out++ = third.real();
    *out++ = third.imag();
}

GaugeParams GaugeParams::from_coordinates(const double *in, std::size_t n_s, GaugeVariant variant)
{
    GaugeParams g;
    g.variant = variant;
    g.d.resize(static_cast<Index>(n_s));
    for (std::size_t i = 0; i < n_s; ++i, in += 2)
        g.d(static_cast<Index>(i)) = Complex{in[0], in[1]};
    g.gamma = Complex{in[0], in[1]};
    g.third = Complex{in[2], in[3]};
    return g;
}

std::string to_string(GaugeConstraint c)
{
    switch (c)
    {
    case GaugeConstraint::ds_singular:
        return "ds_singular";
    case GaugeConstraint::cs_zero:
        return "cs_zero";
    case GaugeConstraint::mobius_radius:
        return "mobius_radius";
    case GaugeConstraint::mobius_pole:
        return "mobius_pole";
    case GaugeConstraint::mobius_resolvent:
        return "mobius_resolvent";
    case GaugeConstraint::variant_mismatch:
        return "variant_mismatch";
    case GaugeConstraint::dimension_mismatch:
        return "dimension_mismatch";
    }
    return "unknown";
}

std::string AdmissibilityReport::summary() const
{
    if (ok())
        return "admissible";
    std::ostringstream os;
    for (std::size_t k = 0; k < violations.size(); ++k)
    {
        const auto &v = violations[k];
        if (k)
            os << "; ";
        os << to_string(v.constraint) << " at harmonic index " << v.harmonic_index << " (element " << v.element
           << ", value " << v.value << ")";
    }
    return os.str();
}

AdmissibilityReport check_admissible(const ProxyParams &theta, const GaugeParams &phi, std::size_t harmonic_index,
                                     const AdmissibilityMargins &margins)
{
    AdmissibilityReport report;
    auto add = [&](GaugeConstraint c, std::size_t element, double value) {
        report.violations.push_back(AdmissibilityViolation{c, harmonic_index, element, value});
    };
    if (static_cast<std::size_t>(phi.d.size()) != theta.n_s())
    {
        add(GaugeConstraint::dimension_mismatch, 0, static_cast<double>(phi.d.size()));
        return report;
    }
    if ((phi.variant == GaugeVariant::mobius) != theta.mc_aware)
        add(GaugeConstraint::variant_mismatch, 0, 0.0);
    for (Index i = 0; i < phi.d.size(); ++i)
        if (!(std::abs(phi.d(i)) >= margins.min_abs_d))
            add(GaugeConstraint::ds_singular, static_cast<std::size_t>(i), std::abs(phi.d(i)));
    if (!(std::abs(phi.gamma) >= margins.min_abs_gamma))
        add(GaugeConstraint::cs_zero, 0, std::abs(phi.gamma));
    if (phi.variant == GaugeVariant::mobius && report.ok())
    {
        const Complex mu = phi.third;
        if (!(std::abs(mu) <= margins.max_abs_mu))
            add(GaugeConstraint::mobius_radius, 0, std::abs(mu));
        // Moebius acts on the DS-CS intermediate.
        const CVector rho2 = phi.gamma * theta.rho;
        for (Index p = 0; p < rho2.size(); ++p)
        {
            const double pole = std::abs(1.0 - std::conj(mu) * rho2(p));
            if (!(pole >= margins.min_abs_mobius_pole))
                add(GaugeConstraint::mobius_pole, static_cast<std::size_t>(p), pole);
        }
        const CMatrix gamma2 =
            (phi.d.asDiagonal() * theta.gamma * phi.d.cwiseInverse().asDiagonal()) / phi.gamma;
        const Index n = gamma2.rows();
        Eigen::PartialPivLU<CMatrix> lu(CMatrix::Identity(n, n) - mu * gamma2);
        const double rc = lu.rcond();
        if (!(rc * margins.max_condition >= 1.0))
            add(GaugeConstraint::mobius_resolvent, 0, rc > 0.0 ? 1.0 / rc : INFINITY);
    }
    return report;
}

ProxyParams apply_ds(const ProxyParams &theta, const CVector &d)
{
    if (static_cast<std::size_t>(d.size()) != theta.n_s())
        fail(GaugeConstraint::dimension_mismatch, "d has " + std::to_string(d.size()) + " entries for " +
                                                      std::to_string(theta.n_s()) + " tunable ports");
    const AdmissibilityMargins margins;
    for (Index i = 0; i < d.size(); ++i)
        if (!(std::abs(d(i)) >= margins.min_abs_d))
            fail(GaugeConstraint::ds_singular, "d_" + std::to_string(i) + " is (numerically) zero");
    ProxyParams out = theta;
    const CVector inv = d.cwiseInverse();
    out.a = theta.a * inv.asDiagonal();
    out.b = d.asDiagonal() * theta.b;
    out.gamma = d.asDiagonal() * theta.gamma * inv.asDiagonal();
    return out;
}

ProxyParams apply_cs(const ProxyParams &theta, Complex gamma)
{
    if (!(std::abs(gamma) >= AdmissibilityMargins{}.min_abs_gamma))
        fail(GaugeConstraint::cs_zero, "complex scale is (numerically) zero");
    ProxyParams out = theta;
    out.a = theta.a / gamma;
    out.gamma = theta.gamma / gamma;
    out.rho = gamma * theta.rho;
    return out;
}

Complex mobius_map(Complex rho, Complex mu) { return (rho - mu) / (1.0 - std::conj(mu) * rho); }

ProxyParams apply_mobius(const ProxyParams &theta, Complex mu)
{
    if (!theta.mc_aware)
        fail(GaugeConstraint::variant_mismatch, "Moebius gauge requires MC-aware parameters");
    const AdmissibilityMargins margins;
    if (!(std::abs(mu) <= margins.max_abs_mu))
        fail(GaugeConstraint::mobius_radius, "|mu| = " + std::to_string(std::abs(mu)) + " exceeds " +
                                                 std::to_string(margins.max_abs_mu));
    for (Index p = 0; p < theta.rho.size(); ++p)
        if (!(std::abs(1.0 - std::conj(mu) * theta.rho(p)) >= margins.min_abs_mobius_pole))
            fail(GaugeConstraint::mobius_pole, "1 - conj(mu)*rho_" + std::to_string(p) + " vanishes");
    const CMatrix f = mobius_resolvent(theta.gamma, mu, margins.max_condition);
    const double k = std::sqrt(1.0 - std::norm(mu));
    const Index ns = theta.gamma.rows();

    ProxyParams out = theta;
    const CMatrix af = theta.a * f;
    out.hd = theta.hd + mu * (af * theta.b);
    out.a = k * af;
    out.b = k * (f * theta.b);
    out.gamma = (theta.gamma - std::conj(mu) * CMatrix::Identity(ns, ns)) * f;
    for (Index p = 0; p < theta.rho.size(); ++p)
        out.rho(p) = mobius_map(theta.rho(p), mu);
    return out;
}

ProxyParams apply_affine(const ProxyParams &theta, Complex eta)
{
    if (theta.mc_aware)
        throw VariantMismatchError("affine-shift gauge requires MC-unaware parameters (Gamma = 0)");
    ProxyParams out = theta;
    out.hd = theta.hd - eta * (theta.a * theta.b);
    out.rho = theta.rho.array() + eta;
    out.gamma.setZero();
    return out;
}

ProxyParams compose(const ProxyParams &theta, const GaugeParams &phi)
{
    ProxyParams out = apply_cs(apply_ds(theta, phi.d), phi.gamma);
    if (phi.variant == GaugeVariant::mobius)
    {
        if (!theta.mc_aware)
            throw VariantMismatchError("Moebius gauge variant applied to MC-unaware parameters");
        return apply_mobius(out, phi.third);
    }
    return apply_affine(out, phi.third);
}

ProxyParams compose_inverse(const ProxyParams &theta, const GaugeParams &phi)
{
    ProxyParams out;
    if (phi.variant == GaugeVariant::mobius)
    {
        if (!theta.mc_aware)
            throw VariantMismatchError("Moebius gauge variant applied to MC-unaware parameters");
        out = apply_mobius(theta, -phi.third);
    }
    else
        out = apply_affine(theta, -phi.third);
    out = apply_cs(out, 1.0 / phi.gamma);
    return apply_ds(out, phi.d.cwiseInverse());
}

GaugeParams random_gauge(std::mt19937_64 &rng, GaugeVariant variant, double spread, std::size_t n_s)
{
    if (spread < 0.0)
        throw ValidationError("random gauge: spread must be nonnegative");
    const AdmissibilityMargins margins;
    GaugeParams g = GaugeParams::identity(n_s, variant);
    if (spread == 0.0)
        return g;
    constexpr int max_retries = 1000;
    auto draw_nonzero = [&](double min_abs) {
        for (int attempt = 0; attempt < max_retries; ++attempt)
        {
            const Complex z = 1.0 + spread * complex_normal(rng);
            if (std::abs(z) >= min_abs)
                return z;
        }
        return Complex{1.0, 0.0};
    };
    for (std::size_t i = 0; i < n_s; ++i)
        g.d(static_cast<Index>(i)) = draw_nonzero(margins.min_abs_d);
    g.gamma = draw_nonzero(margins.min_abs_gamma);
    g.third = spread * complex_normal(rng);
    if (variant == GaugeVariant::mobius && std::abs(g.third) > margins.max_abs_mu)
        g.third *= margins.max_abs_mu / std::abs(g.third);
    return g;
}

} // namespace floquet
