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

#include "floquet/estimation.hpp"

#include <algorithm>
#include <cmath>

namespace floquet
{

namespace
{

using Index = Eigen::Index;

Index idx(std::size_t v) { return static_cast<Index>(v); }

constexpr double kSmoothing = 1e-12;

double smooth_abs(Complex z) { return std::sqrt(std::norm(z) + kSmoothing * kSmoothing); }
double smooth_abs(double r) { return std::sqrt(r * r + kSmoothing * kSmoothing); }

// <G, X> = sum conj(G) .* X
Complex inner(const CMatrix &g, const CMatrix &x) { return (g.conjugate().cwiseProduct(x)).sum(); }

// Gradient of the loss with respect to the fields of one (composed) proxy.
struct ProxyGrad
{
    CMatrix hd, a, gamma, b;
    CVector rho;

    ProxyGrad() = default;
    ProxyGrad(std::size_t nr, std::size_t nt, std::size_t ns, std::size_t p)
        : hd(CMatrix::Zero(idx(nr), idx(nt))), a(CMatrix::Zero(idx(nr), idx(ns))), gamma(CMatrix::Zero(idx(ns), idx(ns))),
          b(CMatrix::Zero(idx(ns), idx(nt))), rho(CVector::Zero(idx(p)))
    {
    }

    void add(const ProxyGrad &o)
    {
        hd += o.hd;
        a += o.a;
        gamma += o.gamma;
        b += o.b;
        rho += o.rho;
    }
};

// Slot weights w_s(dh) for dh in [-(nh_span), nh_span].
class WeightTable
{
  public:
    WeightTable(const HarmonicGrid &grid, std::size_t q) : q_(q), offset_(2 * grid.max_harmonic())
    {
        const int span = 2 * offset_ + 1;
        w_.resize(static_cast<std::size_t>(span) * q);
        for (int dh = -offset_; dh <= offset_; ++dh)
            for (std::size_t s = 0; s < q; ++s)
                w_[static_cast<std::size_t>(dh + offset_) * q + s] = slot_fourier_weight(dh, s, q);
    }
    Complex operator()(int dh, std::size_t s) const { return w_[static_cast<std::size_t>(dh + offset_) * q_ + s]; }

  private:
    std::size_t q_;
    int offset_;
    std::vector<Complex> w_;
};

// Normalized l1 misfit of one projected prediction; optionally writes dL/dpred (unscaled by 1/K).
double misfit(MeasurementMode mode, const CMatrix &pred, const CMatrix &meas, CMatrix *grad)
{
    double norm = 0.0;
    if (mode == MeasurementMode::m2)
        norm = meas.real().cwiseAbs().sum();
    else
        norm = meas.cwiseAbs().sum();
    if (!(norm > 0.0))
        throw NumericalError("measurement with zero l1 norm");
    double err = 0.0;
    if (grad)
        grad->resize(pred.rows(), pred.cols());
    for (Index c = 0; c < pred.cols(); ++c)
        for (Index r = 0; r < pred.rows(); ++r)
        {
            if (mode == MeasurementMode::m2)
            {
                const double res = std::abs(pred(r, c)) - meas(r, c).real();
                err += std::abs(res);
                if (grad)
                    (*grad)(r, c) = (res / smooth_abs(res)) * pred(r, c) / smooth_abs(pred(r, c)) / norm;
            }
            else
            {
                const Complex e = pred(r, c) - meas(r, c);
                err += std::abs(e);
                if (grad)
                    (*grad)(r, c) = e / smooth_abs(e) / norm;
            }
        }
    return err / norm;
}

// Loss term of one record and, if requested, its gradient with respect to the composed proxies.
double record_term(std::span<const HarmonicBlocks> blocks, const CMatrix &rho_table, const HarmonicGrid &grid,
                   const WeightTable &weights, const CampaignRecord &rec, MeasurementMode mode,
                   std::vector<ProxyGrad> *grads)
{
    const std::size_t nh = grid.size();
    const std::size_t ns = blocks.front().n_s();
    const std::size_t nr = blocks.front().n_r();
    const std::size_t nt = blocks.front().n_t();
    const std::size_t f = grid.fundamental_index();

    const FloquetLoadScatter phi = assemble_phi(rec.pattern, rho_table, grid, false);
    const std::vector<std::size_t> in = mode == MeasurementMode::m1 ? std::vector<std::size_t>{f}
                                                                     : resolvent::all_harmonics(nh);
    const auto lu = resolvent::factor(resolvent::system_matrix(blocks, phi));
    const CMatrix y = lu.solve(resolvent::drive(blocks, phi, in));
    const CMatrix h = resolvent::combine(blocks, y, in);

    const Index row0 = mode == MeasurementMode::m1 ? idx(f * nr) : 0;
    const Index rows = mode == MeasurementMode::m1 ? idx(nr) : h.rows();
    CMatrix gp;
    const double term = misfit(mode, h.middleRows(row0, rows), rec.observation.data, grads ? &gp : nullptr);
    if (!grads)
        return term;

    auto &g = *grads;
    CMatrix gh = CMatrix::Zero(h.rows(), h.cols());
    gh.middleRows(row0, rows) = gp;

    for (std::size_t j = 0; j < in.size(); ++j)
        g[in[j]].hd += gh.block(idx(in[j] * nr), idx(j * nt), idx(nr), idx(nt));

    CMatrix gy(y.rows(), y.cols());
    for (std::size_t n = 0; n < nh; ++n)
    {
        const auto ghn = gh.middleRows(idx(n * nr), idx(nr));
        g[n].a.noalias() += ghn * y.middleRows(idx(n * ns), idx(ns)).adjoint();
        gy.middleRows(idx(n * ns), idx(ns)).noalias() = blocks[n].a.adjoint() * ghn;
    }
    const CMatrix gz = lu.adjoint().solve(gy);

    // W = blkdiag(B) restricted to inputs + blkdiag(Gamma) Y
    CMatrix w(y.rows(), y.cols());
    for (std::size_t m = 0; m < nh; ++m)
        w.middleRows(idx(m * ns), idx(ns)).noalias() = blocks[m].gamma * y.middleRows(idx(m * ns), idx(ns));
    for (std::size_t j = 0; j < in.size(); ++j)
        w.block(idx(in[j] * ns), idx(j * nt), idx(ns), idx(nt)) += blocks[in[j]].b;

    CMatrix v = CMatrix::Zero(y.rows(), y.cols());
    const std::size_t q = rec.pattern.q();
    const auto &hs = grid.harmonics();
    for (std::size_t n = 0; n < nh; ++n)
        for (std::size_t m = 0; m < nh; ++m)
        {
            const int dh = hs[n] - hs[m];
            if (dh != 0 && dh % static_cast<int>(q) == 0)
                continue;
            for (std::size_t i = 0; i < ns; ++i)
            {
                const Index rn = idx(n * ns + i);
                const Index rm = idx(m * ns + i);
                const Complex gphi = w.row(rm).dot(gz.row(rn));
                v.row(rm) += std::conj(phi(n, m, i)) * gz.row(rn);
                for (std::size_t s = 0; s < q; ++s)
                    g[m].rho(rec.pattern.states(idx(i), idx(s))) += std::conj(weights(dh, s)) * gphi;
            }
        }
    for (std::size_t m = 0; m < nh; ++m)
        g[m].gamma.noalias() += v.middleRows(idx(m * ns), idx(ns)) * y.middleRows(idx(m * ns), idx(ns)).adjoint();
    for (std::size_t j = 0; j < in.size(); ++j)
        g[in[j]].b += v.block(idx(in[j] * ns), idx(j * nt), idx(ns), idx(nt));
    return term;
}

// Intermediate values of one gauge composition, kept for the reverse pass.
struct GaugeTape
{
    ProxyParams t1; // after DS
    ProxyParams t2; // after CS
    ProxyParams t3; // after the third factor
    CMatrix f;      // (I - mu Gamma2)^-1 (Moebius only)
    double k = 1.0;
};

GaugeTape forward_gauge(const ProxyParams &t0, const GaugeParams &g)
{
    GaugeTape tape;
    tape.t1 = apply_ds(t0, g.d);
    tape.t2 = apply_cs(tape.t1, g.gamma);
    if (g.variant == GaugeVariant::mobius)
    {
        if (!t0.mc_aware)
            throw VariantMismatchError("Moebius gauge variant applied to MC-unaware parameters");
        tape.t3 = apply_mobius(tape.t2, g.third);
        const Index ns = tape.t2.gamma.rows();
        tape.f = (CMatrix::Identity(ns, ns) - g.third * tape.t2.gamma).inverse();
        tape.k = std::sqrt(1.0 - std::norm(g.third));
    }
    else
        tape.t3 = apply_affine(tape.t2, g.third);
    return tape;
}

// Writes (Re, Im) of the adjoints of (d, gamma, third) given gradients on the composed proxy.
void reverse_gauge(const ProxyParams &t0, const GaugeTape &tape, const GaugeParams &g, const ProxyGrad &g3,
                   double *out)
{
    const Index ns = t0.gamma.rows();
    const ProxyParams &t1 = tape.t1;
    const ProxyParams &t2 = tape.t2;

    // Third factor.
    ProxyGrad g2 = g3;
    Complex third_adj;
    if (g.variant == GaugeVariant::mobius)
    {
        const Complex mu = g.third;
        const Complex mub = std::conj(mu);
        const CMatrix &f = tape.f;
        const double k = tape.k;
        const CMatrix fb = f * t2.b;
        const CMatrix af = t2.a * f;
        Complex alpha = inner(g3.hd, af * t2.b);
        Complex beta{0.0, 0.0};
        g2.a = mub * g3.hd * fb.adjoint() + k * g3.a * f.adjoint();
        g2.b = mub * af.adjoint() * g3.hd + k * f.adjoint() * g3.b;
        CMatrix gf = mub * t2.a.adjoint() * g3.hd * t2.b.adjoint() + k * t2.a.adjoint() * g3.a +
                     k * g3.b * t2.b.adjoint() +
                     (t2.gamma - mub * CMatrix::Identity(ns, ns)).adjoint() * g3.gamma;
        const double sk = inner(g3.a, af).real() + inner(g3.b, fb).real();
        alpha += -sk * mub / (2.0 * k);
        beta += -sk * mu / (2.0 * k);
        beta += -inner(g3.gamma, f);
        alpha += inner(gf, f * t2.gamma * f);
        g2.gamma = g3.gamma * f.adjoint() + mub * f.adjoint() * gf * f.adjoint();
        for (Index p = 0; p < t2.rho.size(); ++p)
        {
            const Complex r = t2.rho(p);
            const Complex den = 1.0 - mub * r;
            const Complex d_rho = (1.0 - std::norm(mu)) / (den * den);
            const Complex d_mu = -1.0 / den;
            const Complex d_mub = (r - mu) * r / (den * den);
            const Complex gr = g3.rho(p);
            g2.rho(p) = gr * std::conj(d_rho);
            alpha += std::conj(gr) * d_mu;
            beta += std::conj(gr) * d_mub;
        }
        third_adj = std::conj(alpha) + beta;
    }
    else
    {
        const Complex etab = std::conj(g.third);
        Complex alpha = inner(g3.hd, -(t2.a * t2.b)) + g3.rho.conjugate().sum();
        g2.a = g3.a - etab * g3.hd * t2.b.adjoint();
        g2.b = g3.b - etab * t2.a.adjoint() * g3.hd;
        third_adj = std::conj(alpha);
    }

    // CS.
    const Complex gam = g.gamma;
    Complex alpha_g = inner(g2.a, -t1.a / (gam * gam)) + inner(g2.gamma, -t1.gamma / (gam * gam)) +
                      (g2.rho.conjugate().cwiseProduct(t1.rho)).sum();
    ProxyGrad g1 = g2;
    g1.a = g2.a / std::conj(gam);
    g1.gamma = g2.gamma / std::conj(gam);
    g1.rho = std::conj(gam) * g2.rho;
    const Complex gamma_adj = std::conj(alpha_g);

    // DS.
    for (Index i = 0; i < ns; ++i)
    {
        const Complex di = g.d(i);
        Complex alpha = 0.0;
        for (Index r = 0; r < t0.a.rows(); ++r)
            alpha += std::conj(g1.a(r, i)) * (-t0.a(r, i) / (di * di));
        for (Index c = 0; c < t0.b.cols(); ++c)
            alpha += std::conj(g1.b(i, c)) * t0.b(i, c);
        for (Index j = 0; j < ns; ++j)
        {
            if (j == i)
                continue;
            alpha += std::conj(g1.gamma(i, j)) * t1.gamma(i, j) / di;
            alpha -= std::conj(g1.gamma(j, i)) * t1.gamma(j, i) / di;
        }
        const Complex adj = std::conj(alpha);
        out[2 * i] = adj.real();
        out[2 * i + 1] = adj.imag();
    }
    out[2 * ns] = gamma_adj.real();
    out[2 * ns + 1] = gamma_adj.imag();
    out[2 * ns + 2] = third_adj.real();
    out[2 * ns + 3] = third_adj.imag();
}

void check_inputs(const ProxySet &proxies, std::span<const GaugeParams> gauges, const Campaign &campaign)
{
    if (gauges.size() != proxies.grid().size())
        throw DimensionError("need one gauge per retained harmonic (" + std::to_string(proxies.grid().size()) +
                             "), got " + std::to_string(gauges.size()));
    if (!(campaign.grid == proxies.grid()))
        throw GridMismatchError("campaign grid differs from the proxies' grid");
    if (campaign.records.empty())
        throw ValidationError("campaign has no records");
    if (campaign.n_t != proxies.n_t() || campaign.n_r != proxies.n_r())
        throw DimensionError("campaign antenna counts differ from the proxies'");
    const GaugeVariant variant = variant_for(proxies.mc_aware());
    for (const auto &g : gauges)
    {
        if (g.variant != variant)
            throw VariantMismatchError("gauge variant does not match the proxies' MC flag");
        if (static_cast<std::size_t>(g.d.size()) != proxies.n_s())
            throw DimensionError("gauge d length differs from N_S");
    }
}

struct Evaluation
{
    double loss = 0.0;
    std::vector<ProxyGrad> grads; // per harmonic, composed proxies
};

Evaluation evaluate(const std::vector<ProxyParams> &composed, const HarmonicGrid &grid, const Campaign &campaign,
                    bool want_grad, Execution exec)
{
    std::vector<HarmonicBlocks> blocks;
    blocks.reserve(composed.size());
    CMatrix rho_table(idx(composed.size()), composed.front().rho.size());
    for (std::size_t h = 0; h < composed.size(); ++h)
    {
        blocks.push_back(composed[h].blocks());
        rho_table.row(idx(h)) = composed[h].rho.transpose();
    }
    const std::size_t k = campaign.records.size();
    const auto &p0 = composed.front();
    const WeightTable weights(grid, std::max<std::size_t>(campaign.q, 1));
    std::vector<double> terms(k, 0.0);
    std::vector<std::vector<ProxyGrad>> per_record;
    if (want_grad)
        per_record.resize(k);
    for_each_index(k, exec, [&](std::size_t r) {
        if (want_grad)
        {
            per_record[r].assign(grid.size(), ProxyGrad(p0.n_r(), p0.n_t(), p0.n_s(), p0.n_states()));
            if (campaign.records[r].pattern.q() != campaign.q)
                throw DimensionError("campaign record slot count differs from the campaign's q");
        }
        terms[r] = record_term(blocks, rho_table, grid, weights, campaign.records[r], campaign.mode,
                               want_grad ? &per_record[r] : nullptr);
    });
    Evaluation ev;
    for (double t : terms)
        ev.loss += t;
    ev.loss /= static_cast<double>(k);
    if (want_grad)
    {
        ev.grads.assign(grid.size(), ProxyGrad(p0.n_r(), p0.n_t(), p0.n_s(), p0.n_states()));
        for (std::size_t r = 0; r < k; ++r)
            for (std::size_t h = 0; h < grid.size(); ++h)
                ev.grads[h].add(per_record[r][h]);
        const double scale = 1.0 / static_cast<double>(k);
        for (auto &g : ev.grads)
        {
            g.hd *= scale;
            g.a *= scale;
            g.gamma *= scale;
            g.b *= scale;
            g.rho *= scale;
        }
    }
    return ev;
}

} // namespace

void OptimizerConfig::validate() const
{
    if (iterations < 1)
        throw ValidationError("optimizer: iterations must be at least 1");
    if (!(lr_start > 0.0) || !(lr_end > 0.0) || lr_end > lr_start)
        throw ValidationError("optimizer: step sizes must be positive and non-increasing");
    if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0))
        throw ValidationError("optimizer: moment decay rates must lie in [0, 1)");
    if (!(epsilon > 0.0))
        throw ValidationError("optimizer: epsilon must be positive");
    if (!(weight_decay >= 0.0))
        throw ValidationError("optimizer: weight decay must be nonnegative");
    if (!(init_spread >= 0.0))
        throw ValidationError("optimizer: init spread must be nonnegative");
}

double OptimizerConfig::step_size(std::size_t t) const
{
    const double frac = static_cast<double>(t) / static_cast<double>(iterations);
    return lr_start * std::pow(lr_end / lr_start, frac);
}

Adam::Adam(const OptimizerConfig &config, std::size_t n) : config_(config), m_(n, 0.0), v_(n, 0.0) {}

void Adam::step(std::span<double> x, std::span<const double> g, std::size_t t)
{
    const double lr = config_.step_size(t);
    const double b1 = config_.beta1;
    const double b2 = config_.beta2;
    const double n = static_cast<double>(t + 1);
    const double c1 = config_.bias_correction ? 1.0 - std::pow(b1, n) : 1.0;
    const double c2 = config_.bias_correction ? 1.0 - std::pow(b2, n) : 1.0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        const double gi = g[i] + config_.weight_decay * x[i];
        m_[i] = b1 * m_[i] + (1.0 - b1) * gi;
        v_[i] = b2 * v_[i] + (1.0 - b2) * gi * gi;
        x[i] -= lr * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + config_.epsilon);
    }
}

FloquetChannel predict_channel(const ProxySet &proxies, const ModulationPattern &pattern)
{
    const auto blocks = proxies.blocks();
    const FloquetLoadScatter phi = assemble_phi(pattern, proxies.rho_table(), proxies.grid(), false);
    return end_to_end_channel(std::span<const HarmonicBlocks>(blocks), phi, proxies.grid());
}

std::vector<ProxyParams> apply_gauges(const ProxySet &proxies, std::span<const GaugeParams> gauges)
{
    if (gauges.size() != proxies.grid().size())
        throw DimensionError("need one gauge per harmonic");
    std::vector<ProxyParams> out;
    out.reserve(gauges.size());
    for (std::size_t h = 0; h < gauges.size(); ++h)
        out.push_back(compose(proxies.at(h), gauges[h]));
    return out;
}

std::vector<GaugeParams> identity_gauges(const ProxySet &proxies)
{
    return std::vector<GaugeParams>(proxies.grid().size(),
                                    GaugeParams::identity(proxies.n_s(), variant_for(proxies.mc_aware())));
}

double alignment_loss(const ProxySet &proxies, std::span<const GaugeParams> gauges, const Campaign &campaign,
                      Execution exec)
{
    check_inputs(proxies, gauges, campaign);
    return evaluate(apply_gauges(proxies, gauges), proxies.grid(), campaign, false, exec).loss;
}

LossAndGradient alignment_gradient(const ProxySet &proxies, std::span<const GaugeParams> gauges,
                                   const Campaign &campaign, Execution exec)
{
    check_inputs(proxies, gauges, campaign);
    const std::size_t nh = proxies.grid().size();
    std::vector<GaugeTape> tapes;
    tapes.reserve(nh);
    std::vector<ProxyParams> composed;
    composed.reserve(nh);
    for (std::size_t h = 0; h < nh; ++h)
    {
        tapes.push_back(forward_gauge(proxies.at(h), gauges[h]));
        composed.push_back(tapes.back().t3);
    }
    const Evaluation ev = evaluate(composed, proxies.grid(), campaign, true, exec);
    const std::size_t cc = GaugeParams::coordinate_count(proxies.n_s());
    LossAndGradient out;
    out.loss = ev.loss;
    out.gradient.assign(nh * cc, 0.0);
    for (std::size_t h = 0; h < nh; ++h)
        reverse_gauge(proxies.at(h), tapes[h], gauges[h], ev.grads[h], out.gradient.data() + h * cc);
    return out;
}

AlignmentResult align(const ProxySet &proxies, const Campaign &campaign, const OptimizerConfig &config,
                      Execution exec, const AdmissibilityMargins &margins)
{
    config.validate();
    campaign.validate();
    const std::size_t nh = proxies.grid().size();
    const std::size_t ns = proxies.n_s();
    const std::size_t cc = GaugeParams::coordinate_count(ns);
    const GaugeVariant variant = variant_for(proxies.mc_aware());

    Rng rng(derive_seed(config.seed, "align-init"));
    const double sd = config.init_spread;
    std::vector<GaugeParams> gauges;
    gauges.reserve(nh);
    for (std::size_t h = 0; h < nh; ++h)
    {
        GaugeParams g = GaugeParams::identity(ns, variant);
        if (sd > 0.0)
        {
            for (Index i = 0; i < g.d.size(); ++i)
                g.d(i) = Complex(truncated_normal(rng, 1.0, sd), truncated_normal(rng, 0.0, sd));
            g.gamma = Complex(truncated_normal(rng, 1.0, sd), truncated_normal(rng, 0.0, sd));
            g.third = Complex(truncated_normal(rng, 0.0, sd), truncated_normal(rng, 0.0, sd));
        }
        gauges.push_back(std::move(g));
    }
    check_inputs(proxies, gauges, campaign);

    std::vector<double> x(nh * cc);
    for (std::size_t h = 0; h < nh; ++h)
        gauges[h].write_coordinates(x.data() + h * cc);

    Adam adam(config, x.size());
    std::vector<double> trace;
    trace.reserve(config.iterations + 1);
    bool aborted = false;
    std::string reason;
    std::vector<GaugeParams> accepted = gauges;
    for (std::size_t t = 0; t <= config.iterations; ++t)
    {
        LossAndGradient lg;
        try
        {
            if (t == config.iterations)
                lg.loss = alignment_loss(proxies, gauges, campaign, exec);
            else
                lg = alignment_gradient(proxies, gauges, campaign, exec);
        }
        catch (const InadmissibleGaugeError &e)
        {
            aborted = true;
            reason = std::string("inadmissible gauge at iteration ") + std::to_string(t) + ": " + e.what();
        }
        catch (const NumericalError &e)
        {
            aborted = true;
            reason = std::string("numerical failure at iteration ") + std::to_string(t) + ": " + e.what();
        }
        if (!aborted && !std::isfinite(lg.loss))
        {
            aborted = true;
            reason = "non-finite loss at iteration " + std::to_string(t);
        }
        if (aborted)
            break;
        trace.push_back(lg.loss);
        accepted = gauges;
        if (t == config.iterations)
            break;

        adam.step(x, lg.gradient, t);
        for (std::size_t h = 0; h < nh; ++h)
        {
            double *c = x.data() + h * cc;
            if (variant == GaugeVariant::mobius)
            {
                const double r = std::hypot(c[2 * ns + 2], c[2 * ns + 3]);
                if (r > margins.max_abs_mu)
                {
                    c[2 * ns + 2] *= margins.max_abs_mu / r;
                    c[2 * ns + 3] *= margins.max_abs_mu / r;
                }
            }
            gauges[h] = GaugeParams::from_coordinates(c, ns, variant);
        }
    }

    std::vector<ProxyParams> aligned;
    AdmissibilityReport report;
    aligned.reserve(nh);
    for (std::size_t h = 0; h < nh; ++h)
    {
        auto r = check_admissible(proxies.at(h), accepted[h], h, margins);
        report.violations.insert(report.violations.end(), r.violations.begin(), r.violations.end());
        aligned.push_back(r.ok() ? compose(proxies.at(h), accepted[h]) : proxies.at(h));
    }
    return AlignmentResult{std::move(accepted), ProxySet(proxies.grid(), std::move(aligned)), std::move(trace),
                           std::move(report), config, aborted, std::move(reason)};
}

ProxySet surrogate_step1(const Scenario &scenario, const HarmonicGrid &grid, double spread, std::uint64_t seed,
                         bool mc_aware, std::vector<GaugeParams> *hidden)
{
    if (!(spread >= 0.0))
        throw ValidationError("surrogate spread must be nonnegative");
    const auto truth = truth_blocks(scenario, grid, mc_aware);
    const GaugeVariant variant = variant_for(mc_aware);
    std::vector<ProxyParams> params;
    params.reserve(grid.size());
    if (hidden)
        hidden->clear();
    for (std::size_t h = 0; h < grid.size(); ++h)
    {
        const std::size_t gi = scenario.gt_grid().index_of(grid.harmonics()[h]);
        const CVector rho = scenario.loads.rho().row(idx(gi)).transpose();
        const ProxyParams exact = ProxyParams::from_blocks(truth[h], rho, mc_aware);
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(h)));
        const GaugeParams g = random_gauge(rng, variant, spread, scenario.config.n_s);
        params.push_back(compose_inverse(exact, g));
        if (hidden)
            hidden->push_back(g);
    }
    return ProxySet(grid, std::move(params));
}

// ---- Step 1 -------------------------------------------------------------------------------

namespace
{

struct FieldLayout
{
    std::size_t nr, nt, ns, p;
    bool mc;

    std::size_t complex_count() const { return nr * nt + nr * ns + (mc ? ns * ns : 0) + ns * nt + p; }
};

void pack(const ProxyParams &t, const FieldLayout &l, std::vector<double> &x)
{
    x.resize(2 * l.complex_count());
    std::size_t o = 0;
    auto put = [&](const auto &m) {
        for (Index c = 0; c < m.cols(); ++c)
            for (Index r = 0; r < m.rows(); ++r)
            {
                x[o++] = m(r, c).real();
                x[o++] = m(r, c).imag();
            }
    };
    put(t.hd);
    put(t.a);
    if (l.mc)
        put(t.gamma);
    put(t.b);
    put(t.rho);
}

ProxyParams unpack(const std::vector<double> &x, const FieldLayout &l)
{
    ProxyParams t;
    t.mc_aware = l.mc;
    t.hd.resize(idx(l.nr), idx(l.nt));
    t.a.resize(idx(l.nr), idx(l.ns));
    t.gamma = CMatrix::Zero(idx(l.ns), idx(l.ns));
    t.b.resize(idx(l.ns), idx(l.nt));
    t.rho.resize(idx(l.p));
    std::size_t o = 0;
    auto get = [&](auto &m) {
        for (Index c = 0; c < m.cols(); ++c)
            for (Index r = 0; r < m.rows(); ++r)
            {
                m(r, c) = Complex(x[o], x[o + 1]);
                o += 2;
            }
    };
    get(t.hd);
    get(t.a);
    if (l.mc)
        get(t.gamma);
    get(t.b);
    get(t.rho);
    return t;
}

CVector reflections(const ProxyParams &t, const Eigen::VectorXi &states)
{
    CVector r(states.size());
    for (Index i = 0; i < states.size(); ++i)
    {
        if (states(i) < 0 || states(i) >= t.rho.size())
            throw ValidationError("static record state index out of range");
        r(i) = t.rho(states(i));
    }
    return r;
}

// Static-fit loss and gradient (packed like `pack`).
double static_loss(const ProxyParams &t, const StaticCampaign &campaign, const FieldLayout &l,
                   std::vector<double> *grad)
{
    const Index ns = idx(l.ns);
    ProxyGrad g(l.nr, l.nt, l.ns, l.p);
    double loss = 0.0;
    for (const auto &rec : campaign.records)
    {
        const CVector r = reflections(t, rec.states);
        const CMatrix x = CMatrix::Identity(ns, ns) - r.asDiagonal() * t.gamma;
        const auto lu = resolvent::factor(x);
        const CMatrix y = lu.solve(r.asDiagonal() * t.b);
        const CMatrix pred = t.hd + t.a * y;
        CMatrix gp;
        loss += misfit(MeasurementMode::m3, pred, rec.block, grad ? &gp : nullptr);
        if (!grad)
            continue;
        g.hd += gp;
        g.a.noalias() += gp * y.adjoint();
        const CMatrix gz = lu.adjoint().solve(t.a.adjoint() * gp);
        const CMatrix w = t.gamma * y + t.b;
        const CMatrix rgz = r.conjugate().asDiagonal() * gz;
        g.gamma.noalias() += rgz * y.adjoint();
        g.b += rgz;
        for (Index i = 0; i < ns; ++i)
            g.rho(rec.states(i)) += w.row(i).dot(gz.row(i));
    }
    const double scale = 1.0 / static_cast<double>(campaign.records.size());
    if (grad)
    {
        g.hd *= scale;
        g.a *= scale;
        g.gamma *= scale;
        g.b *= scale;
        g.rho *= scale;
        ProxyParams packed{g.hd, g.a, g.gamma, g.b, g.rho, l.mc};
        pack(packed, l, *grad);
    }
    return loss * scale;
}

} // namespace

double static_fit_loss(const ProxyParams &theta, const StaticCampaign &campaign)
{
    theta.validate();
    if (campaign.records.empty())
        throw ValidationError("static campaign has no records");
    const FieldLayout l{theta.n_r(), theta.n_t(), theta.n_s(), theta.n_states(), theta.mc_aware};
    return static_loss(theta, campaign, l, nullptr);
}

double static_prediction_error(const ProxyParams &theta, const StaticCampaign &campaign)
{
    double num = 0.0;
    double den = 0.0;
    for (const auto &rec : campaign.records)
    {
        const CMatrix pred = static_block(theta.blocks(), reflections(theta, rec.states));
        num += (pred - rec.block).squaredNorm();
        den += rec.block.squaredNorm();
    }
    if (!(den > 0.0))
        throw NumericalError("static campaign with zero power");
    return std::sqrt(num / den);
}

Step1Result step1_estimate(std::span<const StaticCampaign> campaigns, const HarmonicGrid &grid,
                           const Step1Config &config, bool mc_aware, Execution exec)
{
    config.optimizer.validate();
    if (campaigns.size() != grid.size())
        throw DimensionError("step 1 needs one static campaign per retained harmonic");
    std::vector<ProxyParams> params(grid.size());
    std::vector<Step1Report> reports(grid.size());
    for (std::size_t h = 0; h < grid.size(); ++h)
    {
        if (campaigns[h].harmonic != grid.harmonics()[h])
            throw GridMismatchError("static campaign " + std::to_string(h) + " is for harmonic " +
                                    std::to_string(campaigns[h].harmonic) + ", expected " +
                                    std::to_string(grid.harmonics()[h]));
        if (campaigns[h].records.empty())
            throw ValidationError("static campaign for harmonic " + std::to_string(campaigns[h].harmonic) +
                                  " has no records");
    }

    for_each_index(grid.size(), exec, [&](std::size_t h) {
        const StaticCampaign &camp = campaigns[h];
        const auto &first = camp.records.front();
        const FieldLayout l{static_cast<std::size_t>(first.block.rows()), static_cast<std::size_t>(first.block.cols()),
                            static_cast<std::size_t>(first.states.size()), camp.n_states, mc_aware};
        Rng rng(derive_seed(config.optimizer.seed, static_cast<std::uint64_t>(h)));
        const double s = config.optimizer.init_spread;
        std::vector<double> x(2 * l.complex_count());
        for (auto &v : x)
            v = s * std::normal_distribution<double>(0.0, 1.0)(rng);
        // Load states start on a circle of radius 0.5 with distinct phases.
        const std::size_t rho_off = x.size() - 2 * l.p;
        for (std::size_t p = 0; p < l.p; ++p)
        {
            const Complex z = std::polar(0.5, 2.0 * kPi * static_cast<double>(p) / static_cast<double>(l.p));
            x[rho_off + 2 * p] += z.real();
            x[rho_off + 2 * p + 1] += z.imag();
        }
        Adam adam(config.optimizer, x.size());
        std::vector<double> g;
        double loss = 0.0;
        for (std::size_t t = 0; t < config.optimizer.iterations; ++t)
        {
            loss = static_loss(unpack(x, l), camp, l, &g);
            adam.step(x, g, t);
        }
        params[h] = unpack(x, l);
        loss = static_loss(params[h], camp, l, nullptr);
        const std::size_t unknowns = l.complex_count();
        const std::size_t equations = camp.records.size() * l.nr * l.nt;
        reports[h] = Step1Report{camp.harmonic, loss, loss <= config.convergence_threshold,
                                 l.p < 2 || equations < unknowns};
    });
    return Step1Result{ProxySet(grid, std::move(params)), std::move(reports)};
}

} // namespace floquet
