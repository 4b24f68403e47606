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

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "floquet/gauge.hpp"
#include "floquet/measurement.hpp"
#include "floquet/parallel.hpp"
#include "floquet/scenario.hpp"

namespace floquet
{

// Full-batch Adam with geometric step decay lr_t = lr_start * (lr_end / lr_start)^(t / iterations).
struct OptimizerConfig
{
    std::size_t iterations = 250;
    double lr_start = 1e-3;
    double lr_end = 1e-5;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    bool bias_correction = true;
    double weight_decay = 0.0;
    double init_spread = 2e-2;
    std::uint64_t seed = 0;

    void validate() const;
    double step_size(std::size_t t) const;

    bool operator==(const OptimizerConfig &) const = default;
};

class Adam
{
  public:
    Adam(const OptimizerConfig &config, std::size_t n);

    // One update at iteration t (0-based) of x given gradient g.
    void step(std::span<double> x, std::span<const double> g, std::size_t t);

  private:
    OptimizerConfig config_;
    std::vector<double> m_;
    std::vector<double> v_;
};

// Multi-harmonic channel of the proxy model on the proxies' grid. Pattern delays are ignored.
FloquetChannel predict_channel(const ProxySet &proxies, const ModulationPattern &pattern);

// Per-harmonic composed proxies g(theta^(h); phi^(h)). Throws GaugeConstraintError if inadmissible.
std::vector<ProxyParams> apply_gauges(const ProxySet &proxies, std::span<const GaugeParams> gauges);

std::vector<GaugeParams> identity_gauges(const ProxySet &proxies);

// Mean over records of the normalized entrywise l1 misfit between projected predictions and
// observations.
double alignment_loss(const ProxySet &proxies, std::span<const GaugeParams> gauges, const Campaign &campaign,
                      Execution exec = Execution::parallel);

struct LossAndGradient
{
    double loss = 0.0;
    // Harmonic-major blocks of GaugeParams::coordinate_count(n_s) reals.
    std::vector<double> gradient;
};

// Loss and its exact gradient with respect to all real gauge coordinates (reverse mode).
LossAndGradient alignment_gradient(const ProxySet &proxies, std::span<const GaugeParams> gauges,
                                   const Campaign &campaign, Execution exec = Execution::parallel);

struct AlignmentResult
{
    std::vector<GaugeParams> gauges;
    ProxySet aligned;
    std::vector<double> loss_trace; // initial loss followed by one entry per iteration
    AdmissibilityReport admissibility;
    OptimizerConfig config;
    bool aborted = false;
    std::string abort_reason;
};

// Cross-harmonic ambiguity alignment. The third gauge coordinate is projected radially to
// |mu| <= margins.max_abs_mu after every step. On an unrecoverable constraint violation the run
// stops and the partial trace is returned with `aborted` set.
AlignmentResult align(const ProxySet &proxies, const Campaign &campaign, const OptimizerConfig &config,
                      Execution exec = Execution::parallel, const AdmissibilityMargins &margins = {});

// Ground-truth blocks on `grid`, each disguised by an independent random gauge of scale
// `spread` (drawn from stream derive_seed(seed, harmonic index)). The proxies reproduce every
// static channel exactly but carry mismatched cross-harmonic ambiguities. If `hidden` is given
// it receives the gauges that undo the disguise.
ProxySet surrogate_step1(const Scenario &scenario, const HarmonicGrid &grid, double spread, std::uint64_t seed,
                         bool mc_aware, std::vector<GaugeParams> *hidden = nullptr);

struct Step1Report
{
    int harmonic = 0;
    double final_loss = 0.0;
    bool converged = false;
    bool low_identifiability = false;
};

struct Step1Result
{
    ProxySet proxies;
    std::vector<Step1Report> reports;
};

struct Step1Config
{
    OptimizerConfig optimizer{4000, 2e-2, 1e-4, 0.9, 0.999, 1e-8, true, 0.0, 0.1, 0};
    double convergence_threshold = 1e-2; // final loss above this flags non-convergence
};

// Independent per-harmonic fit of (H_d, A, Gamma, B, rho) to static block measurements.
Step1Result step1_estimate(std::span<const StaticCampaign> campaigns, const HarmonicGrid &grid,
                           const Step1Config &config, bool mc_aware, Execution exec = Execution::parallel);

// Normalized l1 misfit of a single-harmonic proxy on a static campaign.
double static_fit_loss(const ProxyParams &theta, const StaticCampaign &campaign);

// sqrt(sum ||pred - meas||_F^2 / sum ||meas||_F^2) over a static campaign.
double static_prediction_error(const ProxyParams &theta, const StaticCampaign &campaign);

} // namespace floquet
