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

// Serial reference vs OpenMP kernels on the default retained grid (11 harmonics, 4x4 antennas,
// 10 elements, Q = 3). Thread count follows FLOQUET_THREADS.

#include <benchmark/benchmark.h>

#include "floquet/evaluation.hpp"

using namespace floquet;

namespace
{

struct Fixture
{
    Scenario scenario;
    ProxySet proxies;
    Campaign campaign;
    std::vector<GaugeParams> gauges;
};

const Fixture &fixture()
{
    static const Fixture f = [] {
        ScenarioConfig c;
        c.gt_harmonics = 41;
        Scenario s = generate_scenario(c);
        const auto grid = s.retained_grid();
        ProxySet p = surrogate_step1(s, grid, 0.3, 1, true);
        Campaign camp = simulate_campaign(s, grid, CampaignSpec{40, 3, MeasurementMode::m3, 26.0, SnrReference::all_entries, 2});
        std::vector<GaugeParams> g = identity_gauges(p);
        return Fixture{std::move(s), std::move(p), std::move(camp), std::move(g)};
    }();
    return f;
}

Execution exec_of(const benchmark::State &state) { return state.range(0) ? Execution::parallel : Execution::serial; }

void BM_AlignmentGradient(benchmark::State &state)
{
    const Fixture &f = fixture();
    for (auto _ : state)
        benchmark::DoNotOptimize(alignment_gradient(f.proxies, f.gauges, f.campaign, exec_of(state)));
    state.SetLabel(state.range(0) ? "parallel" : "serial");
}

void BM_SimulateCampaign(benchmark::State &state)
{
    const Fixture &f = fixture();
    const CampaignSpec spec{40, 3, MeasurementMode::m3, 26.0, SnrReference::all_entries, 3};
    for (auto _ : state)
        benchmark::DoNotOptimize(simulate_campaign(f.scenario, f.scenario.retained_grid(), spec, exec_of(state)));
    state.SetLabel(state.range(0) ? "parallel" : "serial");
}

void BM_EvaluateZeta(benchmark::State &state)
{
    const Fixture &f = fixture();
    const ChannelModel truth = ChannelModel::ground_truth(f.scenario, f.scenario.retained_grid());
    const ChannelModel model = ChannelModel::from_proxies(f.proxies);
    for (auto _ : state)
        benchmark::DoNotOptimize(evaluate_zeta(truth, model, MeasurementMode::m3, 3, 4, 20, exec_of(state)));
    state.SetLabel(state.range(0) ? "parallel" : "serial");
}

} // namespace

BENCHMARK(BM_AlignmentGradient)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SimulateCampaign)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EvaluateZeta)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
