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

#include "doctest.h"
#include "test_util.hpp"

#include <cmath>

#include "floquet/io.hpp"

using namespace floquet;
using namespace floquet::test;

namespace
{

Scenario small_scenario(std::uint64_t seed)
{
    ScenarioConfig c = tiny_config(7, 3, 2, seed);
    c.retained_harmonics = 3;
    return generate_scenario(c);
}

} // namespace

TEST_CASE("projections")
{
    const Scenario s = small_scenario(1);
    Eigen::MatrixXi states(3, 3);
    states << 0, 1, 2, 3, 2, 1, 0, 0, 1;
    const auto h = s.channel(s.pattern(states), s.retained_grid());

    const Observation m3 = project(MeasurementMode::m3, h);
    CHECK(m3.data == h.matrix());
    const Observation m2 = project(MeasurementMode::m2, h);
    CHECK((m2.data.imag().array() == 0.0).all());
    CHECK((m2.data.real().array() >= 0.0).all());
    CHECK(project(MeasurementMode::m2, FloquetChannel(h.grid(), 2, 2, m2.data)).data == m2.data);
    const Observation m1 = project(MeasurementMode::m1, h);
    CHECK(m1.data == h.block(0, 0));

}

TEST_CASE("observation sizes follow the information ordering")
{
    const std::size_t nh = 11, nr = 4, nt = 4;
    const std::size_t m1 = 2 * nr * nt;
    const std::size_t m2 = nh * nr * nh * nt;
    const std::size_t m3 = 2 * m2;
    CHECK(m3 == 2 * m2);
    CHECK(m3 == 121 * m1);
}

TEST_CASE("static patterns give block-diagonal M3 observations")
{
    const Scenario s = small_scenario(2);
    const Campaign c = simulate_campaign(s, s.retained_grid(), {5, 1, MeasurementMode::m3, std::nullopt,
                                                                SnrReference::all_entries, 3});
    for (const auto &r : c.records)
        for (std::size_t n = 0; n < 3; ++n)
            for (std::size_t m = 0; m < 3; ++m)
                if (n != m)
                    CHECK(FloquetChannel(c.grid, 2, 2, r.observation.data).block_at(n, m).norm() < 1e-14);
}

TEST_CASE("noise variance and circularity")
{
    const auto grid = HarmonicGrid::symmetric(1e9, 1e7, 5);
    const FloquetChannel zero(grid, 2, 2, CMatrix::Zero(10, 10));
    Rng rng(5);
    const double sigma2 = 0.37;
    double total = 0.0, re = 0.0, im = 0.0;
    const int draws = 1000;
    for (int k = 0; k < draws; ++k)
    {
        const CMatrix n = add_noise(zero, sigma2, rng).matrix();
        total += n.squaredNorm();
        re += n.real().squaredNorm();
        im += n.imag().squaredNorm();
    }
    const double count = draws * 100.0;
    CHECK(std::abs(total / count / sigma2 - 1.0) < 0.02);
    CHECK(std::abs(re / count / (sigma2 / 2) - 1.0) < 0.02);
    CHECK(std::abs(im / count / (sigma2 / 2) - 1.0) < 0.02);

    CHECK(noise_variance(2.0, 20.0) == doctest::Approx(0.02));
    CHECK_THROWS_AS(noise_variance(0.0, 20.0), NumericalError);
    CHECK_THROWS_AS(noise_variance(1.0, std::nan("")), ValidationError);
}

TEST_CASE("noise is added before the modulus")
{
    const Scenario s = small_scenario(3);
    const CampaignSpec spec{4, 3, MeasurementMode::m2, 10.0, SnrReference::all_entries, 8};
    const Campaign m2 = simulate_campaign(s, s.retained_grid(), spec);
    CampaignSpec spec3 = spec;
    spec3.mode = MeasurementMode::m3;
    const Campaign m3 = simulate_campaign(s, s.retained_grid(), spec3);
    for (std::size_t k = 0; k < 4; ++k)
    {
        CHECK(m2.records[k].pattern == m3.records[k].pattern);
        CHECK((m2.records[k].observation.data.real() - m3.records[k].observation.data.cwiseAbs()).norm() < 1e-15);
    }
}

TEST_CASE("SNR reference power")
{
    const Scenario s = small_scenario(4);
    const double all = reference_power(s, s.retained_grid(), 3, 1);
    const double fund = reference_power(s, s.retained_grid(), 3, 1, SnrReference::fundamental_block);
    CHECK(all > 0.0);
    CHECK(fund > all);
    const Campaign c = simulate_campaign(s, s.retained_grid(), {3, 3, MeasurementMode::m3, 20.0,
                                                                SnrReference::all_entries, 1});
    CHECK(c.noise_variance == doctest::Approx(all * 0.01).epsilon(1e-12));
}

TEST_CASE("uniform random states")
{
    Rng one(1);
    CHECK((random_states(3, 2, 1, one).array() == 0).all());

    Rng rng(6);
    const std::size_t p = 8;
    std::vector<double> counts(p, 0.0);
    const int n = 10000;
    for (int k = 0; k < n; ++k)
        counts[static_cast<std::size_t>(random_states(1, 1, p, rng)(0, 0))] += 1.0;
    const double expect = n / static_cast<double>(p);
    const double sd = std::sqrt(n * (1.0 / p) * (1.0 - 1.0 / p));
    double chi2 = 0.0;
    for (double c : counts)
    {
        CHECK(std::abs(c - expect) < 3.0 * sd);
        chi2 += (c - expect) * (c - expect) / expect;
    }
    CHECK(chi2 < 24.32); // 7 dof, p = 0.001

    Rng a(1), b(2);
    const auto pa = random_patterns(5, 3, 3, 4, a);
    const auto pb = random_patterns(5, 3, 3, 4, b);
    CHECK_FALSE(pa == pb);
}

TEST_CASE("campaigns are deterministic and independent of execution order")
{
    const Scenario s = small_scenario(5);
    const CampaignSpec spec{12, 3, MeasurementMode::m3, 15.0, SnrReference::all_entries, 42};
    const Campaign a = simulate_campaign(s, s.retained_grid(), spec, Execution::serial);
    const Campaign b = simulate_campaign(s, s.retained_grid(), spec, Execution::parallel);
    const Campaign c = simulate_campaign(s, s.retained_grid(), spec, Execution::serial);
    CHECK(a == b);
    CHECK(a == c);
    CHECK(io::dump(io::to_json(a)) == io::dump(io::to_json(b)));
    // record k does not depend on K
    CampaignSpec shorter = spec;
    shorter.k = 5;
    const Campaign d = simulate_campaign(s, s.retained_grid(), shorter);
    for (std::size_t k = 0; k < 5; ++k)
        CHECK(d.records[k] == a.records[k]);
    for (const auto &r : a.records)
        CHECK(r.pattern.delays == s.delays);
}

TEST_CASE("campaign JSON round trip")
{
    const Scenario s = small_scenario(6);
    for (auto mode : {MeasurementMode::m1, MeasurementMode::m2, MeasurementMode::m3})
    {
        const Campaign c = simulate_campaign(s, s.retained_grid(), {3, 2, mode, 20.0, SnrReference::all_entries, 9});
        const Campaign back = io::campaign_from_json(io::to_json(c));
        CHECK(back == c);
    }
}

TEST_CASE("reference-size M1 campaign")
{
    ScenarioConfig cfg;
    cfg.gt_harmonics = 21;
    const Scenario s = generate_scenario(cfg);
    const Campaign c = simulate_campaign(s, s.retained_grid(), {900, 3, MeasurementMode::m1, 26.0,
                                                                SnrReference::all_entries, 0});
    REQUIRE(c.size() == 900);
    for (const auto &r : c.records)
    {
        CHECK(r.observation.data.rows() == 4);
        CHECK(r.observation.data.cols() == 4);
    }
}

TEST_CASE("static campaigns")
{
    const Scenario s = small_scenario(7);
    const StaticCampaign c = simulate_static_campaign(s, 1, 6, std::nullopt, 3);
    CHECK(c.harmonic == 1);
    CHECK(c.records.size() == 6);
    const auto blocks = s.model.blocks(s.gt_grid().index_of(1));
    for (const auto &r : c.records)
    {
        CVector refl(3);
        for (Eigen::Index i = 0; i < 3; ++i)
            refl(i) = s.loads.rho()(static_cast<Eigen::Index>(s.gt_grid().index_of(1)), r.states(i));
        CHECK(rel_err(r.block, static_block(blocks, refl)) < 1e-14);
        // agrees with the Floquet core at Q = 1
        Eigen::MatrixXi st = r.states;
        const auto h = s.channel(ModulationPattern(st), s.retained_grid());
        CHECK(rel_err(r.block, h.block(1, 1)) < 1e-12);
    }
}
