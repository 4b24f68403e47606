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

using namespace floquet;
using namespace floquet::test;

namespace
{

double field_difference(const ProxyParams &x, const ProxyParams &y)
{
    return (x.hd - y.hd).norm() + (x.a - y.a).norm() + (x.gamma - y.gamma).norm() + (x.b - y.b).norm() +
           (x.rho - y.rho).norm();
}

double worst_channel_error(Rng &rng, const ProxyParams &x, const ProxyParams &y, int configs)
{
    double worst = 0.0;
    for (int k = 0; k < configs; ++k)
    {
        const auto c = random_static_states(rng, x.n_s(), x.n_states());
        worst = std::max(worst, rel_err(static_channel(y, c), static_channel(x, c)));
    }
    return worst;
}

} // namespace

TEST_CASE("identity gauges leave every field unchanged")
{
    Rng rng(1);
    for (bool mc : {true, false})
    {
        const ProxyParams t = random_proxy(rng, 2, 3, 4, 5, mc);
        CHECK(field_difference(apply_ds(t, CVector::Ones(4)), t) == 0.0);
        CHECK(field_difference(apply_cs(t, 1.0), t) == 0.0);
        if (mc)
            CHECK(field_difference(apply_mobius(t, 0.0), t) < 1e-15);
        else
            CHECK(field_difference(apply_affine(t, 0.0), t) == 0.0);
        CHECK(field_difference(compose(t, GaugeParams::identity(4, variant_for(mc))), t) < 1e-15);
    }
}

TEST_CASE("direct formulas")
{
    Rng rng(2);
    const ProxyParams t = random_proxy(rng, 2, 2, 3, 4, true);

    CVector d = CVector::Ones(3);
    d(0) = 2.0;
    const ProxyParams ds = apply_ds(t, d);
    CHECK((ds.a.col(0) - 0.5 * t.a.col(0)).norm() < 1e-15);
    CHECK((ds.b.row(0) - 2.0 * t.b.row(0)).norm() < 1e-15);

    const Complex g{0.0, 2.0};
    const ProxyParams cs = apply_cs(t, g);
    CHECK((cs.a - t.a / g).norm() < 1e-15);
    CHECK(std::abs(std::abs(cs.rho(0)) - 2.0 * std::abs(t.rho(0))) < 1e-15);

    ProxyParams r = t;
    r.rho(1) = 0.5;
    const ProxyParams mo = apply_mobius(r, 0.5);
    CHECK(std::abs(mo.rho(1)) < 1e-15);
    for (Eigen::Index p = 0; p < mo.rho.size(); ++p)
        CHECK(std::abs(mo.rho(p)) < 1.0);

    const ProxyParams u = random_proxy(rng, 2, 2, 3, 4, false);
    const ProxyParams af = apply_affine(u, 0.1);
    CHECK((af.rho - (u.rho.array() + 0.1).matrix()).norm() < 1e-15);
    CHECK((af.hd - (u.hd - 0.1 * u.a * u.b)).norm() < 1e-15);
    CHECK(af.gamma.isZero(0.0));
}

TEST_CASE("precondition violations raise distinct errors")
{
    Rng rng(3);
    const ProxyParams t = random_proxy(rng, 2, 2, 3, 4, true);
    CVector d = CVector::Ones(3);
    d(1) = 0.0;
    CHECK_THROWS_AS(apply_ds(t, d), InadmissibleGaugeError);
    CHECK_THROWS_AS(apply_cs(t, 0.0), InadmissibleGaugeError);
    CHECK_THROWS_AS(apply_mobius(t, 1.0), InadmissibleGaugeError);
    CHECK_THROWS_AS(apply_affine(t, 0.1), VariantMismatchError);

    GaugeParams g = GaugeParams::identity(3, GaugeVariant::mobius);
    g.third = 0.995;
    const auto report = check_admissible(t, g);
    REQUIRE_FALSE(report.ok());
    CHECK(report.violations.front().constraint == GaugeConstraint::mobius_radius);

    ProxyParams pole = t;
    pole.rho(2) = 2.0;
    g.third = 0.5;
    const auto r2 = check_admissible(pole, g);
    REQUIRE_FALSE(r2.ok());
    CHECK(r2.violations.front().constraint == GaugeConstraint::mobius_pole);
    CHECK(r2.violations.front().element == 2);
}

TEST_CASE("gauges preserve the static channel")
{
    Rng rng(4);
    double worst = 0.0;
    for (int trial = 0; trial < 40; ++trial)
    {
        const bool mc = trial % 2 == 0;
        const ProxyParams t = random_proxy(rng, 2, 3, 4, 5, mc);
        const GaugeParams g = random_gauge(rng, variant_for(mc), 0.3, 4);
        worst = std::max(worst, worst_channel_error(rng, t, apply_ds(t, g.d), 10));
        worst = std::max(worst, worst_channel_error(rng, t, apply_cs(t, g.gamma), 10));
        worst = std::max(worst,
                         worst_channel_error(rng, t, mc ? apply_mobius(t, g.third) : apply_affine(t, g.third), 10));
        worst = std::max(worst, worst_channel_error(rng, t, compose(t, g), 10));
        worst = std::max(worst, worst_channel_error(rng, t, compose_inverse(t, g), 10));
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("composition order matters field-wise but not for the channel")
{
    Rng rng(5);
    const ProxyParams t = random_proxy(rng, 2, 2, 3, 4, true);
    GaugeParams g = random_gauge(rng, GaugeVariant::mobius, 0.3, 3);
    g.third = Complex{0.3, -0.2};
    const ProxyParams forward = compose(t, g);
    const ProxyParams reverse = apply_ds(apply_cs(apply_mobius(t, g.third), g.gamma), g.d);
    CHECK(field_difference(forward, reverse) > 1e-3);
    CHECK(worst_channel_error(rng, forward, reverse, 20) < 1e-10);
}

TEST_CASE("compose_inverse undoes compose")
{
    Rng rng(6);
    for (bool mc : {true, false})
    {
        const ProxyParams t = random_proxy(rng, 2, 2, 3, 4, mc);
        const GaugeParams g = random_gauge(rng, variant_for(mc), 0.3, 3);
        CHECK(field_difference(compose(compose_inverse(t, g), g), t) < 1e-12);
    }
}

TEST_CASE("DS and CS commute exactly")
{
    Rng rng(7);
    const ProxyParams t = random_proxy(rng, 2, 2, 3, 4, true);
    const GaugeParams g = random_gauge(rng, GaugeVariant::mobius, 0.3, 3);
    const ProxyParams x = apply_cs(apply_ds(t, g.d), g.gamma);
    const ProxyParams y = apply_ds(apply_cs(t, g.gamma), g.d);
    CHECK(field_difference(x, y) < 1e-15);
}

TEST_CASE("Moebius on a coupling-free proxy creates coupling")
{
    Rng rng(8);
    ProxyParams t = random_proxy(rng, 2, 2, 3, 4, true);
    t.gamma.setZero();
    const Complex mu{0.2, 0.1};
    const ProxyParams m = apply_mobius(t, mu);
    CHECK((m.gamma + std::conj(mu) * CMatrix::Identity(3, 3)).norm() < 1e-15);
    const ProxyParams u = random_proxy(rng, 2, 2, 3, 4, false);
    CHECK(apply_affine(u, mu).gamma.isZero(0.0));
}

TEST_CASE("scalar Moebius round trip")
{
    Rng rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 50; ++k)
    {
        const Complex rho = std::polar(0.95 * u(rng), 2.0 * kPi * u(rng));
        const Complex mu = std::polar(0.9 * u(rng), 2.0 * kPi * u(rng));
        const Complex there = mobius_map(rho, mu);
        CHECK(std::abs(there) < 1.0);
        CHECK(std::abs(mobius_map(there, -mu) - rho) < 1e-13);
    }
}

TEST_CASE("random gauges")
{
    Rng a(10), b(10);
    for (int k = 0; k < 200; ++k)
    {
        const GaugeParams g = random_gauge(a, GaugeVariant::mobius, 0.3, 5);
        const GaugeParams h = random_gauge(b, GaugeVariant::mobius, 0.3, 5);
        CHECK(std::abs(g.third) <= 0.99);
        CHECK(g.d == h.d);
        CHECK(g.third == h.third);
    }
    Rng c(11);
    const GaugeParams z = random_gauge(c, GaugeVariant::affine, 0.0, 3);
    CHECK(z.d == CVector::Ones(3));
    CHECK(z.gamma == Complex{1.0, 0.0});
    CHECK(z.third == Complex{});
}
