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

#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "floquet/floquet_core.hpp"

namespace floquet
{

// Proxy multiport parameters at one harmonic: (H_d, A, Gamma, B, {rho_p}).
// MC-unaware proxies carry an identically zero Gamma.
struct ProxyParams
{
    CMatrix hd;    // N_R x N_T
    CMatrix a;     // N_R x N_S
    CMatrix gamma; // N_S x N_S
    CMatrix b;     // N_S x N_T
    CVector rho;   // P
    bool mc_aware = true;

    std::size_t n_t() const { return static_cast<std::size_t>(hd.cols()); }
    std::size_t n_r() const { return static_cast<std::size_t>(hd.rows()); }
    std::size_t n_s() const { return static_cast<std::size_t>(gamma.rows()); }
    std::size_t n_states() const { return static_cast<std::size_t>(rho.size()); }

    // Throws DimensionError / ValidationError on inconsistent shapes or nonzero Gamma without MC.
    void validate() const;

    HarmonicBlocks blocks() const { return HarmonicBlocks{hd, a, gamma, b}; }

    // Proxy equal to the true partition of S at one harmonic (Gamma zeroed when !mc_aware).
    static ProxyParams from_blocks(const HarmonicBlocks &blocks, CVector rho, bool mc_aware);
};

// One ProxyParams per harmonic of a retained grid.
class ProxySet
{
  public:
    ProxySet(HarmonicGrid grid, std::vector<ProxyParams> params);

    const HarmonicGrid &grid() const noexcept { return grid_; }
    const std::vector<ProxyParams> &params() const noexcept { return params_; }
    const ProxyParams &at(std::size_t harmonic_index) const { return params_.at(harmonic_index); }
    bool mc_aware() const noexcept { return params_.front().mc_aware; }
    std::size_t n_t() const { return params_.front().n_t(); }
    std::size_t n_r() const { return params_.front().n_r(); }
    std::size_t n_s() const { return params_.front().n_s(); }
    std::size_t n_states() const { return params_.front().n_states(); }

    std::vector<HarmonicBlocks> blocks() const;
    // Rows: harmonics; columns: load states.
    CMatrix rho_table() const;

  private:
    HarmonicGrid grid_;
    std::vector<ProxyParams> params_;
};

// The third gauge factor: Moebius (MC-aware) or affine shift (MC-unaware).
enum class GaugeVariant
{
    mobius,
    affine,
};

inline GaugeVariant variant_for(bool mc_aware) { return mc_aware ? GaugeVariant::mobius : GaugeVariant::affine; }

// Per-harmonic gauge coordinates (d, gamma, mu) or (d, gamma, eta).
struct GaugeParams
{
    CVector d;
    Complex gamma{1.0, 0.0};
    Complex third{0.0, 0.0}; // mu or eta depending on variant
    GaugeVariant variant = GaugeVariant::mobius;

    static GaugeParams identity(std::size_t n_s, GaugeVariant variant);

    // Real coordinates: [Re d_1, Im d_1, ..., Re gamma, Im gamma, Re third, Im third].
    static constexpr std::size_t coordinate_count(std::size_t n_s) { return 2 * (n_s + 2); }
    void write_coordinates(double *out) const;
    static GaugeParams from_coordinates(const double *in, std::size_t n_s, GaugeVariant variant);
};

// Finite margins that turn the open admissibility conditions into decidable checks.
struct AdmissibilityMargins
{
    double max_abs_mu = 0.99;
    double min_abs_d = 1e-6;
    double min_abs_gamma = 1e-6;
    double min_abs_mobius_pole = 1e-9; // |1 - conj(mu) rho_p|
    double max_condition = 1e12;       // of I - mu Gamma
};

enum class GaugeConstraint
{
    ds_singular,          // some |d_i| below margin
    cs_zero,              // |gamma| below margin
    mobius_radius,        // |mu| above margin
    mobius_pole,          // 1 - conj(mu) rho_p vanishes
    mobius_resolvent,     // I - mu Gamma singular
    variant_mismatch,     // Moebius on MC-unaware or affine on MC-aware parameters
    dimension_mismatch,   // d has wrong length
};

std::string to_string(GaugeConstraint c);

class GaugeConstraintError : public InadmissibleGaugeError
{
  public:
    GaugeConstraintError(GaugeConstraint c, const std::string &what) : InadmissibleGaugeError(what), constraint_(c) {}
    GaugeConstraint constraint() const noexcept { return constraint_; }

  private:
    GaugeConstraint constraint_;
};

struct AdmissibilityViolation
{
    GaugeConstraint constraint;
    std::size_t harmonic_index = 0;
    std::size_t element = 0; // d entry or load state, where relevant
    double value = 0.0;      // offending magnitude or condition estimate
};

struct AdmissibilityReport
{
    std::vector<AdmissibilityViolation> violations;
    bool ok() const noexcept { return violations.empty(); }
    std::string summary() const;
};

// Every violated constraint of the DS-CS-third composition; the third factor is checked on the
// DS-CS-transformed intermediate parameters it actually acts on.
AdmissibilityReport check_admissible(const ProxyParams &theta, const GaugeParams &phi, std::size_t harmonic_index = 0,
                                     const AdmissibilityMargins &margins = {});

ProxyParams apply_ds(const ProxyParams &theta, const CVector &d);
ProxyParams apply_cs(const ProxyParams &theta, Complex gamma);
ProxyParams apply_mobius(const ProxyParams &theta, Complex mu);
ProxyParams apply_affine(const ProxyParams &theta, Complex eta);

// Moebius disk automorphism (rho - mu) / (1 - conj(mu) rho).
Complex mobius_map(Complex rho, Complex mu);

// third(CS(DS(theta))).
ProxyParams compose(const ProxyParams &theta, const GaugeParams &phi);

// Inverse of compose: DS^-1(CS^-1(third^-1(theta))), so that compose(compose_inverse(t, p), p) == t.
ProxyParams compose_inverse(const ProxyParams &theta, const GaugeParams &phi);

// Gauge near identity with perturbations of scale `spread`; mu is clipped radially into the
// admissible disk. Deterministic in the generator state.
GaugeParams random_gauge(std::mt19937_64 &rng, GaugeVariant variant, double spread, std::size_t n_s);

} // namespace floquet
