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
#include <initializer_list>
#include <random>
#include <string_view>

#include "floquet/types.hpp"

namespace floquet
{

using Rng = std::mt19937_64;

// SplitMix64 finalizer; used to derive independent stream seeds from a master seed.
inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Seed of stream `stream` under `master`. Chaining (derive_seed(derive_seed(m, a), b)) gives
// hierarchical streams; distinct paths give statistically independent generators.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream)
{
    return splitmix64(splitmix64(master) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

// FNV-1a, for deriving streams from readable labels ("eval", "campaign", ...).
inline std::uint64_t label_hash(std::string_view label)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : label)
    {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t derive_seed(std::uint64_t master, std::string_view label)
{
    return derive_seed(master, label_hash(label));
}

// Circular complex Gaussian with E|z|^2 = 1.
inline Complex complex_normal(Rng &rng)
{
    std::normal_distribution<double> n(0.0, 1.0);
    const double re = n(rng);
    const double im = n(rng);
    return Complex{re, im} * 0.70710678118654752440;
}

// Normal(mean, sd) resampled until within `bound` standard deviations of the mean.
inline double truncated_normal(Rng &rng, double mean, double sd, double bound = 2.0)
{
    std::normal_distribution<double> n(0.0, 1.0);
    for (;;)
    {
        const double x = n(rng);
        if (std::abs(x) <= bound)
            return mean + sd * x;
    }
}

} // namespace floquet
