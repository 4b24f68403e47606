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

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <vector>

#include <omp.h>

namespace floquet
{

enum class Execution
{
    serial,
    parallel
};

// Worker count: FLOQUET_THREADS if set to a positive integer, else the OpenMP default.
inline int thread_cap()
{
    const int fallback = omp_get_max_threads();
    if (const char *env = std::getenv("FLOQUET_THREADS"))
    {
        try
        {
            const int n = std::stoi(env);
            if (n > 0)
                return fallback < 1 ? n : std::min(n, fallback);
        }
        catch (const std::exception &)
        {
        }
    }
    return fallback < 1 ? 1 : fallback;
}

// Runs f(i) for i in [0, n). Exceptions are collected per index and the one with the
// lowest index is rethrown, so failures do not depend on scheduling.
template <class F> void for_each_index(std::size_t n, Execution exec, F &&f)
{
    if (exec == Execution::serial || n < 2)
    {
        for (std::size_t i = 0; i < n; ++i)
            f(i);
        return;
    }
    std::vector<std::exception_ptr> errors(n);
    const long long count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic) num_threads(thread_cap())
    for (long long i = 0; i < count; ++i)
    {
        try
        {
            f(static_cast<std::size_t>(i));
        }
        catch (...)
        {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (auto &e : errors)
        if (e)
            std::rethrow_exception(e);
}

} // namespace floquet
