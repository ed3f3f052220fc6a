// SPDX-License-Identifier: Apache-2.0
//
// mmnoma: link-level simulator and outage analysis for clustered massive-MIMO-NOMA
// Copyright (C) 2026 The mmnoma authors
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

#ifndef MMNOMA_SEEDING_HPP
#define MMNOMA_SEEDING_HPP

#include <cstdint>
#include <random>

namespace mmnoma
{
    using Engine = std::mt19937_64;

    constexpr std::uint64_t splitmix64(std::uint64_t x)
    {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    // trial_seed = splitmix64(splitmix64(master_seed) ^ trial_index)
    //
    // Depends only on (master_seed, trial_index), so a trial produces the same draws no
    // matter which worker runs it.
    constexpr std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial_index)
    {
        return splitmix64(splitmix64(master_seed) ^ trial_index);
    }

    // Independent stream for auxiliary per-trial checks that must not perturb the main draws.
    constexpr std::uint64_t auxiliary_seed(std::uint64_t seed)
    {
        return splitmix64(seed ^ 0xa5a5a5a55a5a5a5aULL);
    }
}

#endif
