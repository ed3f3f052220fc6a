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

#ifndef MMNOMA_SPECIAL_HPP
#define MMNOMA_SPECIAL_HPP

// Integer-shape incomplete gamma functions and exact combinatorial coefficients.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>

#include "types.hpp"

namespace mmnoma
{
    // Exact binomial coefficient; throws if the result does not fit in 64 bits.
    inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k)
    {
        require(k <= n, "binomial: need k <= n");
        k = std::min(k, n - k);
        std::uint64_t result = 1;
        for (std::uint64_t i = 1; i <= k; ++i)
        {
            const std::uint64_t num = n - k + i;
            // result * num / i stays integral at every step
            require(result <= std::numeric_limits<std::uint64_t>::max() / num, "binomial: overflow");
            result = result * num / i;
        }
        return result;
    }

    // P! / ((P - p)! (p - 1)!) = P * C(P - 1, p - 1), 1 <= p <= P.
    inline std::uint64_t order_statistic_coefficient(std::size_t p, std::size_t P)
    {
        require(1 <= p && p <= P, "order_statistic_coefficient: need 1 <= p <= P");
        return static_cast<std::uint64_t>(P) * binomial(P - 1, p - 1);
    }

    inline double factorial(std::size_t n)
    {
        double f = 1.0;
        for (std::size_t i = 2; i <= n; ++i)
            f *= static_cast<double>(i);
        return f;
    }

    namespace detail
    {
        // e^{-x} sum_{j=0}^{s-1} x^j / j!
        inline double poisson_head(std::size_t s, double x)
        {
            double term = 1.0, sum = 0.0;
            for (std::size_t j = 0; j < s; ++j)
            {
                if (j > 0)
                    term *= x / static_cast<double>(j);
                sum += term;
            }
            return std::exp(-x) * sum;
        }

        // e^{-x} sum_{j>=s} x^j / j!, by the convergent series
        // e^{-x} x^s / s! * sum_{k>=0} x^k / ((s+1)...(s+k)).
        inline double poisson_tail(std::size_t s, double x)
        {
            double term = 1.0, sum = 1.0;
            for (std::size_t k = 1; k < 10000; ++k)
            {
                term *= x / static_cast<double>(s + k);
                sum += term;
                if (term < sum * 1e-17)
                    break;
            }
            const double log_prefactor = -x + static_cast<double>(s) * std::log(x) - std::lgamma(static_cast<double>(s) + 1.0);
            return std::exp(log_prefactor) * sum;
        }
    }

    // gamma(s, x) / Gamma(s) for integer s >= 1, x >= 0.
    inline double reg_lower_gamma(std::size_t s, double x)
    {
        require(s >= 1, "reg_lower_gamma: shape must be a positive integer");
        require(x >= 0.0, "reg_lower_gamma: argument must be nonnegative");
        if (x == 0.0)
            return 0.0;
        if (std::isinf(x))
            return 1.0;
        if (x < static_cast<double>(s) + 1.0)
            return detail::poisson_tail(s, x);
        return 1.0 - detail::poisson_head(s, x);
    }

    // Gamma(s, x) / Gamma(s) = 1 - reg_lower_gamma(s, x).
    inline double reg_upper_gamma(std::size_t s, double x)
    {
        require(s >= 1, "reg_upper_gamma: shape must be a positive integer");
        require(x >= 0.0, "reg_upper_gamma: argument must be nonnegative");
        if (x == 0.0)
            return 1.0;
        if (std::isinf(x))
            return 0.0;
        if (x < static_cast<double>(s) + 1.0)
            return 1.0 - detail::poisson_tail(s, x);
        return detail::poisson_head(s, x);
    }
}

#endif
