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

#ifndef MMNOMA_ANALYSIS_HPP
#define MMNOMA_ANALYSIS_HPP

// Closed-form outage analysis.
//
// X = [C]_{q,q} is the ZF noise variance of one stream. With S = P^H R P and s = N - Mtilde + 1,
// the gain 1/X is Gamma(s, a) distributed with a = 1/[S^{-1}]_{q,q}, so X has
//   f(x) = x^{-(s+1)} e^{-1/(a x)} / (Gamma(s) a^s),
//   F(x) = Q(s, 1/(a x)),   1 - F(x) = P(s, 1/(a x)).
// Users in a group are ordered by gain; user 1 is the weakest and holds the largest X.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "channel.hpp"
#include "special.hpp"
#include "types.hpp"

namespace mmnoma
{
    struct GainDistribution
    {
        double a = 1.0;        // a_kq
        std::size_t shape = 1; // s = N - Mtilde + 1

        static GainDistribution from_dimensions(double a, std::size_t receive_antennas, std::size_t m_tilde)
        {
            require(receive_antennas >= m_tilde, "gain distribution: zero-forcing requires N >= Mtilde");
            require(a > 0.0, "gain distribution: a must be positive");
            return {a, receive_antennas - m_tilde + 1};
        }
    };

    inline double pdf_C(double x, const GainDistribution &dist)
    {
        require(x > 0.0, "pdf_C: x must be positive");
        const double s = static_cast<double>(dist.shape);
        const double log_f = -(s + 1.0) * std::log(x) - 1.0 / (dist.a * x) - std::lgamma(s) - s * std::log(dist.a);
        return std::exp(log_f);
    }

    inline double cdf_C(double x, const GainDistribution &dist)
    {
        require(x > 0.0, "cdf_C: x must be positive");
        if (std::isinf(x))
            return 1.0;
        return reg_upper_gamma(dist.shape, 1.0 / (dist.a * x));
    }

    // 1 - F(x), accurate when F(x) is close to one.
    inline double survival_C(double x, const GainDistribution &dist)
    {
        require(x > 0.0, "survival_C: x must be positive");
        if (std::isinf(x))
            return 0.0;
        return reg_lower_gamma(dist.shape, 1.0 / (dist.a * x));
    }

    namespace detail
    {
        // F and 1 - F extended to x <= 0 (an outage threshold that is always exceeded).
        inline double cdf_ext(double x, const GainDistribution &d) { return x <= 0.0 ? 0.0 : cdf_C(x, d); }
        inline double survival_ext(double x, const GainDistribution &d) { return x <= 0.0 ? 1.0 : survival_C(x, d); }
        inline double positive_part(double x) { return std::max(0.0, x); }
        inline double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }
    }

    struct XiThresholds
    {
        std::vector<double> xi;      // xi_n, n = 1..P (stored 0-based)
        std::vector<double> xi_star; // min_{n <= p} xi_n

        double star(std::size_t p) const { return xi_star[p - 1]; }
    };

    // xi_n = (alpha_n^2 - tau_n sum_{m>n} alpha_m^2) / tau_n, and xi_P = alpha_P^2 / tau_P.
    // Negative values are kept: they mean certain outage.
    inline XiThresholds xi_thresholds(const GroupConfig &cfg)
    {
        XiThresholds out;
        const std::size_t P = cfg.users();
        for (std::size_t n = 1; n <= P; ++n)
        {
            const double tau = cfg.tau(n);
            out.xi.push_back((cfg.power(n) - tau * cfg.interference_power(n)) / tau);
        }
        double running = out.xi.front();
        for (double v : out.xi)
        {
            running = std::min(running, v);
            out.xi_star.push_back(running);
        }
        return out;
    }

    // Density of X at the p-th ordered user:
    //   f_p(x) = pi_p^P f(x) F(x)^{P-p} (1 - F(x))^{p-1}
    inline double ordered_pdf(std::size_t p, std::size_t P, const GainDistribution &dist, double x)
    {
        const double pi = static_cast<double>(order_statistic_coefficient(p, P));
        const double F = cdf_C(x, dist);
        const double S = survival_C(x, dist);
        return pi * pdf_C(x, dist) * std::pow(F, static_cast<double>(P - p)) * std::pow(S, static_cast<double>(p - 1));
    }

    // Probability that the p-th ordered user's X exceeds t, as the alternating sum
    //   sum_{i=0}^{p-1} C(p-1, i) (-1)^i pi_p^P (1 - F(t)^{P-p+i+1}) / (P-p+i+1)
    // Each 1 - F^m is formed as -expm1(m log1p(-(1-F))). Terms are O(1 - F), the sum is
    // O((1 - F)^p): for p > 1 nothing survives once (1 - F)^{p-1} < machine epsilon.
    // t <= 0 gives 1.
    inline double ordered_survival_alternating(std::size_t p, std::size_t P, const GainDistribution &dist, double t)
    {
        const double pi = static_cast<double>(order_statistic_coefficient(p, P));
        const double tail = detail::survival_ext(t, dist);
        const double log_F = std::log1p(-tail);

        double total = 0.0;
        for (std::size_t i = 0; i < p; ++i)
        {
            const double m = static_cast<double>(P - p + i + 1);
            const double one_minus_Fm = -std::expm1(m * log_F);
            const double sign = (i % 2 == 0) ? 1.0 : -1.0;
            total += sign * static_cast<double>(binomial(p - 1, i)) * pi * one_minus_Fm / m;
        }
        return detail::clamp01(total);
    }

    // The same probability as a binomial tail: at least p of the P users have X > t,
    //   sum_{j=p}^{P} C(P, j) (1 - F(t))^j F(t)^{P-j}
    inline double ordered_survival(std::size_t p, std::size_t P, const GainDistribution &dist, double t)
    {
        require(1 <= p && p <= P, "ordered_survival: need 1 <= p <= P");
        const double S = detail::survival_ext(t, dist);
        const double F = detail::cdf_ext(t, dist);
        double total = 0.0;
        for (std::size_t j = p; j <= P; ++j)
            total += static_cast<double>(binomial(P, j)) * std::pow(S, static_cast<double>(j)) *
                     std::pow(F, static_cast<double>(P - j));
        return detail::clamp01(total);
    }

    // Outage of the p-th ordered user under perfect ordering: P(X > rho xi*_p), 1 when xi*_p <= 0.
    inline double outage_perfect(std::size_t p, std::size_t P, const GainDistribution &dist, double xi_star, double rho)
    {
        require(1 <= p && p <= P, "outage_perfect: need 1 <= p <= P");
        if (xi_star <= 0.0 || rho <= 0.0)
            return 1.0;
        return ordered_survival(p, P, dist, rho * xi_star);
    }

    // Leading high-SNR term: C(P, p) * (1 / (s! (rho a xi*)^s))^p, which decays as rho^{-p s}.
    inline double outage_perfect_highsnr(std::size_t p, std::size_t P, const GainDistribution &dist, double xi_star, double rho)
    {
        require(1 <= p && p <= P, "outage_perfect_highsnr: need 1 <= p <= P");
        if (xi_star <= 0.0)
            return 1.0;
        const double s = static_cast<double>(dist.shape);
        const double tail = 1.0 / (factorial(dist.shape) * std::pow(rho * dist.a * xi_star, s));
        return static_cast<double>(binomial(P, p)) * std::pow(tail, static_cast<double>(p));
    }

    inline std::size_t diversity_order(std::size_t p, const GainDistribution &dist)
    {
        return p * dist.shape;
    }

    // Two-user group with one-bit feedback: each user reports whether its gain exceeds tau,
    // i.e. whether X < tau_tilde = 1 / tau.
    struct OnebitConfig
    {
        double tau = 1.0;
        GroupConfig group;

        double tau_tilde() const { return 1.0 / tau; }
    };

    namespace detail
    {
        struct OnebitTerms
        {
            double F0 = 0.0, S0 = 0.0;            // F(tau_tilde), 1 - F(tau_tilde)
            double Ft[2]{}, St[2]{};              // F(rho xi*_i), 1 - F(rho xi*_i)
            double Fphi[2]{}, Sphi[2]{};          // at phi_i = max(tau_tilde, rho xi*_i)
            double gap[2]{};                      // [F(tau_tilde) - F(rho xi*_i)]^+
            double gap_sq[2]{};                   // [F(tau_tilde)^2 - F(rho xi*_i)^2]^+
        };

        inline OnebitTerms onebit_terms(const OnebitConfig &cfg, const GainDistribution &dist, double rho)
        {
            require(cfg.group.users() == 2, "one-bit closed forms cover two-user groups only");
            require(cfg.tau > 0.0, "one-bit feedback threshold must be positive");
            const XiThresholds xi = xi_thresholds(cfg.group);
            const double tt = cfg.tau_tilde();

            OnebitTerms t;
            t.F0 = cdf_ext(tt, dist);
            t.S0 = survival_ext(tt, dist);
            for (int i = 0; i < 2; ++i)
            {
                const double arg = rho * xi.xi_star[static_cast<std::size_t>(i)];
                t.Ft[i] = cdf_ext(arg, dist);
                t.St[i] = survival_ext(arg, dist);
                const double phi = std::max(tt, arg);
                t.Fphi[i] = cdf_ext(phi, dist);
                t.Sphi[i] = survival_ext(phi, dist);
                // F(tt) - F(arg) = S(arg) - S(tt)
                t.gap[i] = positive_part(t.St[i] - t.S0);
                t.gap_sq[i] = t.gap[i] * (t.F0 + t.Ft[i]);
            }
            return t;
        }
    }

    // Outage of the weaker user (larger X) with one-bit feedback and P = 2.
    //   2 (1 - F(phi_1)) F(tt) + 1/2 sum_i (1 - F(phi_i)^2) - sum_i F(tt) (1 - F(phi_i))
    //     + 1/2 sum_i [F(tt)^2 - F(rho xi*_i)^2]^+
    // The last sum covers both users reporting a gain above tau, with the weak user placed
    // in slot i at random.
    inline double outage_onebit_weak(const OnebitConfig &cfg, const GainDistribution &dist, double rho)
    {
        const auto t = detail::onebit_terms(cfg, dist, rho);
        double total = 2.0 * t.Sphi[0] * t.F0;
        for (int i = 0; i < 2; ++i)
        {
            total += 0.5 * t.Sphi[i] * (1.0 + t.Fphi[i]); // 1/2 (1 - F(phi_i)^2)
            total -= t.F0 * t.Sphi[i];
            total += 0.5 * t.gap_sq[i];
        }
        return detail::clamp01(total);
    }

    // The weak-user expression with its last term grouped as two copies of
    // 1/2 [F(tt)^2 - sum_i F(rho xi*_i)^2]^+. Kept for comparison; it undercounts the
    // both-strong event whenever tt > rho xi*_i.
    inline double outage_onebit_weak_as_printed(const OnebitConfig &cfg, const GainDistribution &dist, double rho)
    {
        const auto t = detail::onebit_terms(cfg, dist, rho);
        double total = 2.0 * t.Sphi[0] * t.F0;
        for (int i = 0; i < 2; ++i)
        {
            total += 0.5 * t.Sphi[i] * (1.0 + t.Fphi[i]);
            total -= t.F0 * t.Sphi[i];
        }
        const double grouped = t.F0 * t.F0 - t.Ft[0] * t.Ft[0] - t.Ft[1] * t.Ft[1];
        total += 2.0 * 0.5 * detail::positive_part(grouped);
        return detail::clamp01(total);
    }

    // Outage of the stronger user (smaller X) with one-bit feedback and P = 2.
    //   2 [F(tt) - F(rho xi*_2)]^+ (1 - F(tt)) + sum_i F(tt) [F(tt) - F(rho xi*_i)]^+
    //     - 1/2 sum_i [F(tt)^2 - F(rho xi*_i)^2]^+ + 1/2 sum_i (1 - F(phi_i))^2
    inline double outage_onebit_strong(const OnebitConfig &cfg, const GainDistribution &dist, double rho)
    {
        // F(tt) g_i - 1/2 g_i (F(tt) + F(rho xi*_i)) = 1/2 g_i^2, g_i = [F(tt) - F(rho xi*_i)]^+
        const auto t = detail::onebit_terms(cfg, dist, rho);
        double total = 2.0 * t.gap[1] * t.S0;
        for (int i = 0; i < 2; ++i)
        {
            total += 0.5 * t.gap[i] * t.gap[i];
            total += 0.5 * t.Sphi[i] * t.Sphi[i];
        }
        return detail::clamp01(total);
    }

    // High-SNR expansion of the strong-user one-bit outage, valid for tau < min_i 1/(rho xi*_i):
    //   2 (theta_2 - theta_0) theta_0 - 1/2 sum_i (theta_0^2 - theta_i^2) + 1/2 sum_i theta_i^2
    // with theta_0 = tau^s / (s! a^s) and theta_i = 1 / (s! (rho a xi*_i)^s).
    // When theta_0 << theta_i this is about twice outage_onebit_strong; only its rho^{-2s}
    // scaling is meaningful.
    inline double lemma1_approx(const OnebitConfig &cfg, const GainDistribution &dist, double rho)
    {
        require(cfg.group.users() == 2, "lemma1_approx: two-user groups only");
        const XiThresholds xi = xi_thresholds(cfg.group);
        const double x1 = xi.star(1), x2 = xi.star(2);
        if (!(x1 > 0.0 && x2 > 0.0 && cfg.tau < std::min(1.0 / (rho * x1), 1.0 / (rho * x2))))
            throw Error("lemma1_approx: requires tau < min(1/(rho xi*_1), 1/(rho xi*_2))");

        const double s = static_cast<double>(dist.shape);
        const double sf = factorial(dist.shape);
        const double theta0 = std::pow(cfg.tau, s) / (sf * std::pow(dist.a, s));
        const double theta[2] = {1.0 / (sf * std::pow(rho * dist.a * x1, s)),
                                 1.0 / (sf * std::pow(rho * dist.a * x2, s))};

        double total = 2.0 * (theta[1] - theta0) * theta0;
        for (double th : theta)
            total += -0.5 * (theta0 * theta0 - th * th) + 0.5 * th * th;
        return total;
    }

    // Least-squares slope of log10(y) against log10(x).
    inline double loglog_slope(std::span<const double> x, std::span<const double> y)
    {
        require(x.size() == y.size() && x.size() >= 2, "loglog_slope: need at least two matching points");
        double mx = 0.0, my = 0.0;
        const double n = static_cast<double>(x.size());
        for (std::size_t i = 0; i < x.size(); ++i)
        {
            require(x[i] > 0.0 && y[i] > 0.0, "loglog_slope: values must be positive");
            mx += std::log10(x[i]) / n;
            my += std::log10(y[i]) / n;
        }
        double sxy = 0.0, sxx = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
        {
            const double dx = std::log10(x[i]) - mx;
            sxy += dx * (std::log10(y[i]) - my);
            sxx += dx * dx;
        }
        require(sxx > 0.0, "loglog_slope: x values must not all coincide");
        return sxy / sxx;
    }
}

#endif
