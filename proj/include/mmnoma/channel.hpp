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

#ifndef MMNOMA_CHANNEL_HPP
#define MMNOMA_CHANNEL_HPP

// Per-trial physics: Rayleigh fast fading, effective channel G Lambda^{1/2} U P, zero-forcing
// noise covariance, and SIC decoding within a NOMA group.
//
// User positions are 1-based throughout: position 1 is the weakest user (largest ZF noise),
// position P the strongest.

#include <cmath>
#include <cstddef>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Cholesky>

#include "seeding.hpp"
#include "types.hpp"

namespace mmnoma
{
    // Power coefficients alpha_p^2 (nonincreasing, summing to one) and target rates in BPCU.
    class GroupConfig
    {
    public:
        GroupConfig() = default;

        GroupConfig(std::vector<double> power, std::vector<double> rates)
            : power_(std::move(power)), rates_(std::move(rates))
        {
            require(!power_.empty(), "group config: need at least one user");
            require(power_.size() == rates_.size(), "group config: one target rate per power coefficient");
            double total = 0.0;
            for (std::size_t p = 0; p < power_.size(); ++p)
            {
                require(power_[p] > 0.0, "group config: power coefficients must be positive");
                require(rates_[p] > 0.0, "group config: target rates must be positive");
                if (p > 0)
                    require(power_[p] <= power_[p - 1], "group config: power coefficients must be nonincreasing (weak users get more power)");
                total += power_[p];
            }
            require(std::abs(total - 1.0) <= 1e-12, "group config: squared power coefficients must sum to 1");
            for (double r : rates_)
                taus_.push_back(std::exp2(r) - 1.0);
        }

        std::size_t users() const { return power_.size(); }
        double power(std::size_t p) const { return power_[p - 1]; } // alpha_p^2
        double rate(std::size_t p) const { return rates_[p - 1]; }
        double tau(std::size_t p) const { return taus_[p - 1]; } // 2^{R_p} - 1
        const std::vector<double> &powers() const { return power_; }
        const std::vector<double> &rates() const { return rates_; }

        // sum_{m > n} alpha_m^2
        double interference_power(std::size_t n) const
        {
            double sum = 0.0;
            for (std::size_t m = n + 1; m <= power_.size(); ++m)
                sum += power_[m - 1];
            return sum;
        }

    private:
        std::vector<double> power_;
        std::vector<double> rates_;
        std::vector<double> taus_;
    };

    // N x r matrix of iid CN(0, 1) entries.
    inline CMatrix sample_fading(std::size_t N, std::size_t r, Engine &rng)
    {
        std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
        CMatrix G(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(r));
        for (Eigen::Index j = 0; j < G.cols(); ++j)
            for (Eigen::Index i = 0; i < G.rows(); ++i)
            {
                const double re = normal(rng);
                const double im = normal(rng);
                G(i, j) = cplx(re, im);
            }
        return G;
    }

    // H_tilde = G Lambda^{1/2} U P
    inline CMatrix compose_effective(const CMatrix &G, const RVector &eigenvalues, const CMatrix &U, const CMatrix &P)
    {
        require(G.cols() == eigenvalues.size() && U.rows() == eigenvalues.size() && U.cols() == P.rows(),
                "compose_effective: nonconforming dimensions");
        return G * eigenvalues.cwiseSqrt().cast<cplx>().asDiagonal() * U * P;
    }

    // Cholesky factor of a Gram matrix usable for inversion: (min_i L_ii / max_i L_ii)^2 > 1e-14.
    inline bool gram_factor_ok(const Eigen::LLT<CMatrix> &llt)
    {
        if (llt.info() != Eigen::Success)
            return false;
        const auto d = llt.matrixLLT().diagonal().real();
        const double lo = d.minCoeff(), hi = d.maxCoeff();
        return hi > 0.0 && lo / hi * (lo / hi) > 1e-14;
    }

    // C = (H^H H)^{-1}. Returns nullopt for a numerically rank-deficient H (callers resample).
    inline std::optional<CMatrix> zf_covariance(const CMatrix &H)
    {
        require(H.rows() >= H.cols(), "zf_covariance: zero-forcing requires N >= Mtilde");
        const CMatrix gram = H.adjoint() * H;
        Eigen::LLT<CMatrix> llt(gram);
        if (!gram_factor_ok(llt))
            return std::nullopt;
        CMatrix C = llt.solve(CMatrix::Identity(gram.rows(), gram.cols()));
        for (Eigen::Index i = 0; i < C.rows(); ++i)
        {
            C(i, i) = cplx(C(i, i).real(), 0.0);
            for (Eigen::Index j = i + 1; j < C.cols(); ++j)
                C(j, i) = std::conj(C(i, j));
        }
        return C;
    }

    // SINR of message n at user p (1 <= n <= p <= P):
    //   rho g alpha_n^2 / (1 + rho g sum_{m>n} alpha_m^2)
    // For n = p = P the interference sum is empty and this is the plain SNR.
    inline double sic_sinr(std::size_t p, std::size_t n, double gain, const GroupConfig &cfg, double rho)
    {
        require(1 <= n && n <= p && p <= cfg.users(), "sic_sinr: need 1 <= n <= p <= P");
        const double signal = rho * gain * cfg.power(n);
        return signal / (1.0 + rho * gain * cfg.interference_power(n));
    }

    struct DecodeOutcome
    {
        std::vector<bool> decoded; // messages 1..p
        bool outage = false;
    };

    // User p runs SIC over messages 1..p; it is in outage if any stage falls short of its
    // rate, i.e. SINR_p^n < 2^{R_n} - 1.
    inline DecodeOutcome decode_outcome(std::size_t p, double gain, const GroupConfig &cfg, double rho)
    {
        require(1 <= p && p <= cfg.users(), "decode_outcome: user position out of range");
        DecodeOutcome out;
        out.decoded.reserve(p);
        for (std::size_t n = 1; n <= p; ++n)
        {
            const bool ok = !out.outage && sic_sinr(p, n, gain, cfg, rho) >= cfg.tau(n);
            out.decoded.push_back(ok);
            if (!ok)
                out.outage = true;
        }
        return out;
    }

    // Allocation-free variant of decode_outcome for the trial loop.
    inline bool sic_outage(std::size_t p, double gain, const GroupConfig &cfg, double rho)
    {
        for (std::size_t n = 1; n <= p; ++n)
            if (!(sic_sinr(p, n, gain, cfg, rho) >= cfg.tau(n)))
                return true;
        return false;
    }
}

#endif
