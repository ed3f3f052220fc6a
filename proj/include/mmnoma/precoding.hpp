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

#ifndef MMNOMA_PRECODING_HPP
#define MMNOMA_PRECODING_HPP

// Inter-cluster null-space precoders, per-group canonical beam vectors, and the
// deterministic constants a_kq = 1 / [(P_k^H R_k P_k)^{-1}]_{q,q}.

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/SVD>

#include "geometry.hpp"
#include "types.hpp"

namespace mmnoma
{
    struct NullPrecoder
    {
        CMatrix P;                       // M x Mtilde, orthonormal columns
        std::size_t expected_dim = 0;    // M - sum of the other clusters' ranks (clamped at 0)
        bool rank_deficient_stack = false; // null space larger than expected
    };

    // Orthonormal basis of the null space of [U_1; ...; U_{k-1}; U_{k+1}; ...; U_K] (k is 0-based).
    // Singular values below 1e-10 * sigma_max count as zero. Column order follows the SVD.
    inline NullPrecoder build_null_precoder(std::size_t k, std::span<const CMatrix> all_U)
    {
        require(k < all_U.size(), "build_null_precoder: cluster index out of range");
        const Eigen::Index M = all_U[k].cols();

        Eigen::Index stacked_rows = 0;
        for (std::size_t i = 0; i < all_U.size(); ++i)
        {
            require(all_U[i].cols() == M, "build_null_precoder: eigenvector matrices must share the antenna count");
            if (i != k)
                stacked_rows += all_U[i].rows();
        }

        NullPrecoder out;
        out.expected_dim = static_cast<std::size_t>(std::max<Eigen::Index>(0, M - stacked_rows));
        if (stacked_rows == 0)
        {
            out.P = CMatrix::Identity(M, M);
            return out;
        }

        CMatrix stacked(stacked_rows, M);
        Eigen::Index row = 0;
        for (std::size_t i = 0; i < all_U.size(); ++i)
        {
            if (i == k)
                continue;
            stacked.middleRows(row, all_U[i].rows()) = all_U[i];
            row += all_U[i].rows();
        }

        Eigen::JacobiSVD<CMatrix> svd(stacked, Eigen::ComputeFullV);
        const RVector &sigma = svd.singularValues();
        const double cutoff = 1e-10 * sigma(0);
        Eigen::Index rank = 0;
        while (rank < sigma.size() && sigma(rank) > cutoff)
            ++rank;

        const Eigen::Index null_dim = M - rank;
        if (null_dim == 0)
            throw Error("build_null_precoder: no interference-free dimensions for cluster " + std::to_string(k + 1));
        out.P = svd.matrixV().rightCols(null_dim);
        out.rank_deficient_stack = static_cast<std::size_t>(null_dim) > out.expected_dim;
        return out;
    }

    // a_kq = 1 / [S^{-1}]_{q,q} (q 0-based). This is the Schur complement of S_qq, hence positive
    // and bounded above by S_qq.
    inline double effective_gain_constant(const CMatrix &S, std::size_t q)
    {
        require(S.rows() == S.cols(), "effective_gain_constant: matrix must be square");
        require(q < static_cast<std::size_t>(S.rows()), "effective_gain_constant: index out of range");
        Eigen::LLT<CMatrix> llt(S);
        if (llt.info() != Eigen::Success || !(llt.rcond() > 1e-14))
            throw Error("effective_gain_constant: effective correlation is singular");

        // [S^{-1}]_qq = || L^{-1} e_q ||^2
        CVector e = CVector::Zero(S.rows());
        e(static_cast<Eigen::Index>(q)) = 1.0;
        const CVector v = llt.matrixL().solve(e);
        return 1.0 / v.squaredNorm();
    }

    // w_q: the q-th canonical vector of length m_tilde (q 0-based).
    inline CVector group_beam(std::size_t q, std::size_t m_tilde)
    {
        require(q < m_tilde, "group_beam: group index exceeds effective dimension");
        CVector w = CVector::Zero(static_cast<Eigen::Index>(m_tilde));
        w(static_cast<Eigen::Index>(q)) = 1.0;
        return w;
    }

    struct ClusterPrecoding
    {
        CMatrix P;                  // M x Mtilde
        CMatrix S;                  // P^H R P, Mtilde x Mtilde
        std::vector<double> a;      // a_kq for q = 0..Mtilde-1
        CMatrix cluster_map;        // Lambda^{1/2} U P (r x Mtilde); H_tilde = G * cluster_map
        bool rank_deficient_stack = false;
    };

    struct PrecoderSet
    {
        std::size_t m_tilde = 0;
        std::vector<ClusterPrecoding> clusters;

        // max over i != k of ||U_i P_k||_F
        double max_leakage(std::span<const CorrelationMatrix> correlations) const
        {
            double worst = 0.0;
            for (std::size_t k = 0; k < clusters.size(); ++k)
                for (std::size_t i = 0; i < correlations.size(); ++i)
                    if (i != k)
                        worst = std::max(worst, (correlations[i].U * clusters[k].P).norm());
            return worst;
        }
    };

    // Precoders for every cluster, cut to a common effective dimension (the smallest null space).
    inline PrecoderSet build_precoder_set(std::span<const CorrelationMatrix> correlations)
    {
        require(!correlations.empty(), "build_precoder_set: need at least one cluster");
        std::vector<CMatrix> all_U;
        all_U.reserve(correlations.size());
        for (const auto &c : correlations)
            all_U.push_back(c.U);

        std::vector<NullPrecoder> raw;
        raw.reserve(correlations.size());
        for (std::size_t k = 0; k < correlations.size(); ++k)
            raw.push_back(build_null_precoder(k, all_U));

        PrecoderSet set;
        set.m_tilde = static_cast<std::size_t>(raw.front().P.cols());
        for (const auto &n : raw)
            set.m_tilde = std::min(set.m_tilde, static_cast<std::size_t>(n.P.cols()));

        const auto mt = static_cast<Eigen::Index>(set.m_tilde);
        for (std::size_t k = 0; k < correlations.size(); ++k)
        {
            ClusterPrecoding cp;
            cp.P = raw[k].P.leftCols(mt);
            cp.rank_deficient_stack = raw[k].rank_deficient_stack;
            cp.S = cp.P.adjoint() * correlations[k].model * cp.P;
            make_hermitian(cp.S);
            for (std::size_t q = 0; q < set.m_tilde; ++q)
                cp.a.push_back(effective_gain_constant(cp.S, q));
            cp.cluster_map = correlations[k].eigenvalues.cwiseSqrt().cast<cplx>().asDiagonal() * correlations[k].U * cp.P;
            set.clusters.push_back(std::move(cp));
        }
        return set;
    }
}

#endif
