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

#ifndef MMNOMA_GEOMETRY_HPP
#define MMNOMA_GEOMETRY_HPP

// Spatial correlation of clustered users seen from a uniform circular array, under a
// one-ring scattering model with a uniform power azimuth spectrum, and the truncated
// eigenstructure (U, Lambda, r) that the rest of the library consumes.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include <Eigen/Eigenvalues>

#include "types.hpp"

namespace mmnoma
{
    struct Position2
    {
        double x = 0.0; // [wavelengths]
        double y = 0.0; // [wavelengths]
    };

    struct ArrayGeometry
    {
        std::size_t num_antennas = 0;
        double radius_wavelengths = 0.0;
        std::vector<Position2> element_positions;
    };

    struct ClusterGeometry
    {
        double center_azimuth = 0.0; // [rad]
        double angular_spread = 0.0; // half-width [rad], 0 <= spread <= pi
        std::size_t cluster_id = 0;
    };

    // Truncated eigenstructure: rows of U are orthonormal eigenvectors (r x M),
    // eigenvalues in nonincreasing order.
    struct EigenTruncation
    {
        CMatrix U;
        RVector eigenvalues;

        std::size_t rank() const { return static_cast<std::size_t>(eigenvalues.size()); }
    };

    // raw:   the one-ring matrix itself, unit diagonal, trace M.
    // model: U^H Lambda U, the rank-r matrix the channel is generated from. The retained
    //        eigenvalues are rescaled so that trace(model) = M.
    struct CorrelationMatrix
    {
        CMatrix raw;
        CMatrix model;
        CMatrix U;
        RVector eigenvalues;

        std::size_t rank() const { return static_cast<std::size_t>(eigenvalues.size()); }
        std::size_t num_antennas() const { return static_cast<std::size_t>(raw.rows()); }
    };

    // Either keep eigenvalues above threshold * lambda_max, or (fixed_rank > 0) the top fixed_rank.
    struct TruncationRule
    {
        double threshold = 1e-6;
        std::size_t fixed_rank = 0;
    };

    // Element m sits at angle 2*pi*m/M (m = 0..M-1).
    inline ArrayGeometry build_uca(std::size_t num_antennas, double radius_wavelengths)
    {
        require(num_antennas >= 1, "build_uca: need at least one antenna");
        require(radius_wavelengths >= 0.0, "build_uca: radius must be nonnegative");

        ArrayGeometry array;
        array.num_antennas = num_antennas;
        array.radius_wavelengths = radius_wavelengths;
        array.element_positions.reserve(num_antennas);
        for (std::size_t m = 0; m < num_antennas; ++m)
        {
            const double phi = 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(num_antennas);
            array.element_positions.push_back({radius_wavelengths * std::cos(phi), radius_wavelengths * std::sin(phi)});
        }
        return array;
    }

    // Radius giving the requested chord length between adjacent elements: 2 r sin(pi/M) = spacing.
    inline double uca_radius_for_spacing(std::size_t num_antennas, double spacing_wavelengths)
    {
        require(num_antennas >= 1, "uca_radius_for_spacing: need at least one antenna");
        if (num_antennas == 1)
            return 0.0;
        return 0.5 * spacing_wavelengths / std::sin(std::numbers::pi / static_cast<double>(num_antennas));
    }

    // a_m(alpha) = exp(j 2 pi <u_m, d(alpha)>)
    inline CVector steering_vector(const ArrayGeometry &array, double azimuth)
    {
        const double dx = std::cos(azimuth), dy = std::sin(azimuth);
        CVector a(static_cast<Eigen::Index>(array.num_antennas));
        for (std::size_t m = 0; m < array.num_antennas; ++m)
        {
            const auto &u = array.element_positions[m];
            a(static_cast<Eigen::Index>(m)) = std::polar(1.0, 2.0 * std::numbers::pi * (u.x * dx + u.y * dy));
        }
        return a;
    }

    // Overwrites the lower triangle with the conjugate of the upper one and forces a real
    // diagonal, so that R == R^H holds bit for bit.
    inline void make_hermitian(CMatrix &R)
    {
        const Eigen::Index n = R.rows();
        for (Eigen::Index i = 0; i < n; ++i)
        {
            R(i, i) = cplx(R(i, i).real(), 0.0);
            for (Eigen::Index j = i + 1; j < n; ++j)
                R(j, i) = std::conj(R(i, j));
        }
    }

    // [R]_{m,n} = 1/(2 Delta) * integral over [theta - Delta, theta + Delta] of a_m(alpha) a_n(alpha)^*,
    // evaluated with the midpoint rule. Delta = 0 collapses to a(theta) a(theta)^H.
    inline CMatrix one_ring_correlation(const ArrayGeometry &array, const ClusterGeometry &cluster,
                                        std::size_t quadrature_points = 2048)
    {
        require(cluster.angular_spread >= 0.0, "one_ring_correlation: angular spread must be nonnegative");
        require(cluster.angular_spread <= std::numbers::pi, "one_ring_correlation: angular spread must not exceed pi");
        require(quadrature_points >= 1, "one_ring_correlation: need at least one quadrature point");

        const auto M = static_cast<Eigen::Index>(array.num_antennas);
        const std::size_t Q = cluster.angular_spread == 0.0 ? 1 : quadrature_points;
        const double width = 2.0 * cluster.angular_spread;

        CMatrix A(M, static_cast<Eigen::Index>(Q));
        for (std::size_t j = 0; j < Q; ++j)
        {
            const double alpha = cluster.center_azimuth - cluster.angular_spread +
                                  (static_cast<double>(j) + 0.5) * width / static_cast<double>(Q);
            A.col(static_cast<Eigen::Index>(j)) = steering_vector(array, alpha);
        }

        CMatrix R = (A * A.adjoint()) / static_cast<double>(Q);
        make_hermitian(R);
        for (Eigen::Index m = 0; m < M; ++m)
            R(m, m) = cplx(1.0, 0.0); // |a_m|^2 = 1 analytically
        return R;
    }

    namespace detail
    {
        // Eigenpairs of a Hermitian matrix, sorted by nonincreasing eigenvalue.
        inline std::pair<RVector, CMatrix> sorted_eigenpairs(const CMatrix &R)
        {
            require(R.rows() == R.cols() && R.rows() > 0, "eigen decomposition: matrix must be square and nonempty");
            Eigen::SelfAdjointEigenSolver<CMatrix> solver(R);
            require(solver.info() == Eigen::Success, "eigen decomposition failed");
            // Eigen returns ascending order
            return {solver.eigenvalues().reverse(), solver.eigenvectors().rowwise().reverse()};
        }

        inline EigenTruncation keep_leading(const RVector &values, const CMatrix &vectors, std::size_t r)
        {
            EigenTruncation out;
            out.eigenvalues = values.head(static_cast<Eigen::Index>(r));
            out.U = vectors.leftCols(static_cast<Eigen::Index>(r)).adjoint();
            return out;
        }
    }

    // Keeps eigenvalues strictly above threshold * lambda_max.
    inline EigenTruncation eigen_truncate(const CMatrix &R, double threshold)
    {
        require(threshold > 0.0, "eigen_truncate: threshold must be positive");
        const auto [values, vectors] = detail::sorted_eigenpairs(R);
        const double cutoff = threshold * values(0);
        std::size_t r = 0;
        while (r < static_cast<std::size_t>(values.size()) && values(static_cast<Eigen::Index>(r)) > cutoff && values(static_cast<Eigen::Index>(r)) > 0.0)
            ++r;
        if (r == 0)
            throw Error("eigen_truncate: no eigenvalue above threshold (degenerate cluster)");
        return detail::keep_leading(values, vectors, r);
    }

    // Keeps exactly the leading `rank` eigenpairs; all of them must be strictly positive.
    inline EigenTruncation eigen_truncate_rank(const CMatrix &R, std::size_t rank)
    {
        require(rank >= 1, "eigen_truncate_rank: rank must be positive");
        require(rank <= static_cast<std::size_t>(R.rows()), "eigen_truncate_rank: rank exceeds matrix dimension");
        const auto [values, vectors] = detail::sorted_eigenpairs(R);
        if (!(values(static_cast<Eigen::Index>(rank) - 1) > 0.0))
            throw Error("eigen_truncate_rank: requested rank includes non-positive eigenvalues (degenerate cluster)");
        return detail::keep_leading(values, vectors, rank);
    }

    // Count of eigenvalues above rel_threshold * lambda_max.
    inline std::size_t effective_rank(const CMatrix &R, double rel_threshold = 1e-6)
    {
        const auto [values, vectors] = detail::sorted_eigenpairs(R);
        std::size_t r = 0;
        for (Eigen::Index i = 0; i < values.size(); ++i)
            r += values(i) > rel_threshold * values(0) ? 1u : 0u;
        return r;
    }

    inline CorrelationMatrix build_correlation(const ArrayGeometry &array, const ClusterGeometry &cluster,
                                               std::size_t quadrature_points = 2048, TruncationRule rule = {})
    {
        CorrelationMatrix out;
        out.raw = one_ring_correlation(array, cluster, quadrature_points);

        EigenTruncation eig = rule.fixed_rank > 0 ? eigen_truncate_rank(out.raw, rule.fixed_rank)
                                                  : eigen_truncate(out.raw, rule.threshold);
        const double M = static_cast<double>(array.num_antennas);
        eig.eigenvalues *= M / eig.eigenvalues.sum();

        out.U = std::move(eig.U);
        out.eigenvalues = std::move(eig.eigenvalues);
        out.model = out.U.adjoint() * out.eigenvalues.cast<cplx>().asDiagonal() * out.U;
        make_hermitian(out.model);
        return out;
    }
}

#endif
