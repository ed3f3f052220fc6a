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

#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "mmnoma/config.hpp"
#include "mmnoma/precoding.hpp"
#include "mmnoma/simulator.hpp"

using namespace mmnoma;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
    CMatrix random_orthonormal_rows(Eigen::Index rows, Eigen::Index cols, std::mt19937_64 &rng)
    {
        std::normal_distribution<double> normal;
        CMatrix A(cols, cols);
        for (Eigen::Index i = 0; i < cols; ++i)
            for (Eigen::Index j = 0; j < cols; ++j)
                A(i, j) = cplx(normal(rng), normal(rng));
        Eigen::HouseholderQR<CMatrix> qr(A);
        const CMatrix Q = qr.householderQ() * CMatrix::Identity(cols, cols);
        return Q.leftCols(rows).adjoint();
    }

    CMatrix projector(const CMatrix &P) { return P * P.adjoint(); }
}

TEST_CASE("null-space precoder", "[precoding]")
{
    SECTION("single cluster needs no nulling")
    {
        std::vector<CMatrix> U{CMatrix::Identity(3, 6)};
        const auto np = build_null_precoder(0, U);
        CHECK(np.P == CMatrix::Identity(6, 6));
        CHECK(np.expected_dim == 6);
    }

    SECTION("disjoint canonical subspaces")
    {
        const Eigen::Index M = 7, r = 3;
        CMatrix U1 = CMatrix::Zero(r, M), U2 = CMatrix::Zero(r, M);
        for (Eigen::Index i = 0; i < r; ++i)
        {
            U1(i, i) = 1.0;
            U2(i, r + i) = 1.0;
        }
        std::vector<CMatrix> U{U1, U2};
        const auto np = build_null_precoder(0, U);
        REQUIRE(np.P.cols() == M - r);
        CHECK_FALSE(np.rank_deficient_stack);
        // P_1 spans every coordinate outside U_2's support
        CMatrix expected = CMatrix::Identity(M, M);
        for (Eigen::Index i = r; i < 2 * r; ++i)
            expected(i, i) = 0.0;
        CHECK((projector(np.P) - expected).norm() < 1e-12);
    }

    SECTION("random subspaces: dimension, orthonormality, leakage")
    {
        std::mt19937_64 rng(5);
        std::vector<CMatrix> U;
        for (int k = 0; k < 3; ++k)
            U.push_back(random_orthonormal_rows(3, 10, rng));
        for (std::size_t k = 0; k < 3; ++k)
        {
            const auto np = build_null_precoder(k, U);
            REQUIRE(np.P.cols() == 4);
            CHECK((np.P.adjoint() * np.P - CMatrix::Identity(4, 4)).norm() < 1e-10);
            for (std::size_t i = 0; i < 3; ++i)
                if (i != k)
                    CHECK((U[i] * np.P).norm() <= 1e-10);
        }
    }

    SECTION("no interference-free dimensions")
    {
        std::mt19937_64 rng(6);
        std::vector<CMatrix> U{random_orthonormal_rows(2, 4, rng), random_orthonormal_rows(4, 4, rng)};
        CHECK_THROWS_WITH(build_null_precoder(0, U), Catch::Matchers::ContainsSubstring("no interference-free dimensions"));
    }

    SECTION("rank-deficient stacking is flagged")
    {
        std::mt19937_64 rng(7);
        const CMatrix shared = random_orthonormal_rows(2, 8, rng);
        std::vector<CMatrix> U{random_orthonormal_rows(2, 8, rng), shared, shared};
        const auto np = build_null_precoder(0, U);
        CHECK(np.expected_dim == 4);
        CHECK(np.P.cols() == 6);
        CHECK(np.rank_deficient_stack);
    }

    SECTION("span does not depend on the basis of the other clusters' subspaces")
    {
        std::mt19937_64 rng(8);
        std::vector<CMatrix> U;
        for (int k = 0; k < 3; ++k)
            U.push_back(random_orthonormal_rows(3, 12, rng));
        const auto before = build_null_precoder(0, U);
        for (std::size_t i = 1; i < 3; ++i)
        {
            const CMatrix V = random_orthonormal_rows(3, 3, rng);
            U[i] = V * U[i];
        }
        const auto after = build_null_precoder(0, U);
        CHECK((projector(before.P) - projector(after.P)).norm() <= 1e-9);
    }
}

TEST_CASE("effective gain constant", "[precoding]")
{
    CHECK_THAT(effective_gain_constant(CMatrix::Identity(3, 3), 0), WithinRel(1.0, 1e-15));
    CHECK_THAT(effective_gain_constant(CMatrix::Identity(3, 3), 2), WithinRel(1.0, 1e-15));

    CMatrix D = CMatrix::Zero(2, 2);
    D(0, 0) = 2.0;
    D(1, 1) = 5.0;
    CHECK_THAT(effective_gain_constant(D, 0), WithinRel(2.0, 1e-14));
    CHECK_THAT(effective_gain_constant(D, 1), WithinRel(5.0, 1e-14));

    CMatrix S(2, 2);
    S << 2.0, 0.5, 0.5, 1.0;
    CHECK_THAT(effective_gain_constant(S, 0), WithinRel(1.75, 1e-14));
    CHECK_THAT(effective_gain_constant(S, 1), WithinRel(1.0 - 0.125, 1e-14));

    CMatrix singular(2, 2);
    singular << 1.0, 1.0, 1.0, 1.0;
    CHECK_THROWS_AS(effective_gain_constant(singular, 0), Error);

    SECTION("Schur complement bound on random positive definite matrices")
    {
        std::mt19937_64 rng(9);
        std::normal_distribution<double> normal;
        for (int trial = 0; trial < 50; ++trial)
        {
            CMatrix A(4, 6);
            for (Eigen::Index i = 0; i < 4; ++i)
                for (Eigen::Index j = 0; j < 6; ++j)
                    A(i, j) = cplx(normal(rng), normal(rng));
            const CMatrix Spd = A * A.adjoint();
            for (std::size_t q = 0; q < 4; ++q)
            {
                const double a = effective_gain_constant(Spd, q);
                const double direct = 1.0 / Spd.inverse()(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(q)).real();
                CHECK(a > 0.0);
                CHECK(a <= Spd(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(q)).real() * (1 + 1e-12));
                CHECK_THAT(a, WithinRel(direct, 1e-9));
            }
        }
    }
}

TEST_CASE("precoder set for the full-scale layout", "[precoding]")
{
    const Scenario sc = build_scenario(preset("fig2"));
    CHECK(sc.m_tilde == 2);
    CHECK(sc.precoders.max_leakage(sc.correlations) <= 1e-9);
    for (const auto &c : sc.precoders.clusters)
    {
        CHECK((c.P.adjoint() * c.P - CMatrix::Identity(2, 2)).norm() < 1e-10);
        const Eigen::SelfAdjointEigenSolver<CMatrix> es(c.S);
        CHECK(es.eigenvalues().minCoeff() > 0.0);
        for (std::size_t q = 0; q < 2; ++q)
        {
            CHECK(c.a[q] > 0.0);
            CHECK(c.a[q] <= c.S(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(q)).real() * (1 + 1e-12));
        }
        CHECK(std::abs(group_beam(1, 2).squaredNorm() - 1.0) == 0.0);
    }
}
