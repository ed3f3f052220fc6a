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

#include <cmath>
#include <numbers>
#include <random>

#include "mmnoma/geometry.hpp"
#include "support/oracles.hpp"

using namespace mmnoma;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
    CMatrix random_unitary(Eigen::Index n, std::mt19937_64 &rng)
    {
        std::normal_distribution<double> normal;
        CMatrix A(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                A(i, j) = cplx(normal(rng), normal(rng));
        Eigen::HouseholderQR<CMatrix> qr(A);
        return qr.householderQ() * CMatrix::Identity(n, n);
    }
}

TEST_CASE("UCA element placement", "[geometry]")
{
    SECTION("single element at the origin")
    {
        const auto a = build_uca(1, 0.0);
        REQUIRE(a.element_positions.size() == 1);
        CHECK(a.element_positions[0].x == 0.0);
        CHECK(a.element_positions[0].y == 0.0);
    }
    SECTION("four elements on the unit circle")
    {
        const auto a = build_uca(4, 1.0);
        const double expected[4][2] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        for (int m = 0; m < 4; ++m)
        {
            CHECK_THAT(a.element_positions[m].x, WithinAbs(expected[m][0], 1e-15));
            CHECK_THAT(a.element_positions[m].y, WithinAbs(expected[m][1], 1e-15));
        }
    }
    SECTION("half-wavelength spacing for 50 elements")
    {
        const double r = uca_radius_for_spacing(50, 0.5);
        CHECK_THAT(r, WithinRel(0.25 / std::sin(std::numbers::pi / 50.0), 1e-15));
        const auto a = build_uca(50, r);
        for (std::size_t m = 0; m < 50; ++m)
        {
            const auto &p = a.element_positions[m];
            const auto &q = a.element_positions[(m + 1) % 50];
            CHECK_THAT(std::hypot(p.x - q.x, p.y - q.y), WithinAbs(0.5, 1e-12));
            CHECK_THAT(std::hypot(p.x, p.y), WithinAbs(r, 1e-12));
        }
    }
    SECTION("invalid input")
    {
        CHECK_THROWS_AS(build_uca(0, 1.0), Error);
        CHECK_THROWS_AS(build_uca(4, -1.0), Error);
    }
}

TEST_CASE("one-ring correlation", "[geometry]")
{
    const auto array = build_uca(8, uca_radius_for_spacing(8, 0.5));

    SECTION("zero spread is the single-ray outer product")
    {
        const ClusterGeometry c{0.7, 0.0, 0};
        const CMatrix R = one_ring_correlation(array, c, 512);
        const CVector a = steering_vector(array, 0.7);
        CHECK((R - a * a.adjoint()).norm() < 1e-12);
        CHECK(effective_rank(R) == 1);
        const auto eig = eigen_truncate(R, 1e-6);
        REQUIRE(eig.rank() == 1);
        CHECK_THAT(eig.eigenvalues(0), WithinRel(8.0, 1e-12));
    }

    SECTION("unit diagonal and exact Hermitian symmetry")
    {
        for (double spread : {0.0, 0.05, 0.3, 1.2, std::numbers::pi})
        {
            const CMatrix R = one_ring_correlation(array, {1.1, spread, 0}, 300);
            for (Eigen::Index m = 0; m < R.rows(); ++m)
                CHECK(R(m, m) == cplx(1.0, 0.0));
            CHECK(R == R.adjoint());
            CHECK_THAT(R.trace().real(), WithinAbs(8.0, 1e-12));
            const Eigen::SelfAdjointEigenSolver<CMatrix> es(R);
            CHECK(es.eigenvalues().minCoeff() >= -1e-10);
        }
    }

    SECTION("midpoint rule agrees with adaptive quadrature")
    {
        const double radius = 1.0;
        const auto uca4 = build_uca(4, radius);
        const double delta = std::numbers::pi / 6.0;
        const CMatrix R = one_ring_correlation(uca4, {0.0, delta, 0}, 10000);
        for (std::size_t m = 0; m < 4; ++m)
            for (std::size_t n = 0; n < 4; ++n)
            {
                const auto ref = oracle::one_ring_entry(4, radius, m, n, 0.0, delta);
                CHECK(std::abs(R(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) - ref) <= 1e-6);
            }
    }

    SECTION("negative spread is rejected")
    {
        CHECK_THROWS_AS(one_ring_correlation(array, {0.0, -0.1, 0}, 16), Error);
    }

    SECTION("effective rank grows with angular spread")
    {
        const auto uca16 = build_uca(16, uca_radius_for_spacing(16, 0.5));
        std::size_t previous = 0;
        for (int i = 0; i <= 18; ++i)
        {
            const double spread = std::numbers::pi * i / 36.0;
            const std::size_t r = effective_rank(one_ring_correlation(uca16, {0.4, spread, 0}, 2048), 1e-6);
            CHECK(r >= previous);
            previous = r;
        }
        CHECK(previous > 1);
    }
}

TEST_CASE("eigen truncation", "[geometry]")
{
    SECTION("identity keeps everything")
    {
        const auto eig = eigen_truncate(CMatrix::Identity(5, 5), 1e-6);
        CHECK(eig.rank() == 5);
        CHECK((eig.eigenvalues - RVector::Ones(5)).norm() < 1e-14);
    }

    SECTION("rank-one outer product")
    {
        const auto array = build_uca(6, 0.8);
        const CVector a = steering_vector(array, 0.3);
        const auto eig = eigen_truncate(a * a.adjoint(), 1e-6);
        REQUIRE(eig.rank() == 1);
        CHECK_THAT(eig.eigenvalues(0), WithinRel(6.0, 1e-12));
    }

    SECTION("recovers a constructed spectrum")
    {
        std::mt19937_64 rng(11);
        const CMatrix V = random_unitary(6, rng);
        RVector lambda(6);
        lambda << 4.5, 2.0, 1.25, 0.5, 0.125, 0.0;
        const CMatrix R = V * lambda.cast<cplx>().asDiagonal() * V.adjoint();

        const auto eig = eigen_truncate(R, 1e-6);
        REQUIRE(eig.rank() == 5);
        for (Eigen::Index i = 0; i < 5; ++i)
            CHECK_THAT(eig.eigenvalues(i), WithinAbs(lambda(i), 1e-9));
        CHECK((eig.U * eig.U.adjoint() - CMatrix::Identity(5, 5)).norm() < 1e-10);
        const CMatrix back = eig.U.adjoint() * eig.eigenvalues.cast<cplx>().asDiagonal() * eig.U;
        CHECK((back - R).norm() / R.norm() < 1e-8);
    }

    SECTION("fixed rank")
    {
        const auto eig = eigen_truncate_rank(CMatrix::Identity(4, 4) * 2.0, 2);
        CHECK(eig.rank() == 2);
        CHECK_THROWS_AS(eigen_truncate_rank(CMatrix::Zero(4, 4), 1), Error);
        CHECK_THROWS_AS(eigen_truncate_rank(CMatrix::Identity(4, 4), 5), Error);
    }

    SECTION("all-zero matrix is a degenerate cluster")
    {
        CHECK_THROWS_AS(eigen_truncate(CMatrix::Zero(3, 3), 1e-6), Error);
    }
}

TEST_CASE("cluster correlation invariants", "[geometry]")
{
    const auto array = build_uca(50, uca_radius_for_spacing(50, 0.5));
    for (double az : {0.0, 90.0, 180.0, 270.0})
    {
        const ClusterGeometry c{az * std::numbers::pi / 180.0, 30.0 * std::numbers::pi / 180.0, 0};
        const auto corr = build_correlation(array, c, 2048, {1e-6, 0});
        INFO("azimuth " << az);
        CHECK(corr.rank() == 16);
        CHECK((corr.U * corr.U.adjoint() - CMatrix::Identity(16, 16)).norm() < 1e-10);
        CHECK_THAT(corr.model.trace().real(), WithinAbs(50.0, 1e-8));
        CHECK_THAT(corr.raw.trace().real(), WithinAbs(50.0, 1e-12));
        const CMatrix back = corr.U.adjoint() * corr.eigenvalues.cast<cplx>().asDiagonal() * corr.U;
        CHECK((back - corr.model).norm() / corr.model.norm() <= 1e-8);
        CHECK(corr.model == corr.model.adjoint());
        for (Eigen::Index i = 1; i < corr.eigenvalues.size(); ++i)
            CHECK(corr.eigenvalues(i) <= corr.eigenvalues(i - 1));
        CHECK(corr.eigenvalues(15) > 1e-6 * corr.eigenvalues(0));
        // the discarded spectrum is tiny
        CHECK((corr.model - corr.raw).norm() / corr.raw.norm() < 1e-5);
    }
}
