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

#ifndef MMNOMA_SIMULATOR_HPP
#define MMNOMA_SIMULATOR_HPP

// Monte Carlo engine: geometry -> precoders -> per-trial fading -> ZF gains -> protocol
// outcomes, aggregated over trials with closed-form companions attached.
//
// One trial draws P independent users for every (cluster, group) pair. The same draws feed
// every protocol and every SNR point (common random numbers), so protocol comparisons are
// paired.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "analysis.hpp"
#include "channel.hpp"
#include "geometry.hpp"
#include "precoding.hpp"
#include "seeding.hpp"
#include "types.hpp"

namespace mmnoma
{
    enum class Protocol
    {
        perfect_ordering,
        one_bit,
        oma,
    };

    inline std::string to_string(Protocol p)
    {
        switch (p)
        {
        case Protocol::perfect_ordering:
            return "perfect";
        case Protocol::one_bit:
            return "onebit";
        case Protocol::oma:
            return "oma";
        }
        return "unknown";
    }

    inline Protocol protocol_from_string(const std::string &name)
    {
        if (name == "perfect")
            return Protocol::perfect_ordering;
        if (name == "onebit")
            return Protocol::one_bit;
        if (name == "oma")
            return Protocol::oma;
        throw ConfigError("unknown protocol '" + name + "' (expected perfect, onebit or oma)");
    }

    struct ClusterSpec
    {
        double azimuth_deg = 0.0;
        double spread_deg = 0.0;

        bool operator==(const ClusterSpec &) const = default;
    };

    struct SweepSpec
    {
        std::vector<double> snr_db;
        std::vector<Protocol> protocols;
        std::vector<double> feedback_thresholds; // tau values for the one-bit protocol
        std::uint64_t trials = 0;
        std::uint64_t seed = 0;

        bool operator==(const SweepSpec &) const = default;
    };

    struct RunConfig
    {
        std::size_t num_antennas = 0;   // M
        double radius_wavelengths = 0.0;
        std::vector<ClusterSpec> clusters; // K entries
        std::size_t quadrature_points = 2048;
        double truncation_threshold = 1e-6;
        std::size_t fixed_rank = 0; // 0: rank from truncation_threshold
        std::size_t receive_antennas = 0;  // N
        std::size_t groups_per_cluster = 1; // Q
        std::vector<double> power_coefficients; // alpha_p^2, P entries
        std::vector<double> target_rates;       // R_p [BPCU]
        SweepSpec sweep;
        bool full_system_check = false;

        std::vector<double> snr_linear; // filled by validate_config

        std::size_t users_per_group() const { return power_coefficients.size(); }
        bool operator==(const RunConfig &) const = default;
    };

    // Structural checks that need no geometry. Converts the SNR grid from dB once.
    inline void validate_config(RunConfig &cfg)
    {
        auto fail = [](const std::string &msg) { throw ConfigError(msg); };
        if (cfg.num_antennas < 1)
            fail("num_antennas must be at least 1");
        if (!(cfg.radius_wavelengths >= 0.0))
            fail("radius_wavelengths must be nonnegative");
        if (cfg.clusters.empty())
            fail("at least one cluster is required");
        for (const auto &c : cfg.clusters)
            if (!(c.spread_deg >= 0.0 && c.spread_deg <= 180.0))
                fail("cluster spread_deg must lie in [0, 180]");
        if (cfg.quadrature_points < 1)
            fail("quadrature_points must be at least 1");
        if (!(cfg.truncation_threshold > 0.0))
            fail("truncation_threshold must be positive");
        if (cfg.fixed_rank > cfg.num_antennas)
            fail("rank must not exceed num_antennas");
        if (cfg.receive_antennas < 1)
            fail("receive_antennas must be at least 1");
        if (cfg.groups_per_cluster < 1)
            fail("groups_per_cluster must be at least 1");
        if (cfg.power_coefficients.empty())
            fail("power_coefficients must list at least one user");
        if (cfg.power_coefficients.size() != cfg.target_rates.size())
            fail("power_coefficients and target_rates must have the same length (P)");
        try
        {
            GroupConfig check(cfg.power_coefficients, cfg.target_rates);
        }
        catch (const Error &e)
        {
            fail(e.what());
        }
        if (cfg.sweep.snr_db.empty())
            fail("snr_db must contain at least one value");
        if (cfg.sweep.trials == 0)
            fail("trials must be positive");
        if (cfg.sweep.protocols.empty())
            fail("at least one protocol is required");
        for (auto p : cfg.sweep.protocols)
            if (p == Protocol::one_bit && cfg.sweep.feedback_thresholds.empty())
                fail("protocol onebit needs at least one feedback threshold tau");
        for (double tau : cfg.sweep.feedback_thresholds)
            if (!(tau > 0.0))
                fail("feedback thresholds must be positive");

        cfg.snr_linear.clear();
        for (double db : cfg.sweep.snr_db)
            cfg.snr_linear.push_back(std::pow(10.0, db / 10.0));
    }

    inline double degrees_to_radians(double deg) { return deg * std::numbers::pi / 180.0; }

    // Immutable, fully derived description of one configuration. Shared read-only by workers.
    struct Scenario
    {
        RunConfig config;
        ArrayGeometry array;
        std::vector<CorrelationMatrix> correlations;
        PrecoderSet precoders;
        std::vector<CMatrix> channel_factors; // Lambda_k^{1/2} U_k, r_k x M
        GroupConfig group;
        XiThresholds xi;
        std::size_t m_tilde = 0;

        std::size_t num_clusters() const { return correlations.size(); }
        std::size_t groups_per_cluster() const { return config.groups_per_cluster; }
        std::size_t num_groups() const { return num_clusters() * groups_per_cluster(); }
        std::size_t users() const { return group.users(); }

        // k, q 0-based
        GainDistribution distribution(std::size_t k, std::size_t q) const
        {
            return GainDistribution::from_dimensions(precoders.clusters[k].a[q], config.receive_antennas, m_tilde);
        }
    };

    inline Scenario build_scenario(RunConfig cfg)
    {
        validate_config(cfg);
        Scenario sc;
        sc.array = build_uca(cfg.num_antennas, cfg.radius_wavelengths);

        const TruncationRule rule{cfg.truncation_threshold, cfg.fixed_rank};
        for (std::size_t k = 0; k < cfg.clusters.size(); ++k)
        {
            const ClusterGeometry geo{degrees_to_radians(cfg.clusters[k].azimuth_deg),
                                      degrees_to_radians(cfg.clusters[k].spread_deg), k};
            try
            {
                sc.correlations.push_back(build_correlation(sc.array, geo, cfg.quadrature_points, rule));
            }
            catch (const Error &e)
            {
                throw ConfigError("cluster " + std::to_string(k + 1) + ": " + e.what());
            }
        }

        std::size_t stacked = 0;
        for (std::size_t k = 1; k < sc.correlations.size(); ++k)
            stacked += sc.correlations[k].rank();
        try
        {
            sc.precoders = build_precoder_set(sc.correlations);
        }
        catch (const Error &e)
        {
            throw ConfigError(std::string(e.what()) + " (M=" + std::to_string(cfg.num_antennas) +
                              ", other clusters' ranks sum to " + std::to_string(stacked) + ")");
        }
        sc.m_tilde = sc.precoders.m_tilde;

        if (cfg.receive_antennas < sc.m_tilde)
            throw ConfigError("N=" + std::to_string(cfg.receive_antennas) + " < Mtilde=" + std::to_string(sc.m_tilde) +
                              ": zero-forcing requires N >= Mtilde");
        if (cfg.groups_per_cluster > sc.m_tilde)
            throw ConfigError("Q=" + std::to_string(cfg.groups_per_cluster) + " > Mtilde=" + std::to_string(sc.m_tilde) +
                              ": each group needs its own effective dimension");

        for (const auto &c : sc.correlations)
            sc.channel_factors.push_back(c.eigenvalues.cwiseSqrt().cast<cplx>().asDiagonal() * c.U);

        sc.group = GroupConfig(cfg.power_coefficients, cfg.target_rates);
        sc.xi = xi_thresholds(sc.group);
        sc.config = std::move(cfg);
        return sc;
    }

    // Raw per-trial randomness. gains[g * P + u] is the effective gain 1/[C]_{q,q} of the
    // u-th user drawn for group g = k * Q + q (unsorted); keys[] are uniform tie-break keys used
    // by the one-bit protocol to order users inside a feedback sub-group.
    struct TrialDraw
    {
        std::vector<double> gains;
        std::vector<double> keys;
        std::uint64_t rejected = 0;
        double max_leakage_power = 0.0;
    };

    namespace detail
    {
        // Interference power at a cluster-k user from every other cluster's superimposed
        // transmission, computed through the full M-antenna channel.
        inline double full_system_leakage(const Scenario &sc, std::size_t k, Engine &rng)
        {
            const auto &cfg = sc.config;
            const CMatrix G = sample_fading(cfg.receive_antennas, sc.correlations[k].rank(), rng);
            const CMatrix H = G * sc.channel_factors[k]; // N x M

            std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
            CVector x = CVector::Zero(static_cast<Eigen::Index>(cfg.num_antennas));
            for (std::size_t i = 0; i < sc.num_clusters(); ++i)
            {
                if (i == k)
                    continue;
                CVector stream = CVector::Zero(static_cast<Eigen::Index>(sc.m_tilde));
                for (std::size_t q = 0; q < cfg.groups_per_cluster; ++q)
                {
                    cplx superposed = 0.0;
                    for (std::size_t p = 1; p <= sc.users(); ++p)
                        superposed += std::sqrt(sc.group.power(p)) * std::polar(1.0, phase(rng));
                    stream += group_beam(q, sc.m_tilde) * superposed;
                }
                x += sc.precoders.clusters[i].P * stream;
            }
            return (H * x).squaredNorm();
        }
    }

    namespace detail
    {
        // Reused buffers for one cluster's gain draws.
        struct DrawWorkspace
        {
            CMatrix G, H, gram;
            CVector e;
            Eigen::LLT<CMatrix> llt;
            std::normal_distribution<double> normal{0.0, std::sqrt(0.5)};

            DrawWorkspace(Eigen::Index N, Eigen::Index r, Eigen::Index m)
                : G(N, r), H(N, m), gram(m, m), e(m), llt(m)
            {
            }

            // 1/[C]_{q,q} with C = (H^H H)^{-1}, or nullopt when H is numerically rank deficient
            std::optional<double> draw_gain(const CMatrix &map, Eigen::Index q, Engine &rng)
            {
                for (Eigen::Index j = 0; j < G.cols(); ++j)
                    for (Eigen::Index i = 0; i < G.rows(); ++i)
                    {
                        const double re = normal(rng);
                        const double im = normal(rng);
                        G(i, j) = cplx(re, im);
                    }
                H.noalias() = G * map;
                gram.noalias() = H.adjoint() * H;
                llt.compute(gram);
                if (!gram_factor_ok(llt))
                    return std::nullopt;
                // [C]_{q,q} = ||L^{-1} e_q||^2
                e.setZero();
                e(q) = 1.0;
                llt.matrixL().solveInPlace(e);
                return 1.0 / e.squaredNorm();
            }
        };
    }

    inline TrialDraw draw_trial(const Scenario &sc, std::uint64_t seed)
    {
        const auto &cfg = sc.config;
        const std::size_t P = sc.users();
        Engine rng(seed);

        TrialDraw draw;
        draw.gains.resize(sc.num_groups() * P);
        draw.keys.resize(sc.num_groups() * P);

        for (std::size_t k = 0; k < sc.num_clusters(); ++k)
        {
            const CMatrix &map = sc.precoders.clusters[k].cluster_map;
            detail::DrawWorkspace ws(static_cast<Eigen::Index>(cfg.receive_antennas), map.rows(), map.cols());
            for (std::size_t q = 0; q < cfg.groups_per_cluster; ++q)
            {
                const std::size_t g = k * cfg.groups_per_cluster + q;
                for (std::size_t u = 0; u < P; ++u)
                {
                    for (;;)
                    {
                        const auto gain = ws.draw_gain(map, static_cast<Eigen::Index>(q), rng);
                        if (!gain)
                        {
                            ++draw.rejected;
                            continue;
                        }
                        draw.gains[g * P + u] = *gain;
                        break;
                    }
                }
            }
        }

        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (double &key : draw.keys)
            key = unit(rng);

        if (cfg.full_system_check)
        {
            Engine aux(auxiliary_seed(seed));
            for (std::size_t k = 0; k < sc.num_clusters(); ++k)
                draw.max_leakage_power = std::max(draw.max_leakage_power, detail::full_system_leakage(sc, k, aux));
        }
        return draw;
    }

    struct ProtocolVariant
    {
        Protocol protocol = Protocol::perfect_ordering;
        double tau = 0.0; // one-bit threshold on the effective gain

        std::string label() const
        {
            if (protocol != Protocol::one_bit)
                return to_string(protocol);
            char buf[64];
            std::snprintf(buf, sizeof buf, "onebit(tau=%.6g)", tau);
            return buf;
        }
    };

    inline std::vector<ProtocolVariant> protocol_variants(const RunConfig &cfg)
    {
        std::vector<ProtocolVariant> out;
        for (auto p : cfg.sweep.protocols)
        {
            if (p == Protocol::one_bit)
                for (double tau : cfg.sweep.feedback_thresholds)
                    out.push_back({p, tau});
            else
                out.push_back({p, 0.0});
        }
        return out;
    }

    // Per-trial outcome for one protocol variant at one SNR.
    //   outage[g * P + p - 1]       : user of gain rank p (1 = weakest) failed SIC
    //   slot_success[g * P + s - 1] : the message of NOMA slot s reached its user
    struct TrialOutcome
    {
        std::vector<std::uint8_t> outage;
        std::vector<std::uint8_t> slot_success;
        std::vector<std::size_t> by_gain, by_slot, rank_of; // scratch
    };

    inline void evaluate_trial(const Scenario &sc, const TrialDraw &draw, const ProtocolVariant &variant, double rho,
                               TrialOutcome &out)
    {
        const std::size_t P = sc.users();
        out.outage.assign(sc.num_groups() * P, 0);
        out.slot_success.assign(sc.num_groups() * P, 0);

        auto &by_gain = out.by_gain, &by_slot = out.by_slot, &rank_of = out.rank_of;
        by_gain.resize(P);
        by_slot.resize(P);
        rank_of.resize(P);
        for (std::size_t g = 0; g < sc.num_groups(); ++g)
        {
            const double *gains = &draw.gains[g * P];
            const double *keys = &draw.keys[g * P];
            std::iota(by_gain.begin(), by_gain.end(), std::size_t{0});
            std::sort(by_gain.begin(), by_gain.end(), [&](std::size_t a, std::size_t b) { return gains[a] < gains[b]; });
            for (std::size_t i = 0; i < P; ++i)
                rank_of[by_gain[i]] = i + 1;

            switch (variant.protocol)
            {
            case Protocol::perfect_ordering:
                by_slot = by_gain;
                break;
            case Protocol::oma:
                by_slot = by_gain;
                break;
            case Protocol::one_bit:
            {
                // below-threshold reports take the low slots, above-threshold the high ones;
                // random order inside each sub-group
                std::iota(by_slot.begin(), by_slot.end(), std::size_t{0});
                std::sort(by_slot.begin(), by_slot.end(), [&](std::size_t a, std::size_t b) {
                    const bool sa = gains[a] > variant.tau, sb = gains[b] > variant.tau;
                    if (sa != sb)
                        return !sa;
                    return keys[a] < keys[b];
                });
                break;
            }
            }

            for (std::size_t slot = 1; slot <= P; ++slot)
            {
                const std::size_t user = by_slot[slot - 1];
                bool failed;
                if (variant.protocol == Protocol::oma)
                {
                    // 1/P of the channel uses at full power: (1/P) log2(1 + rho g) < R
                    const double needed = std::exp2(static_cast<double>(P) * sc.group.rate(slot)) - 1.0;
                    failed = !(rho * gains[user] >= needed);
                }
                else
                {
                    failed = sic_outage(slot, gains[user], sc.group, rho);
                }
                out.outage[g * P + rank_of[user] - 1] = failed ? 1 : 0;
                out.slot_success[g * P + slot - 1] = failed ? 0 : 1;
            }
        }
    }

    inline std::vector<TrialOutcome> run_trial(const Scenario &sc, const ProtocolVariant &variant, std::uint64_t seed)
    {
        const TrialDraw draw = draw_trial(sc, seed);
        std::vector<TrialOutcome> out(sc.config.snr_linear.size());
        for (std::size_t i = 0; i < out.size(); ++i)
            evaluate_trial(sc, draw, variant, sc.config.snr_linear[i], out[i]);
        return out;
    }

    inline std::vector<TrialOutcome> run_trial_perfect(const Scenario &sc, std::uint64_t seed)
    {
        return run_trial(sc, {Protocol::perfect_ordering, 0.0}, seed);
    }

    inline std::vector<TrialOutcome> run_trial_onebit(const Scenario &sc, double tau, std::uint64_t seed)
    {
        return run_trial(sc, {Protocol::one_bit, tau}, seed);
    }

    inline std::vector<TrialOutcome> run_trial_oma(const Scenario &sc, std::uint64_t seed)
    {
        return run_trial(sc, {Protocol::oma, 0.0}, seed);
    }

    // Closed-form outage of gain rank p (1-based) in group (k, q), where one exists:
    // order statistics for perfect ordering and OMA, and the two-user
    // one-bit expressions.
    inline std::optional<double> closed_form_outage(const Scenario &sc, const ProtocolVariant &variant, double rho,
                                                    std::size_t k, std::size_t q, std::size_t p)
    {
        const auto dist = sc.distribution(k, q);
        const std::size_t P = sc.users();
        switch (variant.protocol)
        {
        case Protocol::perfect_ordering:
            return outage_perfect(p, P, dist, sc.xi.star(p), rho);
        case Protocol::oma:
        {
            const double xi_oma = 1.0 / (std::exp2(static_cast<double>(P) * sc.group.rate(p)) - 1.0);
            return outage_perfect(p, P, dist, xi_oma, rho);
        }
        case Protocol::one_bit:
        {
            if (P != 2)
                return std::nullopt;
            const OnebitConfig cfg{variant.tau, sc.group};
            return p == 1 ? outage_onebit_weak(cfg, dist, rho) : outage_onebit_strong(cfg, dist, rho);
        }
        }
        return std::nullopt;
    }

    struct OutageEstimate
    {
        double outage = 0.0;
        double standard_error = 0.0;
        std::uint64_t trials = 0;

        static OutageEstimate from_counts(std::uint64_t events, std::uint64_t trials)
        {
            require(trials > 0, "OutageEstimate: need at least one trial");
            const double p = static_cast<double>(events) / static_cast<double>(trials);
            return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(trials)), trials};
        }
    };

    struct OutageRow
    {
        std::size_t variant = 0;
        std::size_t snr_index = 0;
        std::size_t cluster = 0; // 0-based
        std::size_t group = 0;   // 0-based
        std::size_t user = 1;    // gain rank, 1 = weakest
        std::optional<OutageEstimate> mc;
        std::optional<double> closed_form;
    };

    // Average outage sum-rate of one group: sum over slots of R_slot * P(slot message delivered).
    struct SumRateRecord
    {
        std::size_t variant = 0;
        std::size_t snr_index = 0;
        std::size_t cluster = 0;
        std::size_t group = 0;
        std::optional<double> mc;
        std::optional<double> closed_form;
    };

    struct EstimateResult
    {
        std::vector<ProtocolVariant> variants;
        std::vector<OutageRow> outage;
        std::vector<SumRateRecord> sum_rate;
        std::uint64_t trials = 0;
        std::uint64_t rejected_draws = 0;
        double max_leakage_power = 0.0;

        // Layout: rows ordered by (variant, snr, cluster, group, user).
        std::size_t num_snr = 0, groups_per_cluster = 0, num_groups = 0, users = 0;

        const OutageRow &at(std::size_t variant, std::size_t snr, std::size_t k, std::size_t q, std::size_t p) const
        {
            return outage[((variant * num_snr + snr) * num_groups + k * groups_per_cluster + q) * users + (p - 1)];
        }

        const SumRateRecord &sum_rate_at(std::size_t variant, std::size_t snr, std::size_t k, std::size_t q) const
        {
            return sum_rate[(variant * num_snr + snr) * num_groups + k * groups_per_cluster + q];
        }
    };

    namespace detail
    {
        inline void fill_rows(const Scenario &sc, EstimateResult &res, const std::vector<std::uint64_t> *outage_counts,
                              const std::vector<std::uint64_t> *success_counts)
        {
            const auto &cfg = sc.config;
            const std::size_t P = sc.users(), Q = cfg.groups_per_cluster, G = sc.num_groups();
            const std::size_t nsnr = cfg.snr_linear.size();
            res.num_snr = nsnr;
            res.groups_per_cluster = Q;
            res.num_groups = G;
            res.users = P;
            for (std::size_t v = 0; v < res.variants.size(); ++v)
                for (std::size_t i = 0; i < nsnr; ++i)
                    for (std::size_t g = 0; g < G; ++g)
                    {
                        const std::size_t k = g / Q, q = g % Q;
                        const double rho = cfg.snr_linear[i];
                        const std::size_t base = ((v * nsnr + i) * G + g) * P;
                        SumRateRecord sr{v, i, k, q, std::nullopt, std::nullopt};
                        double cf_sum = 0.0;
                        bool cf_complete = res.variants[v].protocol != Protocol::one_bit;
                        double mc_sum = 0.0;
                        for (std::size_t p = 1; p <= P; ++p)
                        {
                            OutageRow row{v, i, k, q, p, std::nullopt, closed_form_outage(sc, res.variants[v], rho, k, q, p)};
                            if (outage_counts)
                                row.mc = OutageEstimate::from_counts((*outage_counts)[base + p - 1], res.trials);
                            if (success_counts)
                                mc_sum += sc.group.rate(p) * static_cast<double>((*success_counts)[base + p - 1]) /
                                          static_cast<double>(res.trials);
                            if (cf_complete && row.closed_form)
                                cf_sum += sc.group.rate(p) * (1.0 - *row.closed_form);
                            res.outage.push_back(row);
                        }
                        if (success_counts)
                            sr.mc = mc_sum;
                        if (cf_complete)
                            sr.closed_form = cf_sum;
                        res.sum_rate.push_back(sr);
                    }
        }
    }

    // Closed-form values only (no trials).
    inline EstimateResult analytical(const Scenario &sc)
    {
        EstimateResult res;
        res.variants = protocol_variants(sc.config);
        detail::fill_rows(sc, res, nullptr, nullptr);
        return res;
    }

    // Runs sweep.trials trials split into contiguous chunks over `workers` threads. Counts are
    // integers and every trial's seed depends only on its index, so the result does not depend
    // on the worker count.
    inline EstimateResult estimate(const Scenario &sc, std::size_t workers = 1)
    {
        const auto &cfg = sc.config;
        require(cfg.sweep.trials > 0, "estimate: trial count must be positive");
        workers = std::max<std::size_t>(1, workers);

        EstimateResult res;
        res.variants = protocol_variants(cfg);
        res.trials = cfg.sweep.trials;

        const std::size_t P = sc.users(), G = sc.num_groups();
        const std::size_t nsnr = cfg.snr_linear.size();
        const std::size_t cells = res.variants.size() * nsnr * G * P;

        struct Partial
        {
            std::vector<std::uint64_t> outage, success;
            std::uint64_t rejected = 0;
            double leakage = 0.0;
        };
        std::vector<Partial> partials(workers);

        auto work = [&](std::size_t w) {
            Partial &part = partials[w];
            part.outage.assign(cells, 0);
            part.success.assign(cells, 0);
            const std::uint64_t begin = cfg.sweep.trials * w / workers;
            const std::uint64_t end = cfg.sweep.trials * (w + 1) / workers;
            TrialOutcome outcome;
            for (std::uint64_t t = begin; t < end; ++t)
            {
                const TrialDraw draw = draw_trial(sc, trial_seed(cfg.sweep.seed, t));
                part.rejected += draw.rejected;
                part.leakage = std::max(part.leakage, draw.max_leakage_power);
                for (std::size_t v = 0; v < res.variants.size(); ++v)
                    for (std::size_t i = 0; i < nsnr; ++i)
                    {
                        evaluate_trial(sc, draw, res.variants[v], cfg.snr_linear[i], outcome);
                        const std::size_t base = (v * nsnr + i) * G * P;
                        for (std::size_t c = 0; c < G * P; ++c)
                        {
                            part.outage[base + c] += outcome.outage[c];
                            part.success[base + c] += outcome.slot_success[c];
                        }
                    }
            }
        };

        if (workers == 1)
            work(0);
        else
        {
            std::vector<std::thread> threads;
            for (std::size_t w = 0; w < workers; ++w)
                threads.emplace_back(work, w);
            for (auto &t : threads)
                t.join();
        }

        std::vector<std::uint64_t> outage(cells, 0), success(cells, 0);
        for (const auto &part : partials)
        {
            for (std::size_t c = 0; c < cells; ++c)
            {
                outage[c] += part.outage[c];
                success[c] += part.success[c];
            }
            res.rejected_draws += part.rejected;
            res.max_leakage_power = std::max(res.max_leakage_power, part.leakage);
        }
        detail::fill_rows(sc, res, &outage, &success);
        return res;
    }
}

#endif
