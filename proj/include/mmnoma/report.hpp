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

#ifndef MMNOMA_REPORT_HPP
#define MMNOMA_REPORT_HPP

// Output files: the per-(SNR, protocol, cluster, group, user) CSV table and the JSON run manifest.
//
// CSV columns (UTF-8, LF line endings):
//   rho_db,protocol,cluster,group,user,outage_mc,stderr,outage_closed_form,sum_rate
// cluster/group/user are 1-based; user is the gain rank within its group (1 = weakest).
// sum_rate is the group's outage sum-rate, repeated on each of its user rows: the Monte Carlo
// value when trials were run, otherwise the closed form where one exists. Missing values are
// empty fields.

#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "config.hpp"
#include "simulator.hpp"

namespace mmnoma
{
    inline constexpr const char *kCsvHeader =
        "rho_db,protocol,cluster,group,user,outage_mc,stderr,outage_closed_form,sum_rate";

    namespace detail
    {
        inline std::string format_number(double v)
        {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.10g", v);
            return buf;
        }

        inline std::string format_optional(const std::optional<double> &v)
        {
            return v ? format_number(*v) : std::string();
        }
    }

    inline void write_csv(std::ostream &out, const Scenario &sc, const EstimateResult &res)
    {
        out << kCsvHeader << '\n';
        for (const auto &row : res.outage)
        {
            const auto &sr = res.sum_rate_at(row.variant, row.snr_index, row.cluster, row.group);
            const std::optional<double> sum_rate = sr.mc ? sr.mc : sr.closed_form;
            out << detail::format_number(sc.config.sweep.snr_db[row.snr_index]) << ','
                << res.variants[row.variant].label() << ','
                << row.cluster + 1 << ',' << row.group + 1 << ',' << row.user << ','
                << (row.mc ? detail::format_number(row.mc->outage) : std::string()) << ','
                << (row.mc ? detail::format_number(row.mc->standard_error) : std::string()) << ','
                << detail::format_optional(row.closed_form) << ','
                << detail::format_optional(sum_rate) << '\n';
        }
    }

    inline std::string csv_string(const Scenario &sc, const EstimateResult &res)
    {
        std::ostringstream out;
        write_csv(out, sc, res);
        return out.str();
    }

    // Resolved config plus the derived quantities needed to check results by hand.
    inline nlohmann::json manifest_json(const Scenario &sc, const EstimateResult &res, bool analytical_only)
    {
        using nlohmann::json;
        json derived;
        derived["m_tilde"] = sc.m_tilde;
        derived["gain_shape"] = sc.config.receive_antennas - sc.m_tilde + 1;
        derived["max_precoder_leakage"] = sc.precoders.max_leakage(sc.correlations);
        derived["xi"] = sc.xi.xi;
        derived["xi_star"] = sc.xi.xi_star;
        std::vector<double> taus;
        for (std::size_t p = 1; p <= sc.users(); ++p)
            taus.push_back(sc.group.tau(p));
        derived["sinr_thresholds"] = taus;
        derived["clusters"] = json::array();
        for (std::size_t k = 0; k < sc.num_clusters(); ++k)
        {
            const auto &c = sc.correlations[k];
            std::vector<double> eig(c.eigenvalues.data(), c.eigenvalues.data() + c.eigenvalues.size());
            const auto &a = sc.precoders.clusters[k].a;
            derived["clusters"].push_back({{"cluster", k + 1},
                                           {"rank", c.rank()},
                                           {"eigenvalues", eig},
                                           {"a", std::vector<double>(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(sc.config.groups_per_cluster))},
                                           {"rank_deficient_stack", sc.precoders.clusters[k].rank_deficient_stack}});
        }

        json run;
        run["analytical_only"] = analytical_only;
        run["trials"] = analytical_only ? 0 : res.trials;
        run["rejected_draws"] = res.rejected_draws;
        if (sc.config.full_system_check && !analytical_only)
            run["max_full_system_leakage_power"] = res.max_leakage_power;
        std::vector<std::string> labels;
        for (const auto &v : res.variants)
            labels.push_back(v.label());
        run["protocol_labels"] = labels;

        return json{{"version", kVersion},
                    {"seed", sc.config.sweep.seed},
                    {"config", config_to_json(sc.config)},
                    {"derived", derived},
                    {"run", run}};
    }
}

#endif
