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

#ifndef MMNOMA_CONFIG_HPP
#define MMNOMA_CONFIG_HPP

// JSON run configurations and the built-in presets.
//
//   {
//     "array": {"antennas": 50, "spacing_wavelengths": 0.5},   // or "radius_wavelengths"
//     "clusters": [{"azimuth_deg": 0, "spread_deg": 30}, ...],
//     "quadrature_points": 2048,          // optional
//     "truncation_threshold": 1e-6,       // optional
//     "rank": 0,                          // optional, 0 = use the threshold
//     "receive_antennas": 2,
//     "groups_per_cluster": 2,            // optional, default 1
//     "power_coefficients": [0.625, 0.25, 0.125],   // alpha_p^2
//     "target_rates": [0.5, 0.5, 3],
//     "snr_db": [0, 10, 20] or {"start": 0, "stop": 30, "step": 2.5},
//     "protocols": ["perfect", "onebit", "oma"],
//     "feedback_thresholds": [0.1],       // required with "onebit"
//     "trials": 100000,
//     "seed": 1,                          // optional, default 0
//     "full_system_check": false          // optional
//   }
//
// A run manifest (which nests the resolved config under "config") is accepted as well.

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "geometry.hpp"
#include "simulator.hpp"
#include "types.hpp"

namespace mmnoma
{
    using json = nlohmann::json;

    namespace detail
    {
        template <typename T>
        T get_required(const json &j, const char *key)
        {
            if (!j.contains(key))
                throw ConfigError(std::string("missing required key '") + key + "'");
            try
            {
                return j.at(key).get<T>();
            }
            catch (const json::exception &e)
            {
                throw ConfigError(std::string("key '") + key + "': " + e.what());
            }
        }

        template <typename T>
        T get_optional(const json &j, const char *key, T fallback)
        {
            return j.contains(key) ? get_required<T>(j, key) : fallback;
        }

        inline std::vector<double> expand_snr(const json &j)
        {
            if (j.is_array())
                return j.get<std::vector<double>>();
            if (!j.is_object())
                throw ConfigError("snr_db must be a list or {start, stop, step}");
            const double start = get_required<double>(j, "start");
            const double stop = get_required<double>(j, "stop");
            const double step = get_required<double>(j, "step");
            if (!(step > 0.0) || stop < start)
                throw ConfigError("snr_db range needs step > 0 and stop >= start");
            const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
            std::vector<double> out;
            for (std::size_t i = 0; i < count; ++i)
                out.push_back(start + static_cast<double>(i) * step);
            return out;
        }

        inline void reject_unknown_keys(const json &j, const std::set<std::string> &known, const std::string &where)
        {
            for (auto it = j.begin(); it != j.end(); ++it)
                if (!known.count(it.key()))
                    throw ConfigError("unknown key '" + it.key() + "' in " + where);
        }
    }

    // Parses and validates (structurally) a configuration document.
    inline RunConfig config_from_json(const json &doc)
    {
        const json &j = doc.contains("config") ? doc.at("config") : doc;
        if (!j.is_object())
            throw ConfigError("configuration must be a JSON object");
        detail::reject_unknown_keys(j,
                                    {"array", "clusters", "quadrature_points", "truncation_threshold", "rank",
                                     "receive_antennas", "groups_per_cluster", "power_coefficients", "target_rates",
                                     "snr_db", "protocols", "feedback_thresholds", "trials", "seed", "full_system_check"},
                                    "configuration");

        RunConfig cfg;
        const json array = detail::get_required<json>(j, "array");
        detail::reject_unknown_keys(array, {"antennas", "radius_wavelengths", "spacing_wavelengths"}, "array");
        cfg.num_antennas = detail::get_required<std::size_t>(array, "antennas");
        if (array.contains("radius_wavelengths") == array.contains("spacing_wavelengths"))
            throw ConfigError("array needs exactly one of radius_wavelengths or spacing_wavelengths");
        cfg.radius_wavelengths = array.contains("radius_wavelengths")
                                     ? detail::get_required<double>(array, "radius_wavelengths")
                                     : uca_radius_for_spacing(std::max<std::size_t>(cfg.num_antennas, 1),
                                                              detail::get_required<double>(array, "spacing_wavelengths"));

        for (const auto &c : detail::get_required<json>(j, "clusters"))
        {
            detail::reject_unknown_keys(c, {"azimuth_deg", "spread_deg"}, "cluster");
            cfg.clusters.push_back({detail::get_required<double>(c, "azimuth_deg"), detail::get_required<double>(c, "spread_deg")});
        }
        cfg.quadrature_points = detail::get_optional<std::size_t>(j, "quadrature_points", 2048);
        cfg.truncation_threshold = detail::get_optional<double>(j, "truncation_threshold", 1e-6);
        cfg.fixed_rank = detail::get_optional<std::size_t>(j, "rank", 0);
        cfg.receive_antennas = detail::get_required<std::size_t>(j, "receive_antennas");
        cfg.groups_per_cluster = detail::get_optional<std::size_t>(j, "groups_per_cluster", 1);
        cfg.power_coefficients = detail::get_required<std::vector<double>>(j, "power_coefficients");
        cfg.target_rates = detail::get_required<std::vector<double>>(j, "target_rates");

        if (!j.contains("snr_db"))
            throw ConfigError("missing required key 'snr_db'");
        cfg.sweep.snr_db = detail::expand_snr(j.at("snr_db"));
        for (const auto &name : detail::get_required<std::vector<std::string>>(j, "protocols"))
            cfg.sweep.protocols.push_back(protocol_from_string(name));
        cfg.sweep.feedback_thresholds = detail::get_optional<std::vector<double>>(j, "feedback_thresholds", {});
        cfg.sweep.trials = detail::get_required<std::uint64_t>(j, "trials");
        cfg.sweep.seed = detail::get_optional<std::uint64_t>(j, "seed", 0);
        cfg.full_system_check = detail::get_optional<bool>(j, "full_system_check", false);

        validate_config(cfg);
        return cfg;
    }

    inline json config_to_json(const RunConfig &cfg)
    {
        json j;
        j["array"] = {{"antennas", cfg.num_antennas}, {"radius_wavelengths", cfg.radius_wavelengths}};
        j["clusters"] = json::array();
        for (const auto &c : cfg.clusters)
            j["clusters"].push_back({{"azimuth_deg", c.azimuth_deg}, {"spread_deg", c.spread_deg}});
        j["quadrature_points"] = cfg.quadrature_points;
        j["truncation_threshold"] = cfg.truncation_threshold;
        j["rank"] = cfg.fixed_rank;
        j["receive_antennas"] = cfg.receive_antennas;
        j["groups_per_cluster"] = cfg.groups_per_cluster;
        j["power_coefficients"] = cfg.power_coefficients;
        j["target_rates"] = cfg.target_rates;
        j["snr_db"] = cfg.sweep.snr_db;
        std::vector<std::string> protocols;
        for (auto p : cfg.sweep.protocols)
            protocols.push_back(to_string(p));
        j["protocols"] = protocols;
        j["feedback_thresholds"] = cfg.sweep.feedback_thresholds;
        j["trials"] = cfg.sweep.trials;
        j["seed"] = cfg.sweep.seed;
        j["full_system_check"] = cfg.full_system_check;
        return j;
    }

    inline RunConfig parse_config_text(std::string_view text)
    {
        json doc;
        try
        {
            doc = json::parse(text, nullptr, true, /*ignore_comments=*/true);
        }
        catch (const json::parse_error &e)
        {
            throw ConfigError(std::string("malformed configuration: ") + e.what());
        }
        return config_from_json(doc);
    }

    inline RunConfig parse_config(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw ConfigError("cannot open configuration file '" + path + "'");
        std::stringstream buffer;
        buffer << in.rdbuf();
        return parse_config_text(buffer.str());
    }

    namespace detail
    {
        // 50-element half-wavelength UCA, four clusters 90 degrees apart with 30 degree spread:
        // a 1e-6 truncation leaves r = 16 per cluster, so Mtilde = 50 - 16 * 3 = 2.
        inline RunConfig full_scale_base()
        {
            RunConfig cfg;
            cfg.num_antennas = 50;
            cfg.radius_wavelengths = uca_radius_for_spacing(50, 0.5);
            cfg.clusters = {{0.0, 30.0}, {90.0, 30.0}, {180.0, 30.0}, {270.0, 30.0}};
            cfg.receive_antennas = 2;
            cfg.groups_per_cluster = 2;
            for (int i = 0; i <= 12; ++i)
                cfg.sweep.snr_db.push_back(2.5 * i);
            cfg.sweep.trials = 100000;
            cfg.sweep.seed = 1;
            return cfg;
        }
    }

    inline const std::vector<std::string> &preset_names()
    {
        static const std::vector<std::string> names{"fig1", "fig2", "fig3", "fig2-desk"};
        return names;
    }

    inline RunConfig preset(std::string_view name)
    {
        RunConfig cfg = detail::full_scale_base();
        if (name == "fig1" || name == "fig2" || name == "fig2-desk")
        {
            cfg.power_coefficients = {5.0 / 8.0, 2.0 / 8.0, 1.0 / 8.0};
            cfg.target_rates = {0.5, 0.5, 3.0};
            cfg.sweep.protocols = name == "fig1" ? std::vector<Protocol>{Protocol::perfect_ordering, Protocol::oma}
                                                 : std::vector<Protocol>{Protocol::perfect_ordering};
            if (name == "fig2-desk")
            {
                // M = 5, K = 2, r = 3: Mtilde = 2 = N
                cfg.num_antennas = 5;
                cfg.radius_wavelengths = uca_radius_for_spacing(5, 0.5);
                cfg.clusters = {{0.0, 30.0}, {180.0, 30.0}};
                cfg.fixed_rank = 3;
            }
        }
        else if (name == "fig3")
        {
            cfg.power_coefficients = {0.75, 0.25};
            cfg.target_rates = {0.5, 0.5};
            cfg.sweep.protocols = {Protocol::perfect_ordering, Protocol::one_bit};
            cfg.sweep.feedback_thresholds = {0.1};
        }
        else
        {
            throw ConfigError("unknown preset '" + std::string(name) + "'");
        }
        validate_config(cfg);
        return cfg;
    }
}

#endif
