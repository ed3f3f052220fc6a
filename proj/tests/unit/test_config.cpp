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

#include <algorithm>
#include <chrono>
#include <sstream>
#include <string>

#include "mmnoma/config.hpp"
#include "mmnoma/report.hpp"

using namespace mmnoma;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinRel;

namespace
{
    const char *kDeskText = R"({
        "array": {"antennas": 5, "spacing_wavelengths": 0.5},
        "clusters": [{"azimuth_deg": 0, "spread_deg": 30}, {"azimuth_deg": 180, "spread_deg": 30}],
        "rank": 3,
        "receive_antennas": 2,
        "groups_per_cluster": 2,
        "power_coefficients": [0.625, 0.25, 0.125],
        "target_rates": [0.5, 0.5, 3],
        "snr_db": {"start": 0, "stop": 30, "step": 2.5},
        "protocols": ["perfect", "oma"],
        "trials": 500,
        "seed": 7 // comments are accepted
    })";

    std::vector<std::string> lines(const std::string &text)
    {
        std::vector<std::string> out;
        std::istringstream in(text);
        for (std::string line; std::getline(in, line);)
            out.push_back(line);
        return out;
    }
}

TEST_CASE("presets", "[config]")
{
    for (const auto &name : preset_names())
        CHECK_NOTHROW(preset(name));
    CHECK_THROWS_AS(preset("fig9"), ConfigError);

    const auto f2 = preset("fig2");
    CHECK(f2.num_antennas == 50);
    CHECK(f2.clusters.size() == 4);
    CHECK(f2.receive_antennas == 2);
    CHECK(f2.power_coefficients == std::vector<double>{0.625, 0.25, 0.125});
    CHECK(f2.target_rates == std::vector<double>{0.5, 0.5, 3.0});
    CHECK(f2.sweep.snr_db.size() == 13);
    CHECK(f2.sweep.snr_db.back() == 30.0);

    const auto f3 = preset("fig3");
    CHECK(f3.power_coefficients == std::vector<double>{0.75, 0.25});
    CHECK(f3.sweep.feedback_thresholds == std::vector<double>{0.1});

    const auto f1 = preset("fig1");
    CHECK(std::find(f1.sweep.protocols.begin(), f1.sweep.protocols.end(), Protocol::oma) != f1.sweep.protocols.end());
}

TEST_CASE("configuration parsing", "[config]")
{
    const RunConfig cfg = parse_config_text(kDeskText);
    CHECK(cfg.num_antennas == 5);
    CHECK_THAT(cfg.radius_wavelengths, WithinRel(uca_radius_for_spacing(5, 0.5), 1e-15));
    CHECK(cfg.fixed_rank == 3);
    CHECK(cfg.sweep.snr_db.size() == 13);
    CHECK(cfg.sweep.seed == 7);
    CHECK(cfg.sweep.trials == 500);
    CHECK(cfg.quadrature_points == 2048);
    CHECK(cfg.snr_linear.size() == 13);

    SECTION("missing trials")
    {
        auto doc = json::parse(kDeskText, nullptr, true, true);
        doc.erase("trials");
        CHECK_THROWS_WITH(config_from_json(doc), ContainsSubstring("'trials'"));
    }
    SECTION("unknown keys")
    {
        auto doc = json::parse(kDeskText, nullptr, true, true);
        doc["trails"] = 5;
        CHECK_THROWS_WITH(config_from_json(doc), ContainsSubstring("unknown key 'trails'"));
    }
    SECTION("array geometry needs exactly one size")
    {
        auto doc = json::parse(kDeskText, nullptr, true, true);
        doc["array"]["radius_wavelengths"] = 0.4;
        CHECK_THROWS_AS(config_from_json(doc), ConfigError);
    }
    SECTION("wrong types and malformed text")
    {
        auto doc = json::parse(kDeskText, nullptr, true, true);
        doc["receive_antennas"] = "two";
        CHECK_THROWS_AS(config_from_json(doc), ConfigError);
        CHECK_THROWS_AS(parse_config_text("{\"array\": "), ConfigError);
        CHECK_THROWS_AS(parse_config("/nonexistent/config.json"), ConfigError);
    }
    SECTION("SNR lists and ranges")
    {
        CHECK(detail::expand_snr(json::parse("[1, 2, 5]")) == std::vector<double>{1, 2, 5});
        CHECK(detail::expand_snr(json::parse(R"({"start": 0, "stop": 1, "step": 0.1})")).size() == 11);
        CHECK_THROWS_AS(detail::expand_snr(json::parse(R"({"start": 0, "stop": 1, "step": 0})")), ConfigError);
    }
    SECTION("round trip through a manifest")
    {
        const Scenario sc = build_scenario(cfg);
        const auto manifest = manifest_json(sc, analytical(sc), true);
        const RunConfig again = config_from_json(json::parse(manifest.dump(2)));
        CHECK(again == cfg);
        for (const auto &name : preset_names())
        {
            const RunConfig p = preset(name);
            CHECK(config_from_json(config_to_json(p)) == p);
        }
    }
}

TEST_CASE("reports", "[config]")
{
    const RunConfig cfg = parse_config_text(kDeskText);
    const Scenario sc = build_scenario(cfg);

    SECTION("CSV layout")
    {
        const auto text = csv_string(sc, estimate(sc));
        const auto rows = lines(text);
        REQUIRE(rows.front() == kCsvHeader);
        CHECK(rows.size() == 1 + 2 * 13 * 4 * 3);
        for (const auto &row : rows)
            CHECK(std::count(row.begin(), row.end(), ',') == 8);
        CHECK(rows[1].rfind("0,perfect,1,1,1,", 0) == 0);
        CHECK(text == csv_string(sc, estimate(sc)));
    }

    SECTION("analytical mode")
    {
        const auto start = std::chrono::steady_clock::now();
        const auto res = analytical(sc);
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        CHECK(seconds < 1.0);
        const auto rows = lines(csv_string(sc, res));
        for (std::size_t i = 1; i < rows.size(); ++i)
            CHECK(rows[i].find(",,,") != std::string::npos);
    }

    SECTION("manifest content")
    {
        const auto res = estimate(sc);
        const auto m = manifest_json(sc, res, false);
        CHECK(m.at("version") == kVersion);
        CHECK(m.at("seed") == 7);
        CHECK(m.at("derived").at("m_tilde") == 2);
        CHECK(m.at("derived").at("gain_shape") == 1);
        CHECK(m.at("derived").at("clusters").size() == 2);
        CHECK(m.at("derived").at("clusters")[0].at("rank") == 3);
        CHECK(m.at("run").at("trials") == 500);
        CHECK(m.at("run").at("protocol_labels") == json::array({"perfect", "oma"}));
    }
}
