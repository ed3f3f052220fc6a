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

// mmnoma: run outage sweeps from a JSON config or a built-in preset.
//
//   mmnoma --preset fig2 --trials 1000000 --workers 4 --out results/
//   mmnoma --config configs/fig2_desk.json --analytical-only --out results/
//
// Writes <out>/results.csv and <out>/manifest.json.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mmnoma/mmnoma.hpp"

namespace
{
    int run(const mmnoma::RunConfig &cfg, std::size_t workers, bool analytical_only, const std::filesystem::path &out_dir)
    {
        const mmnoma::Scenario sc = mmnoma::build_scenario(cfg);
        const mmnoma::EstimateResult res = analytical_only ? mmnoma::analytical(sc) : mmnoma::estimate(sc, workers);

        std::error_code ec;
        std::filesystem::create_directories(out_dir, ec);
        if (ec)
        {
            std::cerr << "error: cannot create output directory '" << out_dir.string() << "': " << ec.message() << '\n';
            return 3;
        }

        const auto csv_path = out_dir / "results.csv";
        std::ofstream csv(csv_path, std::ios::binary);
        mmnoma::write_csv(csv, sc, res);
        const auto manifest_path = out_dir / "manifest.json";
        std::ofstream manifest(manifest_path, std::ios::binary);
        manifest << mmnoma::manifest_json(sc, res, analytical_only).dump(2) << '\n';
        if (!csv || !manifest)
        {
            std::cerr << "error: failed writing output files in '" << out_dir.string() << "'\n";
            return 3;
        }

        std::cerr << "Mtilde=" << sc.m_tilde << ", K=" << sc.num_clusters() << ", P=" << sc.users();
        if (!analytical_only)
            std::cerr << ", trials=" << res.trials << ", rejected draws=" << res.rejected_draws;
        std::cerr << "\nwrote " << csv_path.string() << " and " << manifest_path.string() << '\n';
        return 0;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Massive-MIMO-NOMA outage simulator"};

    std::string config_path, preset_name, out_dir = "mmnoma_out";
    std::optional<std::uint64_t> trials, seed;
    std::size_t workers = 1;
    bool analytical_only = false;

    auto *config_opt = app.add_option("--config", config_path, "JSON run configuration (or a previous run manifest)");
    app.add_option("--preset", preset_name, "Built-in configuration")
        ->check(CLI::IsMember(mmnoma::preset_names()))
        ->excludes(config_opt);
    app.add_option("--trials", trials, "Override the trial count");
    app.add_option("--seed", seed, "Override the master seed");
    app.add_option("--workers", workers, "Worker threads (results do not depend on this)")->check(CLI::PositiveNumber);
    app.add_flag("--analytical-only", analytical_only, "Closed-form values only; no Monte Carlo");
    app.add_option("--out", out_dir, "Output directory");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (config_path.empty() && preset_name.empty())
            throw mmnoma::ConfigError("one of --config or --preset is required");
        mmnoma::RunConfig cfg = preset_name.empty() ? mmnoma::parse_config(config_path) : mmnoma::preset(preset_name);
        if (trials)
            cfg.sweep.trials = *trials;
        if (seed)
            cfg.sweep.seed = *seed;
        mmnoma::validate_config(cfg);
        return run(cfg, workers, analytical_only, out_dir);
    }
    catch (const mmnoma::ConfigError &e)
    {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
