// SPDX-License-Identifier: Apache-2.0
//
// wbf - narrowband and wideband distortionless beamformer synthesis
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


// wbf: synthesize MVDR / MVMFDR weights, beam patterns and Monte Carlo comparisons.
//
//   wbf <solve|pattern|sweep|montecarlo|compare> --config scenario.json [--out path]
//       [--seed N] [--covariance ideal|sample] [--format csv|structured]

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "wbf/cli.hpp"

int main(int argc, char **argv)
{
    using namespace wbf::cli;

    CLI::App app{"Narrowband and wideband distortionless beamformer synthesis"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    std::string covariance;
    std::string format;

    for (const char *name : {"solve", "pattern", "sweep", "montecarlo", "compare"})
    {
        auto *sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "Scenario config file (JSON)")->required();
        sub->add_option("--out", out_path, "Output file (overrides config)");
        sub->add_option("--seed", seed, "RNG seed (overrides config)");
        sub->add_option("--covariance", covariance, "ideal or sample");
        sub->add_option("--format", format, "csv or structured");
    }

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        std::cerr << "wbf: error=config field=arguments reason=\"" << e.what() << "\"\n";
        return exit_config;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try
    {
        RunConfig cfg = parse_config(config_path);
        cfg.command = parse_command(command);
        if (!out_path.empty())
            cfg.output_path = out_path;
        if (seed)
            cfg.scenario.rng_seed = *seed;
        if (!covariance.empty())
            cfg.covariance_source = parse_covariance(covariance);
        if (!format.empty())
            cfg.output_format = parse_format(format);
        validate(cfg);
        return run(cfg);
    }
    catch (const ConfigError &e)
    {
        return report_config_error(e);
    }
}
