// Copyright 2026 The hsio Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hsio/cli.hpp"

int main(int argc, char** argv) {
  using namespace hsio;
  CLI::App app{"Hierarchical-storage I/O analysis for distributed DNN training"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Run the analytic storage simulator over a cache-rate sweep");
  std::string sim_config, sim_preset, sim_out;
  auto* cfg_opt = sim->add_option("-c,--config", sim_config, "Run configuration (JSON)");
  sim->add_option("-p,--preset", sim_preset, "Built-in configuration instead of --config")
      ->excludes(cfg_opt);
  sim->add_option("-o,--out-dir", sim_out, "Directory for trace_r<rate>_e<epoch>.jsonl files")->required();

  // ingest
  auto* ing = app.add_subcommand("ingest", "Convert darshan-parser text output to native traces");
  cli::IngestOptions ingest;
  std::string ingest_config;
  ing->add_option("-i,--input", ingest.input, "darshan-parser text ('-' for stdin)");
  ing->add_option("--gfs-prefix", ingest.mounts.gfs_prefixes, "Mount prefix of the global filesystem");
  ing->add_option("--lfs-prefix", ingest.mounts.lfs_prefixes, "Mount prefix of the local filesystem");
  ing->add_option("-c,--config", ingest_config, "Take mount prefixes from a run configuration");
  ing->add_option("-e,--epoch", ingest.epoch, "Epoch the profile belongs to")->required();
  ing->add_flag("--strict", ingest.strict, "Fail on shared or unmatched records instead of skipping");
  ing->add_option("-o,--out", ingest.output, "Native trace output ('-' for stdout)");

  // analyze
  auto* ana = app.add_subcommand("analyze", "Break down traces per I/O class and find the slowest rank");
  cli::AnalyzeOptions analyze;
  ana->add_option("traces", analyze.inputs, "Trace files or directories")->required();
  ana->add_option("-s,--summary", analyze.summary, "Summary CSV ('-' for stdout)");
  ana->add_option("-b,--breakdowns", analyze.breakdowns, "Per-rank breakdown lines output");

  // estimate
  auto* est = app.add_subcommand("estimate", "Estimate the slowest-process time under class improvements");
  cli::EstimateOptions estimate;
  est->add_option("-b,--breakdowns", estimate.breakdowns, "Per-rank breakdown lines")->required();
  est->add_option("-e,--epoch", estimate.epoch, "Epoch to estimate from")->capture_default_str();
  est->add_option("-i,--improve", estimate.improvements, "CLASS=PERCENT, e.g. GFS-META=50");
  est->add_option("-o,--out", estimate.output, "Report CSV ('-' for stdout)");

  // explore
  auto* exp = app.add_subcommand("explore", "Find two-class improvement pairs meeting an I/O time goal");
  cli::ExploreOptions explore;
  exp->add_option("-b,--breakdowns", explore.breakdowns, "Per-rank breakdown lines")->required();
  exp->add_option("-e,--epoch", explore.epoch, "Epoch to estimate from")->capture_default_str();
  exp->add_option("--class-a", explore.class_a, "First improved class")->capture_default_str();
  exp->add_option("--class-b", explore.class_b, "Second improved class")->capture_default_str();
  exp->add_option("--max", explore.max_percent, "Largest improvement percentage")->capture_default_str();
  exp->add_option("--step", explore.step, "Grid step in percent")->capture_default_str();
  exp->add_option("-g,--goal", explore.goal_s, "I/O time goal per epoch in seconds ('inf' allowed)")
      ->required();
  exp->add_option("-o,--out", explore.output, "Grid CSV ('-' for stdout)");

  // preset
  auto* pre = app.add_subcommand("preset", "Print a built-in run configuration");
  std::string preset_name, preset_out;
  pre->add_option("name", preset_name, "One of: small-fast, small-slow, large-fast")->required();
  pre->add_option("-o,--out", preset_out, "Output file ('-' for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return cli::kExitUsage;
  }

  if (sim->parsed()) {
    if (!sim_preset.empty()) {
      RunConfig config;
      try {
        config = preset(sim_preset);
      } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::kExitUsage;
      }
      return cli::simulate(config, sim_out, std::cerr);
    }
    if (sim_config.empty()) {
      std::cerr << "usage error: one of --config or --preset is required\n";
      return cli::kExitUsage;
    }
    return cli::cmd_simulate(sim_config, sim_out, std::cerr);
  }
  if (ing->parsed()) {
    if (!ingest_config.empty()) {
      try {
        const RunConfig config = load_run_config(ingest_config);
        if (!config.mounts) throw ConfigError("mounts", "missing required key");
        ingest.mounts.gfs_prefixes.insert(ingest.mounts.gfs_prefixes.end(),
                                          config.mounts->gfs_prefixes.begin(),
                                          config.mounts->gfs_prefixes.end());
        ingest.mounts.lfs_prefixes.insert(ingest.mounts.lfs_prefixes.end(),
                                          config.mounts->lfs_prefixes.begin(),
                                          config.mounts->lfs_prefixes.end());
      } catch (const InvalidArgument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return cli::kExitUsage;
      }
    }
    return cli::cmd_ingest(ingest, std::cin, std::cout, std::cerr);
  }
  if (ana->parsed()) return cli::cmd_analyze(analyze, std::cout, std::cerr);
  if (est->parsed()) return cli::cmd_estimate(estimate, std::cout, std::cerr);
  if (exp->parsed()) return cli::cmd_explore(explore, std::cout, std::cerr);
  if (pre->parsed()) return cli::cmd_preset(preset_name, preset_out, std::cout, std::cerr);
  return cli::kExitUsage;
}
