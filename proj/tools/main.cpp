// Copyright 2026 The TextAlign Authors. All Rights Reserved.
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
#include <string>

#include <CLI11.hpp>

#include "textalign/cli.hpp"
#include "textalign/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"textalign: text-centric multimodal alignment robustness harness"};
  app.set_version_flag("--version", std::string(textalign::kVersion));
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  bool offline = false;
  std::string cache_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int jobs = 0;
  app.add_option("--config", config_path, "harness config JSON (or a run manifest)");
  app.add_flag("--offline", offline, "force the mock provider for every profile");
  app.add_option("--cache-dir", cache_dir, "override the response cache directory");
  app.add_option("--seed", seed, "override the global base seed")
      ->each([&](const std::string&) { seed_set = true; });
  app.add_option("--jobs", jobs, "worker threads for sweeps");

  auto* validate = app.add_subcommand("validate", "static checks of a config");

  auto* run = app.add_subcommand("run", "execute training and sweeps");
  std::vector<std::string> sweeps;
  std::vector<std::string> pipelines;
  run->add_option("--sweep", sweeps, "run only the named sweeps");
  run->add_option("--pipeline", pipelines,
                  "run each selected sweep under these pipeline profiles");

  auto* report = app.add_subcommand("report", "render comparison tables");
  std::string run_dir;
  std::string format = "md";
  report->add_option("run_dir", run_dir, "run directory")->required();
  report->add_option("--format", format, "csv | md | json");

  auto* inspect = app.add_subcommand("inspect", "dump a record's transcripts");
  std::string inspect_dir;
  std::string record_id;
  std::string sweep_filter;
  int level_filter = -1;
  inspect->add_option("run_dir", inspect_dir, "run directory")->required();
  inspect->add_option("record_id", record_id, "record to dump")->required();
  inspect->add_option("--sweep", sweep_filter, "restrict to one sweep");
  inspect->add_option("--level", level_filter, "restrict to one level index");

  CLI11_PARSE(app, argc, argv);

  textalign::GlobalOptions global;
  global.config_path = config_path;
  global.offline = offline;
  if (!cache_dir.empty()) global.cache_dir = cache_dir;
  if (seed_set) global.seed = seed;
  if (jobs > 0) global.jobs = jobs;

  if (validate->parsed()) {
    if (config_path.empty()) {
      std::cerr << "--config is required\n";
      return 2;
    }
    return textalign::cmd_validate(global, std::cout, std::cerr);
  }
  if (run->parsed()) {
    if (config_path.empty()) {
      std::cerr << "--config is required\n";
      return 2;
    }
    textalign::RunOptions options;
    options.sweeps = sweeps;
    options.pipelines = pipelines;
    return textalign::cmd_run(global, options, std::cout, std::cerr);
  }
  if (report->parsed()) {
    textalign::ReportOptions options;
    options.run_dir = run_dir;
    options.format = format;
    return textalign::cmd_report(options, std::cout, std::cerr);
  }
  if (inspect->parsed()) {
    textalign::InspectOptions options;
    options.run_dir = inspect_dir;
    options.record_id = record_id;
    options.sweep = sweep_filter;
    options.level_index = level_filter;
    return textalign::cmd_inspect(options, std::cout, std::cerr);
  }
  return 0;
}
