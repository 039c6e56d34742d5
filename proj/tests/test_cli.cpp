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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "test_util.hpp"
#include "textalign/cli.hpp"
#include "textalign/config.hpp"
#include "textalign/error.hpp"
#include "textalign/runner.hpp"

using namespace textalign;
using textalign::testing::TempDir;
using textalign::testing::data_dir;
using textalign::testing::golden_dir;

namespace {

std::filesystem::path shipped_config(const char* name) {
  return data_dir() / "configs" / name;
}

// Copy of a shipped config with output/cache redirected into the temp dir.
std::filesystem::path localized_config(const TempDir& tmp, const char* name) {
  HarnessConfig config = load_config(shipped_config(name));
  config.output_dir = tmp.path() / "out";
  config.cache_dir = tmp.path() / "cache";
  const auto path = tmp.path() / name;
  write_text_file(path, config_to_json_text(config));
  return path;
}

std::map<std::filesystem::path, std::string> snapshot_reports(
    const std::filesystem::path& run_dir) {
  std::map<std::filesystem::path, std::string> files;
  for (const auto& entry : std::filesystem::directory_iterator(run_dir)) {
    const auto name = entry.path().filename().string();
    if (name.rfind("report__", 0) == 0) {
      files[entry.path().filename()] = read_text_file(entry.path());
    }
  }
  return files;
}

}  // namespace

TEST_CASE("shipped configs validate with zero diagnostics") {
  for (const char* name : {"offline.json", "petfinder_fixture.json"}) {
    GlobalOptions options;
    options.config_path = shipped_config(name);
    std::ostringstream out;
    std::ostringstream err;
    CHECK(cmd_validate(options, out, err) == 0);
    CHECK(nlohmann::json::parse(out.str()).empty());
  }
}

TEST_CASE("validate reports machine-readable diagnostics") {
  TempDir tmp("cli_validate");
  HarnessConfig config = load_config(shipped_config("offline.json"));
  config.sweeps[0].grids[Modality::text] = {0.1, 0.5};  // missing level 0
  config.sweeps[1].pipeline = "no-such-pipeline";
  const auto path = tmp.path() / "broken.json";
  write_text_file(path, config_to_json_text(config));

  GlobalOptions options;
  options.config_path = path;
  std::ostringstream out;
  std::ostringstream err;
  CHECK(cmd_validate(options, out, err) == 2);
  const auto diagnostics = nlohmann::json::parse(out.str());
  bool saw_grid = false;
  bool saw_pipeline = false;
  for (const auto& d : diagnostics) {
    if (d.at("code") == "GridMissingZero") saw_grid = true;
    if (d.at("code") == "UnknownPipeline") saw_pipeline = true;
  }
  CHECK(saw_grid);
  CHECK(saw_pipeline);
}

TEST_CASE("unparseable configs exit with code 2") {
  TempDir tmp("cli_badjson");
  const auto path = tmp.path() / "bad.json";
  write_text_file(path, "{ not json");
  GlobalOptions options;
  options.config_path = path;
  std::ostringstream out;
  std::ostringstream err;
  CHECK(cmd_validate(options, out, err) == 2);
  CHECK(err.str().find("BadConfig") != std::string::npos);
}

TEST_CASE("offline runs are complete, deterministic, and network-free") {
  TempDir tmp("cli_run");
  const auto config_path = localized_config(tmp, "offline.json");

  GlobalOptions options;
  options.config_path = config_path;
  options.offline = true;
  RunOptions run_options;
  std::ostringstream out;
  std::ostringstream err;
  REQUIRE(cmd_run(options, run_options, out, err) == 0);
  INFO(err.str());

  // Locate the run directory from the command output.
  const std::string needle = "run directory: ";
  const auto pos = out.str().find(needle);
  REQUIRE(pos != std::string::npos);
  std::filesystem::path run_dir =
      out.str().substr(pos + needle.size(),
                       out.str().find('\n', pos) - pos - needle.size());

  const auto first = snapshot_reports(run_dir);
  CHECK(first.size() == 12);  // 6 sweeps x {json, csv}

  // The config names a live-looking provider; offline must not touch it.
  const auto stats =
      nlohmann::json::parse(read_text_file(run_dir / "stats.json"));
  CHECK(stats.at("live_http_calls").get<int>() == 0);

  // Re-run: byte-identical reports.
  std::ostringstream out2;
  REQUIRE(cmd_run(options, run_options, out2, err) == 0);
  CHECK(snapshot_reports(run_dir) == first);

  // Re-run from the manifest alone: byte-identical reports again.
  GlobalOptions manifest_options;
  manifest_options.config_path = run_dir / "manifest.json";
  std::ostringstream out3;
  REQUIRE(cmd_run(manifest_options, run_options, out3, err) == 0);
  CHECK(snapshot_reports(run_dir) == first);

  SUBCASE("report renders csv, md, and json") {
    ReportOptions report;
    report.run_dir = run_dir;
    report.format = "csv";
    std::ostringstream csv_out;
    CHECK(cmd_report(report, csv_out, err) == 0);
    CHECK(csv_out.str().rfind("sweep,target,level_index,image_level,"
                              "text_level,table_level,n,accuracy,drop_ratio\n",
                              0) == 0);

    report.format = "md";
    std::ostringstream md_out;
    CHECK(cmd_report(report, md_out, err) == 0);
    CHECK(md_out.str().find("lowest final-level drop ratio:") !=
          std::string::npos);
    CHECK(md_out.str().find("all-full__full") != std::string::npos);

    report.format = "json";
    std::ostringstream json_out;
    CHECK(cmd_report(report, json_out, err) == 0);
    CHECK(!nlohmann::json::parse(json_out.str()).empty());
  }

  SUBCASE("inspect dumps the enabled stages for a record") {
    // Any test-split record will do; take the first transcribed one.
    std::istringstream lines(read_text_file(run_dir / "transcripts.jsonl"));
    std::string line;
    REQUIRE(std::getline(lines, line));
    const std::string record_id =
        nlohmann::json::parse(line).at("record_id").get<std::string>();

    InspectOptions inspect;
    inspect.run_dir = run_dir;
    inspect.record_id = record_id;
    inspect.sweep = "all-full";
    inspect.level_index = 3;
    std::ostringstream dump;
    CHECK(cmd_inspect(inspect, dump, err) == 0);
    CHECK(dump.str().find("--- transform ---") != std::string::npos);
    CHECK(dump.str().find("--- summary ---") != std::string::npos);
    CHECK(dump.str().find("--- reasoning ---") != std::string::npos);

    InspectOptions transform_only = inspect;
    transform_only.sweep = "all-transform";
    std::ostringstream dump2;
    CHECK(cmd_inspect(transform_only, dump2, err) == 0);
    CHECK(dump2.str().find("--- transform ---") != std::string::npos);
    CHECK(dump2.str().find("--- summary ---") == std::string::npos);

    InspectOptions missing = inspect;
    missing.record_id = "no-such-record";
    std::ostringstream dump3;
    std::ostringstream err3;
    CHECK(cmd_inspect(missing, dump3, err3) == 1);
    CHECK(err3.str().find("RecordNotFound") != std::string::npos);
  }

  SUBCASE("a tampered manifest surfaces as a run-id collision") {
    auto manifest =
        nlohmann::json::parse(read_text_file(run_dir / "manifest.json"));
    manifest["config_canonical"] = "something else";
    write_text_file(run_dir / "manifest.json", manifest.dump(2) + "\n");
    std::ostringstream out4;
    std::ostringstream err4;
    CHECK(cmd_run(options, run_options, out4, err4) == 1);
    CHECK(err4.str().find("RunIdCollision") != std::string::npos);
  }
}

TEST_CASE("sweep and pipeline selection filters the run") {
  TempDir tmp("cli_select");
  const auto config_path = localized_config(tmp, "offline.json");
  GlobalOptions options;
  options.config_path = config_path;
  options.offline = true;
  RunOptions run_options;
  run_options.sweeps = {"text"};
  run_options.pipelines = {"transform-only", "full"};
  std::ostringstream out;
  std::ostringstream err;
  REQUIRE(cmd_run(options, run_options, out, err) == 0);

  const std::string needle = "run directory: ";
  const auto pos = out.str().find(needle);
  std::filesystem::path run_dir =
      out.str().substr(pos + needle.size(),
                       out.str().find('\n', pos) - pos - needle.size());
  const auto reports = snapshot_reports(run_dir);
  CHECK(reports.size() == 4);  // one sweep x two profiles x {json, csv}
  CHECK(reports.count("report__text__transform-only.json") == 1);
  CHECK(reports.count("report__text__full.json") == 1);

  // Cross-profile comparison artifact exists for the shared sweep.
  CHECK(std::filesystem::exists(run_dir / "comparison__text.md"));
}

TEST_CASE("report on an empty directory reports NoReportsFound") {
  TempDir tmp("cli_noreports");
  ReportOptions report;
  report.run_dir = tmp.path();
  std::ostringstream out;
  std::ostringstream err;
  CHECK(cmd_report(report, out, err) == 1);
  CHECK(err.str().find("NoReportsFound") != std::string::npos);
}

TEST_CASE("fixture run inspect dump matches the recorded golden") {
  TempDir tmp("cli_inspect_golden");
  const auto config_path = localized_config(tmp, "petfinder_fixture.json");
  GlobalOptions options;
  options.config_path = config_path;
  options.offline = true;
  RunOptions run_options;
  std::ostringstream out;
  std::ostringstream err;
  REQUIRE(cmd_run(options, run_options, out, err) == 0);

  const std::string needle = "run directory: ";
  const auto pos = out.str().find(needle);
  std::filesystem::path run_dir =
      out.str().substr(pos + needle.size(),
                       out.str().find('\n', pos) - pos - needle.size());

  InspectOptions inspect;
  inspect.run_dir = run_dir;
  inspect.record_id = "pet-girls";
  inspect.level_index = 2;
  std::ostringstream dump;
  REQUIRE(cmd_inspect(inspect, dump, err) == 0);
  CHECK(dump.str() ==
        read_text_file(golden_dir() / "inspect_pet-girls.txt"));
}

TEST_CASE("train-time perturbation changes training inputs only") {
  TempDir tmp("cli_robust_train");
  HarnessConfig config = load_config(shipped_config("petfinder_fixture.json"));
  config.output_dir = tmp.path() / "out";
  config.cache_dir = tmp.path() / "cache";

  RunOverrides overrides;
  overrides.offline = true;
  const RunSummary clean = run_harness(config, overrides);

  config.train.train_time_perturbation = {{Modality::text, 0.5, 0}};
  const RunSummary robust = run_harness(config, overrides);
  REQUIRE(clean.run_id != robust.run_id);  // the config identity changed

  // Different training inputs, different weights.
  CHECK(read_text_file(clean.run_dir / "model__full.json") !=
        read_text_file(robust.run_dir / "model__full.json"));

  // Evaluation inputs are untouched: every level-0 transform in the robust
  // run is byte-identical to its counterpart in the clean run.
  auto level0_transforms = [](const std::filesystem::path& run_dir) {
    std::map<std::string, std::string> transforms;
    std::istringstream lines(read_text_file(run_dir / "transcripts.jsonl"));
    std::string line;
    while (std::getline(lines, line)) {
      if (line.empty()) continue;
      const auto t = nlohmann::json::parse(line);
      if (t.at("level_index").get<int>() != 0) continue;
      transforms[t.at("record_id").get<std::string>()] =
          t.at("stages").at("transform").get<std::string>();
    }
    return transforms;
  };
  const auto clean_inputs = level0_transforms(clean.run_dir);
  const auto robust_inputs = level0_transforms(robust.run_dir);
  REQUIRE(!clean_inputs.empty());
  CHECK(clean_inputs == robust_inputs);
}
