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

#include "textalign/cli.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "textalign/error.hpp"
#include "textalign/eval.hpp"
#include "textalign/fsio.hpp"
#include "textalign/runner.hpp"

namespace textalign {

using nlohmann::json;

int cmd_validate(const GlobalOptions& options, std::ostream& out,
                 std::ostream& err) {
  try {
    HarnessConfig config = load_config(options.config_path);
    if (options.offline) config.offline = true;
    if (options.cache_dir) config.cache_dir = *options.cache_dir;
    if (options.seed) config.base_seed = *options.seed;
    if (options.jobs) config.jobs = *options.jobs;
    const auto diagnostics = validate_config(config);
    out << diagnostics_to_json_text(diagnostics);
    return diagnostics.empty() ? 0 : 2;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 2;
  }
}

int cmd_run(const GlobalOptions& options, const RunOptions& run,
            std::ostream& out, std::ostream& err) {
  try {
    const HarnessConfig config = load_config(options.config_path);
    RunOverrides overrides;
    overrides.offline = options.offline;
    overrides.cache_dir = options.cache_dir;
    overrides.seed = options.seed;
    overrides.jobs = options.jobs;
    overrides.sweeps = run.sweeps;
    overrides.pipelines = run.pipelines;
    const RunSummary summary = run_harness(config, overrides);
    out << "run " << summary.run_id << " complete\n";
    out << "run directory: " << summary.run_dir.string() << "\n";
    for (const auto& path : summary.report_files) {
      out << "report: " << path.string() << "\n";
    }
    return 0;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return e.code() == Errc::bad_config ? 2 : 1;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return 1;
  }
}

namespace {

std::vector<RobustnessReport> load_reports(
    const std::filesystem::path& run_dir) {
  std::vector<std::filesystem::path> paths;
  if (std::filesystem::is_directory(run_dir)) {
    for (const auto& entry : std::filesystem::directory_iterator(run_dir)) {
      const std::string name = entry.path().filename().string();
      if (name.rfind("report__", 0) == 0 &&
          entry.path().extension() == ".json") {
        paths.push_back(entry.path());
      }
    }
  }
  std::sort(paths.begin(), paths.end());
  std::vector<RobustnessReport> reports;
  for (const auto& path : paths) {
    reports.push_back(report_from_json_text(read_text_file(path)));
  }
  if (reports.empty()) {
    throw Error(Errc::no_reports_found, run_dir.string());
  }
  return reports;
}

// Reports are comparable only within one sweep definition.
std::vector<std::vector<RobustnessReport>> aligned_groups(
    std::vector<RobustnessReport> reports) {
  std::map<std::string, std::vector<RobustnessReport>> groups;
  for (auto& report : reports) {
    std::string key = report.target + "|" +
                      std::to_string(report.base_seed) + "|" +
                      std::to_string(report.repetitions);
    for (const auto& row : report.rows) {
      key += "|" + std::to_string(row.image_level) + "," +
             std::to_string(row.text_level) + "," +
             std::to_string(row.table_level) + "," + std::to_string(row.n);
    }
    groups[key].push_back(std::move(report));
  }
  std::vector<std::vector<RobustnessReport>> out;
  out.reserve(groups.size());
  for (auto& [key, group] : groups) {
    (void)key;
    out.push_back(std::move(group));
  }
  return out;
}

}  // namespace

int cmd_report(const ReportOptions& options, std::ostream& out,
               std::ostream& err) {
  try {
    std::vector<RobustnessReport> reports = load_reports(options.run_dir);
    if (options.format == "csv") {
      out << "sweep,target,level_index,image_level,text_level,table_level,n,"
             "accuracy,drop_ratio\n";
      for (const auto& report : reports) {
        const std::string csv = report_to_csv_text(report);
        out << csv.substr(csv.find('\n') + 1);
      }
      return 0;
    }
    const auto groups = aligned_groups(std::move(reports));
    if (options.format == "json") {
      json output = json::array();
      for (const auto& group : groups) {
        output.push_back(
            json::parse(comparison_to_json_text(compare_configs(group))));
      }
      out << output.dump(2) << "\n";
      return 0;
    }
    if (options.format == "md") {
      for (const auto& group : groups) {
        out << comparison_to_markdown(compare_configs(group)) << "\n";
      }
      return 0;
    }
    err << "unknown format: " << options.format << "\n";
    return 2;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 1;
  }
}

int cmd_inspect(const InspectOptions& options, std::ostream& out,
                std::ostream& err) {
  try {
    const auto transcripts_path = options.run_dir / "transcripts.jsonl";
    if (!std::filesystem::exists(transcripts_path)) {
      throw Error(Errc::io_error,
                  "transcripts are not enabled for this run: " +
                      transcripts_path.string());
    }
    std::istringstream lines(read_text_file(transcripts_path));
    std::string line;
    bool found = false;
    while (std::getline(lines, line)) {
      if (line.empty()) continue;
      const json t = json::parse(line);
      if (t.at("record_id").get<std::string>() != options.record_id) continue;
      if (!options.sweep.empty() &&
          t.at("sweep").get<std::string>() != options.sweep) {
        continue;
      }
      if (options.level_index >= 0 &&
          t.at("level_index").get<int>() != options.level_index) {
        continue;
      }
      found = true;
      out << "=== record " << options.record_id << " | sweep "
          << t.at("sweep").get<std::string>() << " | pipeline "
          << t.at("pipeline").get<std::string>() << " | level "
          << t.at("level_index").get<int>() << " (image "
          << t.at("levels").at("image").get<double>() << ", text "
          << t.at("levels").at("text").get<double>() << ", table "
          << t.at("levels").at("table").get<double>() << ") | rep "
          << t.at("repetition").get<int>() << " ===\n";
      out << "predicted " << t.at("predicted").get<int>() << ", label "
          << t.at("label").get<int>() << "\n";
      for (const char* stage : {"transform", "summary", "reasoning"}) {
        if (t.at("stages").contains(stage)) {
          out << "--- " << stage << " ---\n"
              << t.at("stages").at(stage).get<std::string>() << "\n";
        }
      }
      out << "--- exchanges ---\n";
      for (const auto& exchange : t.at("exchanges")) {
        out << "[" << exchange.at("stage").get<std::string>() << "] digest "
            << exchange.at("digest").get<std::string>() << "\n"
            << exchange.at("response").get<std::string>() << "\n";
      }
      out << "\n";
    }
    if (!found) {
      throw Error(Errc::record_not_found, options.record_id);
    }
    return 0;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 1;
  }
}

}  // namespace textalign
