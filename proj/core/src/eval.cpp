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

#include "textalign/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "textalign/error.hpp"
#include "textalign/fsio.hpp"

namespace textalign {

using nlohmann::json;

std::string_view sweep_target_name(SweepTarget target) {
  switch (target) {
    case SweepTarget::image: return "image";
    case SweepTarget::text: return "text";
    case SweepTarget::table: return "table";
    case SweepTarget::all: return "all";
  }
  return "all";
}

SweepTarget parse_sweep_target(std::string_view name) {
  if (name == "image") return SweepTarget::image;
  if (name == "text") return SweepTarget::text;
  if (name == "table") return SweepTarget::table;
  if (name == "all") return SweepTarget::all;
  throw Error(Errc::bad_config, "unknown sweep target: " + std::string(name));
}

double drop_ratio(double acc_clean, double acc_pert) {
  if (acc_clean <= 0.0) {
    throw Error(Errc::zero_clean_accuracy,
                "clean accuracy must be positive, got " +
                    std::to_string(acc_clean));
  }
  return (acc_clean - acc_pert) / acc_clean;
}

namespace {

std::vector<Modality> targeted_modalities(SweepTarget target) {
  switch (target) {
    case SweepTarget::image: return {Modality::image};
    case SweepTarget::text: return {Modality::text};
    case SweepTarget::table: return {Modality::table};
    case SweepTarget::all:
      return {Modality::image, Modality::text, Modality::table};
  }
  return {};
}

// Runs fn(i) for i in [0, n) on up to `jobs` threads; the first exception
// wins and is rethrown after all workers join.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      {
        std::lock_guard lock(error_mutex);
        if (first_error) return;
      }
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> threads;
  const int count = std::min<std::size_t>(static_cast<std::size_t>(jobs), n);
  threads.reserve(static_cast<std::size_t>(count));
  for (int t = 0; t < count; ++t) threads.emplace_back(worker);
  for (auto& thread : threads) thread.join();
  if (first_error) std::rethrow_exception(first_error);
}

// Mean that reports the exact common value when every repetition agrees,
// keeping level-0 accuracy equal to the clean accuracy bit-for-bit.
double mean_of(const std::vector<double>& values) {
  bool all_equal = true;
  for (double v : values) {
    if (v != values.front()) {
      all_equal = false;
      break;
    }
  }
  if (all_equal) return values.front();
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

}  // namespace

void check_sweep(const SweepConfig& sweep) {
  const auto modalities = targeted_modalities(sweep.target);
  std::size_t length = 0;
  for (const Modality modality : modalities) {
    const auto it = sweep.grids.find(modality);
    if (it == sweep.grids.end()) {
      throw Error(Errc::bad_config,
                  "sweep " + sweep.name + " is missing the " +
                      std::string(modality_name(modality)) + " grid");
    }
    make_level_grid(modality, it->second.levels);  // revalidate invariants
    if (length == 0) {
      length = it->second.levels.size();
    } else if (it->second.levels.size() != length) {
      throw Error(Errc::bad_config,
                  "sweep " + sweep.name +
                      ": all-modality grids must share one length");
    }
  }
  if (sweep.repetitions < 1) {
    throw Error(Errc::bad_config, "repetitions must be positive");
  }
}

RobustnessReport run_sweep(const std::vector<MultimodalRecord>& test_records,
                           const TrainArtifacts& artifacts,
                           const SweepConfig& sweep,
                           const TabularSchema& schema,
                           const Captioner& captioner, LlmClient& client,
                           const SweepOptions& options) {
  check_sweep(sweep);
  if (test_records.empty()) {
    throw Error(Errc::empty_dataset, "no test records");
  }

  const auto modalities = targeted_modalities(sweep.target);
  const std::size_t level_count =
      sweep.grids.at(modalities.front()).levels.size();

  RobustnessReport report;
  report.sweep = sweep.name;
  report.pipeline = artifacts.pipeline.name;
  report.provider = artifacts.pipeline.provider_id;
  report.target = std::string(sweep_target_name(sweep.target));
  report.base_seed = sweep.base_seed;
  report.repetitions = sweep.repetitions;
  report.config_hash = options.config_hash;

  // The image channel is a surrogate whenever nonzero image levels are swept
  // without a vision provider to re-caption the noisy pixels.
  bool surrogate = options.surrogate_image;
  if (const auto it = sweep.grids.find(Modality::image);
      it != sweep.grids.end() &&
      std::count(modalities.begin(), modalities.end(), Modality::image) > 0 &&
      it->second.levels.back() > 0.0 &&
      captioner.kind != Captioner::Kind::provider) {
    surrogate = true;
  }
  report.surrogate_image = surrogate;

  // Only targeted modalities carry levels; the rest stay clean at 0.
  auto level_of = [&](Modality modality, std::size_t index) {
    if (std::find(modalities.begin(), modalities.end(), modality) ==
        modalities.end()) {
      return 0.0;
    }
    const auto it = sweep.grids.find(modality);
    return it == sweep.grids.end() ? 0.0 : it->second.levels[index];
  };

  std::vector<int> labels(test_records.size());
  for (std::size_t i = 0; i < test_records.size(); ++i) {
    labels[i] = test_records[i].label;
  }

  auto run_level = [&](std::size_t index) {
    ReportRow row;
    row.index = static_cast<int>(index);
    row.image_level = level_of(Modality::image, index);
    row.text_level = level_of(Modality::text, index);
    row.table_level = level_of(Modality::table, index);
    row.n = static_cast<int>(test_records.size());

    std::vector<double> rep_accuracies;
    rep_accuracies.reserve(static_cast<std::size_t>(sweep.repetitions));
    for (int rep = 0; rep < sweep.repetitions; ++rep) {
      const std::uint64_t rep_seed =
          sweep.base_seed + static_cast<std::uint64_t>(rep);
      std::vector<PerturbationSpec> specs;
      for (const Modality modality : modalities) {
        specs.push_back({modality, level_of(modality, index), rep_seed});
      }
      std::vector<int> predictions(test_records.size());
      std::vector<SweepTranscript> transcripts(
          options.transcript_sink ? test_records.size() : 0);
      parallel_for(test_records.size(), options.jobs, [&](std::size_t i) {
        const MultimodalRecord perturbed = apply_spec(test_records[i], specs);
        AlignedText aligned = run_pipeline(perturbed, schema, captioner,
                                           artifacts.pipeline, client);
        const SparseVector features =
            featurize(aligned.final_text, artifacts.featurizer);
        predictions[i] = predict(artifacts.model, features).label;
        if (options.transcript_sink) {
          SweepTranscript t;
          t.sweep = sweep.name;
          t.pipeline = artifacts.pipeline.name;
          t.level_index = row.index;
          t.repetition = rep;
          t.image_level = row.image_level;
          t.text_level = row.text_level;
          t.table_level = row.table_level;
          t.aligned = std::move(aligned);
          t.predicted = predictions[i];
          t.label = test_records[i].label;
          transcripts[i] = std::move(t);
        }
      });
      if (options.transcript_sink) {
        for (auto& t : transcripts) options.transcript_sink(t);
      }
      rep_accuracies.push_back(accuracy(predictions, labels));
    }
    row.accuracy = mean_of(rep_accuracies);
    return row;
  };

  for (std::size_t index = 0; index < level_count; ++index) {
    ReportRow row;
    try {
      row = run_level(index);
    } catch (const Error&) {
      if (!options.checkpoint_path.empty()) {
        json rows = json::array();
        for (const auto& done : report.rows) {
          rows.push_back({{"index", done.index}, {"accuracy", done.accuracy}});
        }
        const json checkpoint = {{"sweep", sweep.name},
                                 {"pipeline", artifacts.pipeline.name},
                                 {"completed_rows", rows},
                                 {"failed_level_index", index}};
        write_text_file(options.checkpoint_path, checkpoint.dump(2) + "\n");
      }
      throw;
    }
    if (index == 0) {
      report.clean_accuracy = row.accuracy;
    }
    row.drop_ratio = drop_ratio(report.clean_accuracy, row.accuracy);
    report.rows.push_back(row);
  }
  return report;
}

std::string report_to_json_text(const RobustnessReport& report) {
  json rows = json::array();
  for (const auto& row : report.rows) {
    rows.push_back({{"index", row.index},
                    {"levels",
                     {{"image", row.image_level},
                      {"text", row.text_level},
                      {"table", row.table_level}}},
                    {"n", row.n},
                    {"accuracy", row.accuracy},
                    {"drop_ratio", row.drop_ratio}});
  }
  const json j = {{"sweep", report.sweep},
                  {"pipeline", report.pipeline},
                  {"provider", report.provider},
                  {"target", report.target},
                  {"base_seed", report.base_seed},
                  {"repetitions", report.repetitions},
                  {"config_hash", report.config_hash},
                  {"surrogate_image", report.surrogate_image},
                  {"clean_accuracy", report.clean_accuracy},
                  {"rows", rows}};
  return j.dump(2) + "\n";
}

RobustnessReport report_from_json_text(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(Errc::io_error, std::string("report JSON: ") + e.what());
  }
  RobustnessReport report;
  try {
    report.sweep = j.at("sweep").get<std::string>();
    report.pipeline = j.value("pipeline", "");
    report.provider = j.value("provider", "");
    report.target = j.at("target").get<std::string>();
    report.base_seed = j.value("base_seed", std::uint64_t{0});
    report.repetitions = j.value("repetitions", 1);
    report.config_hash = j.value("config_hash", "");
    report.surrogate_image = j.value("surrogate_image", false);
    report.clean_accuracy = j.at("clean_accuracy").get<double>();
    for (const auto& r : j.at("rows")) {
      ReportRow row;
      row.index = r.at("index").get<int>();
      row.image_level = r.at("levels").at("image").get<double>();
      row.text_level = r.at("levels").at("text").get<double>();
      row.table_level = r.at("levels").at("table").get<double>();
      row.n = r.at("n").get<int>();
      row.accuracy = r.at("accuracy").get<double>();
      row.drop_ratio = r.at("drop_ratio").get<double>();
      report.rows.push_back(row);
    }
  } catch (const json::exception& e) {
    throw Error(Errc::io_error, std::string("report field error: ") + e.what());
  }
  return report;
}

namespace {

std::string format_double(double value) {
  // Shortest round-trip form, matching the JSON serializer.
  return json(value).dump();
}

}  // namespace

std::string report_to_csv_text(const RobustnessReport& report) {
  std::string out =
      "sweep,target,level_index,image_level,text_level,table_level,n,"
      "accuracy,drop_ratio\n";
  const std::string name = report.sweep + "__" + report.pipeline;
  for (const auto& row : report.rows) {
    out += name + "," + report.target + "," + std::to_string(row.index) + "," +
           format_double(row.image_level) + "," +
           format_double(row.text_level) + "," +
           format_double(row.table_level) + "," + std::to_string(row.n) + "," +
           format_double(row.accuracy) + "," + format_double(row.drop_ratio) +
           "\n";
  }
  return out;
}

ComparisonTable compare_configs(const std::vector<RobustnessReport>& reports) {
  if (reports.empty()) {
    throw Error(Errc::mismatched_sweeps, "no reports to compare");
  }
  const RobustnessReport& first = reports.front();
  for (const auto& report : reports) {
    const bool aligned =
        report.target == first.target &&
        report.base_seed == first.base_seed &&
        report.repetitions == first.repetitions &&
        report.rows.size() == first.rows.size();
    if (!aligned) {
      throw Error(Errc::mismatched_sweeps,
                  report.sweep + "__" + report.pipeline +
                      " does not share the sweep definition of " +
                      first.sweep + "__" + first.pipeline);
    }
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
      if (report.rows[i].image_level != first.rows[i].image_level ||
          report.rows[i].text_level != first.rows[i].text_level ||
          report.rows[i].table_level != first.rows[i].table_level ||
          report.rows[i].n != first.rows[i].n) {
        throw Error(Errc::mismatched_sweeps,
                    "level grids or test sizes differ at index " +
                        std::to_string(i));
      }
    }
  }
  ComparisonTable table;
  table.levels = first.rows;
  double best_drop = 0.0;
  for (const auto& report : reports) {
    table.configs.push_back(report.sweep + "__" + report.pipeline);
    std::vector<double> acc;
    std::vector<double> drop;
    for (const auto& row : report.rows) {
      acc.push_back(row.accuracy);
      drop.push_back(row.drop_ratio);
    }
    const double final_drop = drop.empty() ? 0.0 : drop.back();
    if (table.best_config.empty() || final_drop < best_drop) {
      best_drop = final_drop;
      table.best_config = table.configs.back();
    }
    table.accuracy.push_back(std::move(acc));
    table.drop.push_back(std::move(drop));
  }
  return table;
}

std::string comparison_to_markdown(const ComparisonTable& table) {
  std::ostringstream out;
  out << "| level | image | text | table |";
  for (const auto& config : table.configs) {
    out << " " << config << " acc | " << config << " drop |";
  }
  out << "\n|---|---|---|---|";
  for (std::size_t c = 0; c < table.configs.size(); ++c) {
    out << "---|---|";
  }
  out << "\n";
  for (std::size_t i = 0; i < table.levels.size(); ++i) {
    const ReportRow& row = table.levels[i];
    out << "| " << row.index << " | " << format_double(row.image_level)
        << " | " << format_double(row.text_level) << " | "
        << format_double(row.table_level) << " |";
    for (std::size_t c = 0; c < table.configs.size(); ++c) {
      out << " " << format_double(table.accuracy[c][i]) << " | "
          << format_double(table.drop[c][i]) << " |";
    }
    out << "\n";
  }
  out << "\nlowest final-level drop ratio: " << table.best_config << "\n";
  return out.str();
}

std::string comparison_to_csv(const std::vector<RobustnessReport>& reports) {
  compare_configs(reports);  // alignment check
  std::string out;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const std::string csv = report_to_csv_text(reports[i]);
    if (i == 0) {
      out = csv;
    } else {
      out += csv.substr(csv.find('\n') + 1);  // skip the repeated header
    }
  }
  return out;
}

std::string comparison_to_json_text(const ComparisonTable& table) {
  json levels = json::array();
  for (const auto& row : table.levels) {
    levels.push_back({{"index", row.index},
                      {"image", row.image_level},
                      {"text", row.text_level},
                      {"table", row.table_level},
                      {"n", row.n}});
  }
  json configs = json::array();
  for (std::size_t c = 0; c < table.configs.size(); ++c) {
    configs.push_back({{"name", table.configs[c]},
                       {"accuracy", table.accuracy[c]},
                       {"drop_ratio", table.drop[c]}});
  }
  const json j = {{"levels", levels},
                  {"configs", configs},
                  {"best_config", table.best_config}};
  return j.dump(2) + "\n";
}

}  // namespace textalign
