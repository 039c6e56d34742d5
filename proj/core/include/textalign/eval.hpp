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

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "textalign/model.hpp"
#include "textalign/perturb.hpp"
#include "textalign/pipeline.hpp"

namespace textalign {

// Robustness sweeps: run the pipeline + classifier over perturbation level
// grids per-modality or jointly, and report accuracy (relative robustness)
// and drop ratio (effective robustness) per level.

enum class SweepTarget { image, text, table, all };

std::string_view sweep_target_name(SweepTarget target);
SweepTarget parse_sweep_target(std::string_view name);

struct SweepConfig {
  std::string name;
  SweepTarget target = SweepTarget::all;
  std::map<Modality, LevelGrid> grids;
  std::uint64_t base_seed = 0;
  std::string pipeline;  // pipeline profile name
  int repetitions = 1;   // seeds per level
};

// Throws BadConfig unless the targeted grids exist, start at 0, and (for
// target=all) share one length so levels pair pointwise by index.
void check_sweep(const SweepConfig& sweep);

struct ReportRow {
  int index = 0;
  double image_level = 0.0;
  double text_level = 0.0;
  double table_level = 0.0;
  int n = 0;
  double accuracy = 0.0;
  double drop_ratio = 0.0;
};

struct RobustnessReport {
  std::string sweep;
  std::string pipeline;
  std::string provider;
  std::string target;
  std::uint64_t base_seed = 0;
  int repetitions = 1;
  std::string config_hash;
  bool surrogate_image = false;
  double clean_accuracy = 0.0;
  std::vector<ReportRow> rows;
};

// (acc_clean - acc_pert) / acc_clean. Throws ZeroCleanAccuracy when
// acc_clean <= 0.
double drop_ratio(double acc_clean, double acc_pert);

struct TrainArtifacts {
  LinearModel model;
  FeaturizerConfig featurizer;
  PipelineConfig pipeline;
};

// One transcript row per (level, repetition, record) when a sink is set.
struct SweepTranscript {
  std::string sweep;
  std::string pipeline;
  int level_index = 0;
  int repetition = 0;
  double image_level = 0.0;
  double text_level = 0.0;
  double table_level = 0.0;
  AlignedText aligned;
  int predicted = 0;
  int label = 0;
};

struct SweepOptions {
  int jobs = 4;
  std::string config_hash;
  bool surrogate_image = false;
  std::function<void(const SweepTranscript&)> transcript_sink;
  // When set, a provider failure writes partial rows here before the error
  // propagates, so the run can resume from the warm cache.
  std::filesystem::path checkpoint_path;
};

// For each level index and repetition: perturb every test record, run the
// pipeline, featurize, predict, and score. Drop ratios anchor to the
// level-0 accuracy of the same sweep. Deterministic under the mock provider
// regardless of worker count.
RobustnessReport run_sweep(const std::vector<MultimodalRecord>& test_records,
                           const TrainArtifacts& artifacts,
                           const SweepConfig& sweep,
                           const TabularSchema& schema,
                           const Captioner& captioner, LlmClient& client,
                           const SweepOptions& options = {});

std::string report_to_json_text(const RobustnessReport& report);
RobustnessReport report_from_json_text(std::string_view text);

// CSV with the exact header sweep,target,level_index,image_level,text_level,
// table_level,n,accuracy,drop_ratio. The sweep column holds the report name
// (sweep__pipeline) so rows stay unique across configs.
std::string report_to_csv_text(const RobustnessReport& report);

struct ComparisonTable {
  std::vector<std::string> configs;  // report names, column order
  std::vector<ReportRow> levels;     // level metadata from the first report
  // accuracy[c][level], drop[c][level] per config
  std::vector<std::vector<double>> accuracy;
  std::vector<std::vector<double>> drop;
  std::string best_config;  // minimum drop ratio at the maximum level
};

// Aligns reports that share a sweep definition (target, grids, seed,
// repetitions, n). Throws MismatchedSweeps otherwise.
ComparisonTable compare_configs(const std::vector<RobustnessReport>& reports);

std::string comparison_to_markdown(const ComparisonTable& table);
std::string comparison_to_csv(const std::vector<RobustnessReport>& reports);
std::string comparison_to_json_text(const ComparisonTable& table);

}  // namespace textalign
