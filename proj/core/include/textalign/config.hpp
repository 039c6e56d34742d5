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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "textalign/eval.hpp"
#include "textalign/llm.hpp"
#include "textalign/model.hpp"
#include "textalign/perturb.hpp"

namespace textalign {

// One JSON document configures a whole run; relative paths resolve against
// the config file's directory at load time so runs are location-independent.

struct DatasetConfig {
  std::filesystem::path csv;
  std::filesystem::path schema;
  std::optional<std::filesystem::path> captions;
  std::optional<std::filesystem::path> images_dir;
  double train_fraction = 0.8;
  bool image_modality = true;
};

struct CaptionerConfig {
  std::string kind = "precomputed";  // precomputed | provider | disabled
  std::string provider;              // provider kind only
  std::string model;
};

struct PipelineProfileConfig {
  std::string name;
  bool summarization = true;
  bool reasoning = true;
  bool include_transformed_text = true;
  std::string provider;
  std::string model;  // empty -> provider profile default
  double temperature = 0.0;
  int max_tokens = 512;
  int exemplars = 1;  // one-shot by default
};

struct SweepDef {
  std::string name;
  SweepTarget target = SweepTarget::all;
  std::map<Modality, std::vector<double>> grids;  // defaults filled at load
  std::string pipeline;
  int repetitions = 1;
};

struct HarnessConfig {
  std::uint64_t base_seed = 0;
  bool offline = false;
  std::filesystem::path output_dir = "out";
  std::filesystem::path cache_dir = "cache";
  std::filesystem::path prompts_dir;
  int jobs = 4;
  bool transcripts = true;

  DatasetConfig dataset;
  CaptionerConfig captioner;
  std::map<std::string, ProviderProfile> providers;
  FeaturizerConfig featurizer;
  TrainConfig train;
  std::map<std::string, PipelineProfileConfig> pipelines;
  std::vector<SweepDef> sweeps;
};

// Default level grids: text fixes five 10%-steps; image and table span
// 10%-90% in five steps. All configurable per sweep.
const std::vector<double>& default_grid(Modality modality);

// Parses the config file (or a run manifest embedding one) and resolves
// relative paths. Throws BadConfig on structural problems.
HarnessConfig load_config(const std::filesystem::path& path);
HarnessConfig config_from_json_text(std::string_view text,
                                    const std::filesystem::path& base_dir);

// Full JSON form, round-trippable through config_from_json_text.
std::string config_to_json_text(const HarnessConfig& config);

// Result-affecting fields only (seed, offline, dataset, providers,
// featurizer, train, pipelines, sweeps); the identity hashed into run ids.
std::string config_canonical_text(const HarnessConfig& config);

struct Diagnostic {
  std::string code;
  std::string message;
};

// Exhaustive static checks: referenced files exist, the schema loads, every
// sweep references a defined pipeline, every pipeline a defined provider,
// grids include the 0 baseline and ascend. Empty result means clean.
std::vector<Diagnostic> validate_config(const HarnessConfig& config);

std::string diagnostics_to_json_text(const std::vector<Diagnostic>& diagnostics);

}  // namespace textalign
