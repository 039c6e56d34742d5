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

#include "textalign/runner.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "textalign/dataset.hpp"
#include "textalign/digest.hpp"
#include "textalign/error.hpp"
#include "textalign/fsio.hpp"
#include "textalign/version.hpp"

namespace textalign {

using nlohmann::json;

namespace {

std::string hash_inputs(const HarnessConfig& config) {
  std::string material = read_text_file(config.dataset.csv);
  material += read_text_file(config.dataset.schema);
  if (config.dataset.captions) {
    material += read_text_file(*config.dataset.captions);
  }
  return sha256_hex(material);
}

std::string hash_prompts(const HarnessConfig& config) {
  std::string material;
  for (const char* name :
       {"summarize_system.txt", "summarize_user.txt",
        "summarize_exemplar_user.txt", "summarize_exemplar_assistant.txt",
        "reason_system.txt", "reason_user.txt", "caption_system.txt",
        "caption_user.txt"}) {
    material += read_text_file(config.prompts_dir / name);
  }
  return sha256_hex(material);
}

void apply_overrides(HarnessConfig& config, const RunOverrides& overrides) {
  if (overrides.offline) config.offline = true;
  if (overrides.cache_dir) config.cache_dir = *overrides.cache_dir;
  if (overrides.seed) config.base_seed = *overrides.seed;
  if (overrides.jobs) config.jobs = *overrides.jobs;
}

PipelineConfig build_pipeline_config(const HarnessConfig& config,
                                     const PipelineProfileConfig& profile,
                                     const PromptSet& prompts,
                                     const TabularSchema& schema) {
  PipelineConfig pipeline;
  pipeline.name = profile.name;
  pipeline.enable_summarization = profile.summarization;
  pipeline.enable_reasoning = profile.reasoning;
  pipeline.include_transformed_text = profile.include_transformed_text;
  pipeline.provider_id = profile.provider;
  const auto provider_it = config.providers.find(profile.provider);
  pipeline.model = !profile.model.empty()
                       ? profile.model
                       : (provider_it != config.providers.end()
                              ? provider_it->second.model
                              : std::string());
  pipeline.temperature = profile.temperature;
  pipeline.max_tokens = profile.max_tokens;
  pipeline.label_cardinality = schema.label_cardinality;
  pipeline.prompts = prompts;
  pipeline.cache_dir = config.cache_dir;
  return pipeline;
}

Captioner build_captioner(const HarnessConfig& config,
                          const std::vector<MultimodalRecord>& records,
                          const PromptSet& prompts, LlmClient& client) {
  if (!config.dataset.image_modality || config.captioner.kind == "disabled") {
    return make_disabled_captioner();
  }
  if (config.captioner.kind == "provider" && !config.offline) {
    Captioner captioner;
    captioner.kind = Captioner::Kind::provider;
    captioner.provider_id = config.captioner.provider;
    const auto it = config.providers.find(config.captioner.provider);
    captioner.model = !config.captioner.model.empty()
                          ? config.captioner.model
                          : (it != config.providers.end() ? it->second.model
                                                          : std::string());
    captioner.system_template = prompts.caption_system;
    captioner.user_template = prompts.caption_user;
    captioner.client = &client;
    captioner.cache_dir = config.cache_dir;
    return captioner;
  }
  return make_precomputed_captioner(records);
}

struct SelectedJob {
  SweepDef sweep;
  std::string pipeline;
};

std::vector<SelectedJob> select_jobs(const HarnessConfig& config,
                                     const RunOverrides& overrides) {
  std::vector<SelectedJob> jobs;
  for (const auto& sweep : config.sweeps) {
    if (!overrides.sweeps.empty() &&
        std::find(overrides.sweeps.begin(), overrides.sweeps.end(),
                  sweep.name) == overrides.sweeps.end()) {
      continue;
    }
    if (overrides.pipelines.empty()) {
      jobs.push_back({sweep, sweep.pipeline});
    } else {
      for (const auto& profile : overrides.pipelines) {
        jobs.push_back({sweep, profile});
      }
    }
  }
  if (jobs.empty()) {
    throw Error(Errc::bad_config, "no sweeps selected");
  }
  for (const auto& job : jobs) {
    if (config.pipelines.find(job.pipeline) == config.pipelines.end()) {
      throw Error(Errc::bad_config, "unknown pipeline: " + job.pipeline);
    }
  }
  return jobs;
}

std::string transcript_line(const SweepTranscript& t) {
  json exchanges = json::array();
  for (const auto& entry : t.aligned.transcript) {
    exchanges.push_back({{"stage", entry.stage},
                         {"digest", entry.digest},
                         {"response", entry.response}});
  }
  const json j = {{"sweep", t.sweep},
                  {"pipeline", t.pipeline},
                  {"level_index", t.level_index},
                  {"repetition", t.repetition},
                  {"levels",
                   {{"image", t.image_level},
                    {"text", t.text_level},
                    {"table", t.table_level}}},
                  {"record_id", t.aligned.record_id},
                  {"predicted", t.predicted},
                  {"label", t.label},
                  {"stages", t.aligned.stage_outputs},
                  {"final_text", t.aligned.final_text},
                  {"exchanges", exchanges}};
  return j.dump();
}

}  // namespace

std::string compute_run_id(const HarnessConfig& config) {
  const std::string material = config_canonical_text(config) +
                               hash_inputs(config) + hash_prompts(config) +
                               kVersion;
  return sha256_hex(material).substr(0, 12);
}

RunSummary run_harness(HarnessConfig config, const RunOverrides& overrides) {
  apply_overrides(config, overrides);

  {
    const auto diagnostics = validate_config(config);
    if (!diagnostics.empty()) {
      throw Error(Errc::bad_config,
                  "config is invalid:\n" +
                      diagnostics_to_json_text(diagnostics));
    }
  }

  const TabularSchema schema = load_schema(config.dataset.schema);
  const std::vector<MultimodalRecord> records = load_dataset(
      config.dataset.csv, schema, config.dataset.captions,
      config.dataset.images_dir);
  const DatasetSplit split =
      split_dataset(records, config.dataset.train_fraction, config.base_seed);
  const PromptSet prompts = load_prompts(config.prompts_dir);

  LlmClient::Options client_options;
  client_options.offline = config.offline;
  client_options.max_in_flight = std::max(config.jobs, 1);
  LlmClient client(client_options);
  for (const auto& [id, profile] : config.providers) {
    client.register_profile(profile);
  }

  const Captioner captioner =
      build_captioner(config, records, prompts, client);

  RunSummary summary;
  summary.run_id = compute_run_id(config);
  summary.run_dir = config.output_dir / summary.run_id;
  const std::string canonical = config_canonical_text(config);
  const std::filesystem::path manifest_path = summary.run_dir / "manifest.json";
  if (std::filesystem::exists(manifest_path)) {
    const json manifest = json::parse(read_text_file(manifest_path));
    if (manifest.value("config_canonical", "") != canonical) {
      throw Error(Errc::run_id_collision,
                  "run directory " + summary.run_dir.string() +
                      " holds a different configuration");
    }
  }
  std::filesystem::create_directories(summary.run_dir);

  const std::vector<SelectedJob> jobs = select_jobs(config, overrides);

  // Train once per pipeline profile used by any selected sweep.
  std::set<std::string> profile_names;
  for (const auto& job : jobs) profile_names.insert(job.pipeline);

  std::map<std::string, TrainArtifacts> artifacts_by_profile;
  for (const std::string& name : profile_names) {
    const PipelineProfileConfig& profile = config.pipelines.at(name);
    PipelineConfig pipeline =
        build_pipeline_config(config, profile, prompts, schema);
    if (pipeline.enable_summarization) {
      const auto exemplars =
          collect_exemplars(split.train, schema, captioner, pipeline, client,
                            profile.exemplars);
      pipeline.exemplar = exemplars.front();
    }

    // Robust-training baseline: perturb the training inputs only.
    std::vector<SparseVector> features;
    std::vector<int> labels;
    features.reserve(split.train.size());
    labels.reserve(split.train.size());
    std::vector<PerturbationSpec> train_specs =
        config.train.train_time_perturbation;
    for (auto& spec : train_specs) spec.base_seed = config.base_seed;
    for (const auto& record : split.train) {
      const MultimodalRecord input =
          train_specs.empty() ? record : apply_spec(record, train_specs);
      const AlignedText aligned =
          run_pipeline(input, schema, captioner, pipeline, client);
      features.push_back(featurize(aligned.final_text, config.featurizer));
      labels.push_back(record.label);
    }
    const TrainResult trained =
        train(features, labels, schema.label_cardinality, config.train);

    const std::filesystem::path model_path =
        summary.run_dir / ("model__" + name + ".json");
    write_text_file(model_path,
                    model_to_json_text(trained.model, config.featurizer));
    summary.model_files.push_back(model_path);

    artifacts_by_profile.emplace(
        name, TrainArtifacts{trained.model, config.featurizer, pipeline});
  }

  const std::string config_hash = sha256_hex(canonical);

  std::ofstream transcripts;
  if (config.transcripts) {
    transcripts.open(summary.run_dir / "transcripts.jsonl",
                     std::ios::binary | std::ios::trunc);
    if (!transcripts) {
      throw Error(Errc::io_error, "cannot write transcripts.jsonl");
    }
  }

  json manifest_reports = json::array();
  for (const auto& job : jobs) {
    SweepConfig sweep;
    sweep.name = job.sweep.name;
    sweep.target = job.sweep.target;
    sweep.base_seed = config.base_seed;
    sweep.pipeline = job.pipeline;
    sweep.repetitions = job.sweep.repetitions;
    for (const auto& [modality, levels] : job.sweep.grids) {
      sweep.grids.emplace(modality, LevelGrid{modality, levels});
    }

    SweepOptions options;
    options.jobs = config.jobs;
    options.config_hash = config_hash;
    const std::string stem = job.sweep.name + "__" + job.pipeline;
    options.checkpoint_path =
        summary.run_dir / ("checkpoint__" + stem + ".json");
    if (config.transcripts) {
      options.transcript_sink = [&](const SweepTranscript& t) {
        transcripts << transcript_line(t) << "\n";
      };
    }

    RobustnessReport report;
    try {
      report = run_sweep(split.test, artifacts_by_profile.at(job.pipeline),
                         sweep, schema, captioner, client, options);
    } catch (const Error& e) {
      if (std::filesystem::exists(options.checkpoint_path)) {
        std::string message = e.what();
        const auto colon = message.find(": ");
        if (colon != std::string::npos) message = message.substr(colon + 2);
        throw Error(e.code(), message + " (resumable checkpoint: " +
                                  options.checkpoint_path.string() + ")");
      }
      throw;
    }
    std::filesystem::remove(options.checkpoint_path);

    const std::filesystem::path report_path =
        summary.run_dir / ("report__" + stem + ".json");
    write_text_file(report_path, report_to_json_text(report));
    write_text_file(summary.run_dir / ("report__" + stem + ".csv"),
                    report_to_csv_text(report));
    summary.report_files.push_back(report_path);
    manifest_reports.push_back(report_path.filename().string());
  }
  if (transcripts.is_open()) transcripts.close();

  // Comparison tables for every aligned group of reports.
  {
    std::map<std::string, std::vector<RobustnessReport>> groups;
    for (const auto& path : summary.report_files) {
      const RobustnessReport report =
          report_from_json_text(read_text_file(path));
      std::string key = report.target;
      for (const auto& row : report.rows) {
        key += "|" + std::to_string(row.image_level) + "," +
               std::to_string(row.text_level) + "," +
               std::to_string(row.table_level);
      }
      groups[key].push_back(report);
    }
    for (const auto& [key, reports] : groups) {
      (void)key;
      const ComparisonTable table = compare_configs(reports);
      write_text_file(
          summary.run_dir / ("comparison__" + reports.front().target + ".md"),
          comparison_to_markdown(table));
    }
  }

  const ClientStats stats = client.stats();
  summary.live_http_calls = stats.live_http_calls;
  summary.provider_calls = stats.provider_calls;

  json manifest = {{"manifest_version", 1},
                   {"run_id", summary.run_id},
                   {"code_version", kVersion},
                   {"config_hash", config_hash},
                   {"config_canonical", canonical},
                   {"dataset_hash", hash_inputs(config)},
                   {"prompts_hash", hash_prompts(config)},
                   {"base_seed", config.base_seed},
                   {"offline", config.offline},
                   {"reports", manifest_reports},
                   {"config", json::parse(config_to_json_text(config))}};
  write_text_file(manifest_path, manifest.dump(2) + "\n");

  const json stats_json = {{"provider_calls", stats.provider_calls},
                           {"live_http_calls", stats.live_http_calls},
                           {"cache_hits", stats.cache_hits},
                           {"cache_misses", stats.cache_misses},
                           {"retries", stats.retries}};
  write_text_file(summary.run_dir / "stats.json", stats_json.dump(2) + "\n");
  return summary;
}

}  // namespace textalign
