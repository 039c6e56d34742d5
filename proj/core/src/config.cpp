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

#include "textalign/config.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "textalign/dataset.hpp"
#include "textalign/error.hpp"
#include "textalign/fsio.hpp"

namespace textalign {

using nlohmann::json;

const std::vector<double>& default_grid(Modality modality) {
  static const std::vector<double> image{0.0, 0.1, 0.3, 0.5, 0.7, 0.9};
  static const std::vector<double> text{0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
  static const std::vector<double> table{0.0, 0.1, 0.3, 0.5, 0.7, 0.9};
  switch (modality) {
    case Modality::image: return image;
    case Modality::text: return text;
    case Modality::table: return table;
  }
  return text;
}

namespace {

std::filesystem::path resolve(const std::filesystem::path& base,
                              const std::filesystem::path& path) {
  if (path.empty() || path.is_absolute()) return path;
  return std::filesystem::weakly_canonical(base / path);
}

ProviderProfile::Kind parse_provider_kind(const std::string& kind) {
  if (kind == "mock") return ProviderProfile::Kind::mock;
  if (kind == "http") return ProviderProfile::Kind::http;
  throw Error(Errc::bad_config, "unknown provider kind: " + kind);
}

std::string provider_kind_name(ProviderProfile::Kind kind) {
  switch (kind) {
    case ProviderProfile::Kind::mock: return "mock";
    case ProviderProfile::Kind::http: return "http";
    case ProviderProfile::Kind::custom: return "custom";
  }
  return "mock";
}

std::vector<PerturbationSpec> parse_specs(const json& array) {
  std::vector<PerturbationSpec> specs;
  for (const auto& item : array) {
    PerturbationSpec spec;
    spec.modality = parse_modality(item.at("modality").get<std::string>());
    spec.level = item.at("level").get<double>();
    spec.base_seed = item.value("base_seed", std::uint64_t{0});
    specs.push_back(spec);
  }
  return specs;
}

json specs_to_json(const std::vector<PerturbationSpec>& specs) {
  json array = json::array();
  for (const auto& spec : specs) {
    array.push_back({{"modality", std::string(modality_name(spec.modality))},
                     {"level", spec.level},
                     {"base_seed", spec.base_seed}});
  }
  return array;
}

}  // namespace

HarnessConfig config_from_json_text(std::string_view text,
                                    const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(Errc::bad_config, std::string("config JSON: ") + e.what());
  }
  // A run manifest embeds the config it was produced from.
  if (j.contains("manifest_version") && j.contains("config")) {
    j = j["config"];
  }
  HarnessConfig config;
  try {
    config.base_seed = j.value("base_seed", std::uint64_t{0});
    config.offline = j.value("offline", false);
    config.output_dir = resolve(base_dir, j.value("output_dir", "out"));
    config.cache_dir = resolve(base_dir, j.value("cache_dir", "cache"));
    config.prompts_dir = resolve(base_dir, j.value("prompts_dir", "prompts"));
    config.jobs = j.value("jobs", 4);
    config.transcripts = j.value("transcripts", true);

    const json& d = j.at("dataset");
    config.dataset.csv = resolve(base_dir, d.at("csv").get<std::string>());
    config.dataset.schema =
        resolve(base_dir, d.at("schema").get<std::string>());
    if (d.contains("captions") && !d["captions"].is_null()) {
      config.dataset.captions =
          resolve(base_dir, d["captions"].get<std::string>());
    }
    if (d.contains("images_dir") && !d["images_dir"].is_null()) {
      config.dataset.images_dir =
          resolve(base_dir, d["images_dir"].get<std::string>());
    }
    config.dataset.train_fraction = d.value("train_fraction", 0.8);
    config.dataset.image_modality = d.value("image_modality", true);

    if (j.contains("captioner")) {
      const json& c = j["captioner"];
      config.captioner.kind = c.value("kind", "precomputed");
      config.captioner.provider = c.value("provider", "");
      config.captioner.model = c.value("model", "");
    }

    if (j.contains("providers")) {
      for (const auto& [id, p] : j["providers"].items()) {
        ProviderProfile profile;
        profile.id = id;
        profile.kind = parse_provider_kind(p.value("kind", "mock"));
        profile.endpoint = p.value("endpoint", "");
        profile.model = p.value("model", "");
        profile.api_key_env = p.value("api_key_env", "TEXTALIGN_API_KEY");
        profile.timeout_seconds = p.value("timeout_seconds", 30);
        config.providers.emplace(id, std::move(profile));
      }
    }

    if (j.contains("featurizer")) {
      config.featurizer.hash_dim =
          j["featurizer"].value("hash_dim", std::uint32_t{1u << 18});
      config.featurizer.lowercase = j["featurizer"].value("lowercase", true);
    }
    if (j.contains("train")) {
      const json& t = j["train"];
      config.train.epochs = t.value("epochs", 5);
      config.train.learning_rate = t.value("learning_rate", 0.5);
      config.train.l2 = t.value("l2", 0.0);
      config.train.seed = t.value("seed", std::uint64_t{0});
      config.train.shuffle = t.value("shuffle", true);
      if (t.contains("train_time_perturbation")) {
        config.train.train_time_perturbation =
            parse_specs(t["train_time_perturbation"]);
      }
    }

    const json pipelines_json = j.value("pipelines", json::object());
    for (const auto& [name, p] : pipelines_json.items()) {
      PipelineProfileConfig profile;
      profile.name = name;
      profile.summarization = p.value("summarization", true);
      profile.reasoning = p.value("reasoning", true);
      profile.include_transformed_text =
          p.value("include_transformed_text", true);
      profile.provider = p.value("provider", "");
      profile.model = p.value("model", "");
      profile.temperature = p.value("temperature", 0.0);
      profile.max_tokens = p.value("max_tokens", 512);
      profile.exemplars = p.value("exemplars", 1);
      config.pipelines.emplace(name, std::move(profile));
    }

    const json sweeps_json = j.value("sweeps", json::object());
    for (const auto& [name, s] : sweeps_json.items()) {
      SweepDef sweep;
      sweep.name = name;
      sweep.target = parse_sweep_target(s.value("target", "all"));
      sweep.pipeline = s.value("pipeline", "");
      sweep.repetitions = s.value("repetitions", 1);
      const json grids = s.value("grids", json::object());
      for (const Modality modality :
           {Modality::image, Modality::text, Modality::table}) {
        const std::string key(modality_name(modality));
        if (grids.contains(key)) {
          sweep.grids[modality] = grids[key].get<std::vector<double>>();
        } else {
          sweep.grids[modality] = default_grid(modality);
        }
      }
      config.sweeps.push_back(std::move(sweep));
    }
    std::sort(config.sweeps.begin(), config.sweeps.end(),
              [](const SweepDef& a, const SweepDef& b) {
                return a.name < b.name;
              });
  } catch (const json::exception& e) {
    throw Error(Errc::bad_config, std::string("config field error: ") +
                                      e.what());
  }
  return config;
}

HarnessConfig load_config(const std::filesystem::path& path) {
  const auto base =
      std::filesystem::weakly_canonical(path).parent_path();
  return config_from_json_text(read_text_file(path), base);
}

namespace {

json config_to_json(const HarnessConfig& config, bool canonical) {
  json providers = json::object();
  for (const auto& [id, p] : config.providers) {
    providers[id] = {{"kind", provider_kind_name(p.kind)},
                     {"endpoint", p.endpoint},
                     {"model", p.model},
                     {"api_key_env", p.api_key_env},
                     {"timeout_seconds", p.timeout_seconds}};
  }
  json pipelines = json::object();
  for (const auto& [name, p] : config.pipelines) {
    pipelines[name] = {{"summarization", p.summarization},
                       {"reasoning", p.reasoning},
                       {"include_transformed_text", p.include_transformed_text},
                       {"provider", p.provider},
                       {"model", p.model},
                       {"temperature", p.temperature},
                       {"max_tokens", p.max_tokens},
                       {"exemplars", p.exemplars}};
  }
  json sweeps = json::object();
  for (const auto& sweep : config.sweeps) {
    json grids = json::object();
    for (const auto& [modality, grid] : sweep.grids) {
      grids[std::string(modality_name(modality))] = grid;
    }
    sweeps[sweep.name] = {{"target", std::string(sweep_target_name(sweep.target))},
                          {"pipeline", sweep.pipeline},
                          {"repetitions", sweep.repetitions},
                          {"grids", grids}};
  }
  json dataset = {{"csv", config.dataset.csv.string()},
                  {"schema", config.dataset.schema.string()},
                  {"train_fraction", config.dataset.train_fraction},
                  {"image_modality", config.dataset.image_modality}};
  if (config.dataset.captions) {
    dataset["captions"] = config.dataset.captions->string();
  }
  if (config.dataset.images_dir) {
    dataset["images_dir"] = config.dataset.images_dir->string();
  }
  json j = {{"base_seed", config.base_seed},
            {"offline", config.offline},
            {"dataset", dataset},
            {"captioner",
             {{"kind", config.captioner.kind},
              {"provider", config.captioner.provider},
              {"model", config.captioner.model}}},
            {"providers", providers},
            {"featurizer",
             {{"hash_dim", config.featurizer.hash_dim},
              {"lowercase", config.featurizer.lowercase}}},
            {"train",
             {{"epochs", config.train.epochs},
              {"learning_rate", config.train.learning_rate},
              {"l2", config.train.l2},
              {"seed", config.train.seed},
              {"shuffle", config.train.shuffle},
              {"train_time_perturbation",
               specs_to_json(config.train.train_time_perturbation)}}},
            {"pipelines", pipelines},
            {"sweeps", sweeps}};
  if (!canonical) {
    j["output_dir"] = config.output_dir.string();
    j["cache_dir"] = config.cache_dir.string();
    j["jobs"] = config.jobs;
    j["transcripts"] = config.transcripts;
  }
  j["prompts_dir"] = config.prompts_dir.string();
  return j;
}

}  // namespace

std::string config_to_json_text(const HarnessConfig& config) {
  return config_to_json(config, false).dump(2) + "\n";
}

std::string config_canonical_text(const HarnessConfig& config) {
  return config_to_json(config, true).dump();
}

std::vector<Diagnostic> validate_config(const HarnessConfig& config) {
  std::vector<Diagnostic> diagnostics;
  auto report = [&](std::string code, std::string message) {
    diagnostics.push_back({std::move(code), std::move(message)});
  };

  auto check_file = [&](const std::filesystem::path& path,
                        const std::string& what) {
    if (path.empty() || !std::filesystem::exists(path)) {
      report("MissingFile", what + ": " + path.string());
      return false;
    }
    return true;
  };

  check_file(config.dataset.csv, "dataset.csv");
  TabularSchema schema;
  bool have_schema = false;
  if (check_file(config.dataset.schema, "dataset.schema")) {
    try {
      schema = load_schema(config.dataset.schema);
      have_schema = true;
    } catch (const Error& e) {
      report("BadSchema", e.what());
    }
  }
  if (config.dataset.captions) {
    check_file(*config.dataset.captions, "dataset.captions");
  }
  if (config.dataset.images_dir &&
      !std::filesystem::is_directory(*config.dataset.images_dir)) {
    report("MissingFile",
           "dataset.images_dir: " + config.dataset.images_dir->string());
  }
  if (config.dataset.train_fraction <= 0.0 ||
      config.dataset.train_fraction >= 1.0) {
    report("BadFraction",
           "dataset.train_fraction must lie in (0, 1), got " +
               std::to_string(config.dataset.train_fraction));
  }

  for (const char* name :
       {"summarize_system.txt", "summarize_user.txt",
        "summarize_exemplar_user.txt", "summarize_exemplar_assistant.txt",
        "reason_system.txt", "reason_user.txt", "caption_system.txt",
        "caption_user.txt"}) {
    check_file(config.prompts_dir / name, "prompt template");
  }

  if (config.captioner.kind != "precomputed" &&
      config.captioner.kind != "provider" &&
      config.captioner.kind != "disabled") {
    report("BadValue", "captioner.kind: " + config.captioner.kind);
  }
  if (config.captioner.kind == "provider" &&
      config.providers.find(config.captioner.provider) ==
          config.providers.end()) {
    report("UnknownProvider",
           "captioner.provider: " + config.captioner.provider);
  }
  if (config.captioner.kind == "precomputed" &&
      config.dataset.image_modality && !config.dataset.captions) {
    report("MissingFile",
           "captioner.kind=precomputed requires dataset.captions");
  }

  for (const auto& [id, provider] : config.providers) {
    if (provider.kind == ProviderProfile::Kind::http &&
        provider.endpoint.empty() && !config.offline) {
      report("MissingEndpoint", "provider " + id + " has no endpoint");
    }
  }

  if (config.featurizer.hash_dim < 2 ||
      (config.featurizer.hash_dim & (config.featurizer.hash_dim - 1)) != 0) {
    report("BadValue", "featurizer.hash_dim must be a power of two >= 2");
  }
  if (config.train.epochs < 0) {
    report("BadValue", "train.epochs must be non-negative");
  }
  if (config.train.learning_rate <= 0.0) {
    report("BadValue", "train.learning_rate must be positive");
  }
  if (config.train.l2 < 0.0) {
    report("BadValue", "train.l2 must be non-negative");
  }
  for (const auto& spec : config.train.train_time_perturbation) {
    if (spec.level < 0.0 || spec.level > 1.0) {
      report("BadValue", "train_time_perturbation level outside [0, 1]");
    }
  }

  for (const auto& [name, pipeline] : config.pipelines) {
    if (config.providers.find(pipeline.provider) == config.providers.end()) {
      report("UnknownProvider",
             "pipeline " + name + " references provider " + pipeline.provider);
    }
    if (pipeline.exemplars < 1) {
      report("BadValue", "pipeline " + name + ": exemplars must be >= 1");
    }
    if (pipeline.max_tokens < 1) {
      report("BadValue", "pipeline " + name + ": max_tokens must be >= 1");
    }
    if (pipeline.temperature < 0.0) {
      report("BadValue", "pipeline " + name + ": temperature must be >= 0");
    }
  }

  if (have_schema && schema.label_cardinality < 2) {
    report("BadSchema", "label_cardinality must be at least 2 for sweeps");
  }

  for (const auto& sweep : config.sweeps) {
    if (config.pipelines.find(sweep.pipeline) == config.pipelines.end()) {
      report("UnknownPipeline",
             "sweep " + sweep.name + " references pipeline " + sweep.pipeline);
    }
    if (sweep.repetitions < 1) {
      report("BadValue", "sweep " + sweep.name + ": repetitions must be >= 1");
    }
    std::size_t shared_length = 0;
    bool lengths_differ = false;
    for (const auto& [modality, levels] : sweep.grids) {
      const std::string label = "sweep " + sweep.name + " " +
                                std::string(modality_name(modality)) + " grid";
      if (levels.empty() || levels.front() != 0.0) {
        report("GridMissingZero", label + " must start at level 0");
        continue;
      }
      bool ascending = true;
      for (std::size_t i = 0; i < levels.size(); ++i) {
        if (levels[i] < 0.0 || levels[i] > 1.0) {
          report("GridOutOfRange", label + " has a level outside [0, 1]");
          ascending = false;
          break;
        }
        if (i > 0 && levels[i] <= levels[i - 1]) {
          ascending = false;
        }
      }
      if (!ascending) {
        report("GridNotAscending", label + " must be strictly ascending");
      }
      if (sweep.target == SweepTarget::all) {
        if (shared_length == 0) {
          shared_length = levels.size();
        } else if (levels.size() != shared_length) {
          lengths_differ = true;
        }
      }
    }
    if (lengths_differ) {
      report("MismatchedGridLengths",
             "sweep " + sweep.name +
                 ": all-modality grids must share one length");
    }
  }
  return diagnostics;
}

std::string diagnostics_to_json_text(
    const std::vector<Diagnostic>& diagnostics) {
  json array = json::array();
  for (const auto& diagnostic : diagnostics) {
    array.push_back(
        {{"code", diagnostic.code}, {"message", diagnostic.message}});
  }
  return array.dump(2) + "\n";
}

}  // namespace textalign
