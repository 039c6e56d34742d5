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

#include "textalign/pipeline.hpp"

#include <algorithm>

#include "textalign/error.hpp"
#include "textalign/fsio.hpp"
#include "textalign/strings.hpp"

namespace textalign {

PromptSet load_prompts(const std::filesystem::path& dir) {
  PromptSet prompts;
  prompts.summarize_system = read_text_file(dir / "summarize_system.txt");
  prompts.summarize_user = read_text_file(dir / "summarize_user.txt");
  prompts.summarize_exemplar_user =
      read_text_file(dir / "summarize_exemplar_user.txt");
  prompts.summarize_exemplar_assistant =
      read_text_file(dir / "summarize_exemplar_assistant.txt");
  prompts.reason_system = read_text_file(dir / "reason_system.txt");
  prompts.reason_user = read_text_file(dir / "reason_user.txt");
  prompts.caption_system = read_text_file(dir / "caption_system.txt");
  prompts.caption_user = read_text_file(dir / "caption_user.txt");
  return prompts;
}

std::string sections_prompt_text(const ModalityTexts& sections) {
  std::vector<std::string> parts;
  for (const std::string* section :
       {&sections.table_text, &sections.image_text, &sections.raw_text}) {
    if (!section->empty()) parts.push_back(*section);
  }
  return join(parts, "\n\n");
}

namespace {

CompletionResponse run_completion(const CompletionRequest& request,
                                  const PipelineConfig& config,
                                  LlmClient& client, const char* stage,
                                  std::vector<TranscriptEntry>* transcript) {
  const CompletionResponse response =
      config.cache_dir.empty()
          ? client.complete(request)
          : client.cached_complete(request, config.cache_dir);
  if (transcript) {
    transcript->push_back({stage, request_digest(request), response.content});
  }
  return response;
}

std::string render(std::string text, std::string_view placeholder,
                   std::string_view value) {
  replace_all(text, placeholder, value);
  return text;
}

}  // namespace

std::string summarize(const ModalityTexts& sections,
                      const std::optional<Exemplar>& exemplar,
                      const PipelineConfig& config, LlmClient& client,
                      std::vector<TranscriptEntry>* transcript) {
  const std::string input = sections_prompt_text(sections);
  if (input.empty()) {
    throw Error(Errc::empty_input, "all sections are empty");
  }
  CompletionRequest request;
  request.provider_id = config.provider_id;
  request.model = config.model;
  request.temperature = config.temperature;
  request.max_tokens = config.max_tokens;
  request.messages.push_back({Role::system, config.prompts.summarize_system});
  if (exemplar) {
    request.messages.push_back(
        {Role::user, render(config.prompts.summarize_exemplar_user,
                            "{EXEMPLAR_INPUT}", exemplar->input_sections)});
    request.messages.push_back(
        {Role::assistant, render(config.prompts.summarize_exemplar_assistant,
                                 "{EXEMPLAR_SUMMARY}", exemplar->summary)});
  }
  request.messages.push_back(
      {Role::user, render(config.prompts.summarize_user, "{SECTIONS}", input)});
  return run_completion(request, config, client, "summarize", transcript)
      .content;
}

std::string reason(const ModalityTexts& sections, const PipelineConfig& config,
                   LlmClient& client,
                   std::vector<TranscriptEntry>* transcript) {
  const std::string input = sections_prompt_text(sections);
  if (input.empty()) {
    throw Error(Errc::empty_input, "all sections are empty");
  }
  CompletionRequest request;
  request.provider_id = config.provider_id;
  request.model = config.model;
  request.temperature = config.temperature;
  request.max_tokens = config.max_tokens;
  request.messages.push_back(
      {Role::system, render(config.prompts.reason_system, "{K}",
                            std::to_string(config.label_cardinality))});
  request.messages.push_back(
      {Role::user, render(config.prompts.reason_user, "{SECTIONS}", input)});
  return run_completion(request, config, client, "reason", transcript).content;
}

std::vector<Exemplar> collect_exemplars(
    const std::vector<MultimodalRecord>& train_records,
    const TabularSchema& schema, const Captioner& captioner,
    const PipelineConfig& config, LlmClient& client, int n) {
  if (n < 1) {
    throw Error(Errc::n_at_least_one, "exemplar count must be at least 1");
  }
  if (static_cast<std::size_t>(n) > train_records.size()) {
    throw Error(Errc::n_at_least_one,
                "exemplar count exceeds the training set size");
  }
  // Deterministic selection: ascending record id.
  std::vector<const MultimodalRecord*> ordered;
  ordered.reserve(train_records.size());
  for (const auto& record : train_records) ordered.push_back(&record);
  std::sort(ordered.begin(), ordered.end(),
            [](const MultimodalRecord* a, const MultimodalRecord* b) {
              return a->id < b->id;
            });

  std::vector<Exemplar> exemplars;
  exemplars.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const ModalityTexts sections =
        assemble_sections(*ordered[i], schema, captioner);
    Exemplar exemplar;
    exemplar.input_sections = sections_prompt_text(sections);
    exemplar.summary =
        summarize(sections, std::nullopt, config, client, nullptr);
    exemplars.push_back(std::move(exemplar));
  }
  return exemplars;
}

AlignedText run_pipeline(const MultimodalRecord& record,
                         const TabularSchema& schema,
                         const Captioner& captioner,
                         const PipelineConfig& config, LlmClient& client) {
  AlignedText aligned;
  aligned.record_id = record.id;

  const ModalityTexts sections =
      assemble_sections(record, schema, captioner, &aligned.transcript);
  const std::string transform = sections_prompt_text(sections);
  aligned.stage_outputs["transform"] = transform;

  // Summarization and reasoning are independent of each other: both read
  // the transformed sections, never each other's output.
  if (config.enable_summarization) {
    aligned.stage_outputs["summary"] = summarize(
        sections, config.exemplar, config, client, &aligned.transcript);
  }
  if (config.enable_reasoning) {
    aligned.stage_outputs["reasoning"] =
        reason(sections, config, client, &aligned.transcript);
  }

  std::vector<std::string> segments;
  if (config.include_transformed_text) segments.push_back(transform);
  if (config.enable_summarization) {
    segments.push_back(aligned.stage_outputs.at("summary"));
  }
  if (config.enable_reasoning) {
    segments.push_back(aligned.stage_outputs.at("reasoning"));
  }
  aligned.final_text = join(segments, "\n\n");
  return aligned;
}

}  // namespace textalign
