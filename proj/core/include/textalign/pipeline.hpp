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

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "textalign/dataset.hpp"
#include "textalign/llm.hpp"
#include "textalign/textify.hpp"

namespace textalign {

// Orchestration of transformation -> parallel {summarization, reasoning} ->
// concatenation, with stage toggles for component ablations and one-shot
// exemplar management.

// Prompt texts live in versioned template files, one file per message slot,
// so model ablations vary only the provider/model configuration.
struct PromptSet {
  std::string summarize_system;             // carries the SUMMARIZE tag
  std::string summarize_user;               // {SECTIONS}
  std::string summarize_exemplar_user;      // {EXEMPLAR_INPUT}
  std::string summarize_exemplar_assistant; // {EXEMPLAR_SUMMARY}
  std::string reason_system;                // carries {K} and the REASON tag
  std::string reason_user;                  // {SECTIONS}
  std::string caption_system;               // carries the CAPTION tag
  std::string caption_user;                 // {IMAGE}
};

PromptSet load_prompts(const std::filesystem::path& dir);

struct Exemplar {
  std::string input_sections;
  std::string summary;
};

struct PipelineConfig {
  std::string name;  // profile name used in reports
  bool enable_summarization = true;
  bool enable_reasoning = true;
  bool include_transformed_text = true;
  std::optional<Exemplar> exemplar;
  std::string provider_id;
  std::string model;
  double temperature = 0.0;
  int max_tokens = 512;
  int label_cardinality = 0;  // K
  PromptSet prompts;
  std::filesystem::path cache_dir;  // empty -> uncached completions
};

struct AlignedText {
  std::string record_id;
  std::string final_text;
  std::map<std::string, std::string> stage_outputs;  // transform/summary/reasoning
  std::vector<TranscriptEntry> transcript;
};

// Sections joined with blank-line separators; empty sections are skipped.
std::string sections_prompt_text(const ModalityTexts& sections);

// Phase one of summarization: run the summarization prompt without exemplar
// on the first n training records in ascending id order. Throws NAtLeastOne
// when n < 1.
std::vector<Exemplar> collect_exemplars(
    const std::vector<MultimodalRecord>& train_records,
    const TabularSchema& schema, const Captioner& captioner,
    const PipelineConfig& config, LlmClient& client, int n);

// Phase two: exemplar (when present) goes in as a one-shot user/assistant
// message pair ahead of the user message holding only the sections. Throws
// EmptyInput when all sections are empty.
std::string summarize(const ModalityTexts& sections,
                      const std::optional<Exemplar>& exemplar,
                      const PipelineConfig& config, LlmClient& client,
                      std::vector<TranscriptEntry>* transcript = nullptr);

// Step-by-step prediction-and-explanation prompt over the sections. The
// returned text is augmentation input for the downstream model, never the
// final prediction.
std::string reason(const ModalityTexts& sections, const PipelineConfig& config,
                   LlmClient& client,
                   std::vector<TranscriptEntry>* transcript = nullptr);

// final_text = "\n\n"-joined [transform?][summary?][reasoning?] per config
// flags; stage_outputs holds each produced segment; the transcript records
// every completion exchange.
AlignedText run_pipeline(const MultimodalRecord& record,
                         const TabularSchema& schema,
                         const Captioner& captioner,
                         const PipelineConfig& config, LlmClient& client);

}  // namespace textalign
