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
#include <string_view>
#include <vector>

#include "textalign/dataset.hpp"
#include "textalign/llm.hpp"
#include "textalign/perturb.hpp"

namespace textalign {

// Text transformation: each modality becomes a text section. An empty
// string encodes an absent modality.
struct ModalityTexts {
  std::string table_text;
  std::string image_text;
  std::string raw_text;
  std::string record_id;

  bool operator==(const ModalityTexts&) const = default;
};

struct TranscriptEntry {
  std::string stage;     // caption | summarize | reason
  std::string digest;    // request digest
  std::string response;  // completion content
};

// Caption source. Precomputed lookups must cover every dataset id (checked
// at construction); the provider kind issues one cached vision completion
// per image through the llm client.
struct Captioner {
  enum class Kind { disabled, precomputed, provider };

  Kind kind = Kind::disabled;
  std::map<std::string, std::string> captions;  // precomputed

  // provider kind
  std::string provider_id;
  std::string model;
  std::string system_template;  // carries the CAPTION tag
  std::string user_template;    // carries the {IMAGE} placeholder
  double temperature = 0.0;
  int max_tokens = 256;
  LlmClient* client = nullptr;
  std::filesystem::path cache_dir;  // empty -> uncached
};

Captioner make_disabled_captioner();

// Builds the caption map from the records' joined captions and verifies it
// is total over the given ids. Throws CaptionUnavailable listing gaps.
Captioner make_precomputed_captioner(
    const std::vector<MultimodalRecord>& records);

// One sentence per present column in schema order, exactly
// "The {description} is {value}." joined by single spaces; absent values
// render as "Unknown". Throws UnknownColumn for keys outside the schema.
std::string serialize_tabular(const TabularRow& row,
                              const TabularSchema& schema);

// Precomputed: map lookup (CaptionUnavailable on a miss). Provider: one
// completion whose user prompt embeds the record's image token. The
// transcript pointer, when given, receives the exchange.
std::string caption_image(const std::optional<Image>& image,
                          const std::string& record_id,
                          const Captioner& captioner,
                          std::vector<TranscriptEntry>* transcript = nullptr);

// Offline surrogate for captioning a noisy image: word dropout at the image
// level on the clean caption. Runs marked with this path carry the
// surrogate-image flag in reports.
std::string degrade_caption_offline(std::string_view caption, double level,
                                    std::uint64_t base_seed,
                                    std::string_view record_id);

// table_text from serialize_tabular, image_text from the caption channel
// (record caption preferred, then captioner), raw_text passed through
// byte-identical.
ModalityTexts assemble_sections(const MultimodalRecord& record,
                                const TabularSchema& schema,
                                const Captioner& captioner,
                                std::vector<TranscriptEntry>* transcript =
                                    nullptr);

}  // namespace textalign
