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

#include "textalign/textify.hpp"

#include "textalign/error.hpp"
#include "textalign/strings.hpp"

namespace textalign {

Captioner make_disabled_captioner() { return Captioner{}; }

Captioner make_precomputed_captioner(
    const std::vector<MultimodalRecord>& records) {
  Captioner captioner;
  captioner.kind = Captioner::Kind::precomputed;
  std::string missing;
  for (const auto& record : records) {
    if (record.caption) {
      captioner.captions.emplace(record.id, *record.caption);
    } else {
      if (!missing.empty()) missing += ", ";
      missing += record.id;
    }
  }
  if (!missing.empty()) {
    throw Error(Errc::caption_unavailable,
                "precomputed captioner is not total; missing ids: " + missing);
  }
  return captioner;
}

std::string serialize_tabular(const TabularRow& row,
                              const TabularSchema& schema) {
  std::vector<std::string> sentences;
  sentences.reserve(row.size());
  for (const auto& [name, value] : row) {
    const Column* column = schema.find_column(name);
    if (column == nullptr) {
      throw Error(Errc::unknown_column, name);
    }
    sentences.push_back("The " + column->description + " is " +
                        (value ? *value : std::string("Unknown")) + ".");
  }
  return join(sentences, " ");
}

std::string caption_image(const std::optional<Image>& image,
                          const std::string& record_id,
                          const Captioner& captioner,
                          std::vector<TranscriptEntry>* transcript) {
  (void)image;  // the offline paths caption by id; providers get the token
  switch (captioner.kind) {
    case Captioner::Kind::disabled:
      return "";
    case Captioner::Kind::precomputed: {
      const auto it = captioner.captions.find(record_id);
      if (it == captioner.captions.end()) {
        throw Error(Errc::caption_unavailable, record_id);
      }
      return it->second;
    }
    case Captioner::Kind::provider: {
      if (captioner.client == nullptr) {
        throw Error(Errc::provider_error,
                    "provider captioner has no llm client");
      }
      CompletionRequest request;
      request.provider_id = captioner.provider_id;
      request.model = captioner.model;
      request.temperature = captioner.temperature;
      request.max_tokens = captioner.max_tokens;
      request.messages.push_back({Role::system, captioner.system_template});
      std::string user = captioner.user_template;
      // The {IMAGE} slot carries the record's image token. Live vision
      // deployments substitute a real payload at the same slot.
      replace_all(user, "{IMAGE}", "[image:" + record_id + "]");
      request.messages.push_back({Role::user, user});
      const CompletionResponse response =
          captioner.cache_dir.empty()
              ? captioner.client->complete(request)
              : captioner.client->cached_complete(request,
                                                  captioner.cache_dir);
      if (transcript) {
        transcript->push_back(
            {"caption", request_digest(request), response.content});
      }
      return response.content;
    }
  }
  return "";
}

std::string degrade_caption_offline(std::string_view caption, double level,
                                    std::uint64_t base_seed,
                                    std::string_view record_id) {
  return drop_words_tagged(caption, level, base_seed, record_id,
                           "image.caption");
}

ModalityTexts assemble_sections(const MultimodalRecord& record,
                                const TabularSchema& schema,
                                const Captioner& captioner,
                                std::vector<TranscriptEntry>* transcript) {
  ModalityTexts sections;
  sections.record_id = record.id;
  sections.table_text = serialize_tabular(record.tabular, schema);
  sections.raw_text = record.text;
  switch (captioner.kind) {
    case Captioner::Kind::disabled:
      sections.image_text = "";
      break;
    case Captioner::Kind::precomputed:
      // The record's own caption is preferred: perturbation bakes the
      // surrogate degradation into it.
      if (record.caption) {
        sections.image_text = *record.caption;
      } else {
        sections.image_text =
            caption_image(record.image, record.id, captioner, transcript);
      }
      break;
    case Captioner::Kind::provider:
      sections.image_text =
          caption_image(record.image, record.id, captioner, transcript);
      break;
  }
  return sections;
}

}  // namespace textalign
