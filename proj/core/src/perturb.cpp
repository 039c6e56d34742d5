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

#include "textalign/perturb.hpp"

#include <algorithm>
#include <cmath>

#include "textalign/error.hpp"
#include "textalign/rng.hpp"
#include "textalign/strings.hpp"

namespace textalign {

std::string_view modality_name(Modality modality) {
  switch (modality) {
    case Modality::image: return "image";
    case Modality::text: return "text";
    case Modality::table: return "table";
  }
  return "text";
}

Modality parse_modality(std::string_view name) {
  if (name == "image") return Modality::image;
  if (name == "text") return Modality::text;
  if (name == "table") return Modality::table;
  throw Error(Errc::bad_config, "unknown modality: " + std::string(name));
}

LevelGrid make_level_grid(Modality modality, std::vector<double> levels) {
  if (levels.empty() || levels.front() != 0.0) {
    throw Error(Errc::bad_config,
                "level grid must start with the clean baseline 0");
  }
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] < 0.0 || levels[i] > 1.0) {
      throw Error(Errc::bad_config, "levels must lie in [0, 1]");
    }
    if (i > 0 && levels[i] <= levels[i - 1]) {
      throw Error(Errc::bad_config, "levels must be strictly ascending");
    }
  }
  return LevelGrid{modality, std::move(levels)};
}

std::string drop_words_tagged(std::string_view text, double p,
                              std::uint64_t base_seed,
                              std::string_view record_id,
                              std::string_view tag) {
  if (p <= 0.0) {
    // Level 0 is the identity on the original string, not a re-join.
    return std::string(text);
  }
  const std::vector<std::string> tokens = split_whitespace(text);
  CounterRng rng = derive_stream(base_seed, record_id, tag);
  std::vector<std::string> kept;
  kept.reserve(tokens.size());
  for (const auto& token : tokens) {
    if (rng.next_double() >= p) kept.push_back(token);
  }
  return join(kept, " ");
}

std::string drop_words(std::string_view text, double p,
                       std::uint64_t base_seed, std::string_view record_id) {
  return drop_words_tagged(text, p, base_seed, record_id, "text");
}

TabularRow drop_columns(const TabularRow& row, double p,
                        std::uint64_t base_seed, std::string_view record_id,
                        const std::set<std::string>& protected_columns) {
  if (p <= 0.0) return row;
  CounterRng rng = derive_stream(base_seed, record_id, "table");
  TabularRow kept;
  kept.reserve(row.size());
  for (const auto& entry : row) {
    if (protected_columns.count(entry.first) > 0) {
      kept.push_back(entry);
      continue;
    }
    if (rng.next_double() >= p) kept.push_back(entry);
  }
  return kept;
}

Image add_gaussian_noise(const Image& image, double level,
                         std::uint64_t base_seed, std::string_view record_id) {
  Image out = image;
  if (level <= 0.0) return out;
  const double sigma = level * 255.0;
  CounterRng rng = derive_stream(base_seed, record_id, "image");
  for (auto& value : out.pixels) {
    const double noisy = static_cast<double>(value) +
                         sigma * rng.next_gaussian();
    value = static_cast<std::uint8_t>(
        std::clamp(std::lround(noisy), 0L, 255L));
  }
  return out;
}

MultimodalRecord apply_spec(const MultimodalRecord& record,
                            const std::vector<PerturbationSpec>& specs) {
  bool seen[3] = {false, false, false};
  for (const auto& spec : specs) {
    auto& flag = seen[static_cast<int>(spec.modality)];
    if (flag) {
      throw Error(Errc::duplicate_modality_spec,
                  std::string(modality_name(spec.modality)));
    }
    flag = true;
  }
  MultimodalRecord out = record;
  for (const auto& spec : specs) {
    switch (spec.modality) {
      case Modality::text:
        out.text = drop_words(out.text, spec.level, spec.base_seed, out.id);
        break;
      case Modality::table:
        out.tabular =
            drop_columns(out.tabular, spec.level, spec.base_seed, out.id);
        break;
      case Modality::image:
        if (out.image) {
          out.image =
              add_gaussian_noise(*out.image, spec.level, spec.base_seed,
                                 out.id);
        }
        if (out.caption) {
          out.caption = drop_words_tagged(*out.caption, spec.level,
                                          spec.base_seed, out.id,
                                          "image.caption");
        }
        break;
    }
  }
  return out;
}

}  // namespace textalign
