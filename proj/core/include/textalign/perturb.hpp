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
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "textalign/dataset.hpp"
#include "textalign/image.hpp"

namespace textalign {

// Seeded, deterministic imperfection operators. Every operator derives its
// random stream solely from (base_seed, record id, modality tag): repeated
// invocation with identical arguments is bit-identical regardless of thread
// schedule or call order, and level 0 is always an exact identity.

enum class Modality { image, text, table };

std::string_view modality_name(Modality modality);
Modality parse_modality(std::string_view name);

struct PerturbationSpec {
  Modality modality = Modality::text;
  double level = 0.0;  // p in [0, 1]; 0 means no perturbation
  std::uint64_t base_seed = 0;
};

// Ascending levels in [0, 1] starting with the clean baseline 0.
struct LevelGrid {
  Modality modality = Modality::text;
  std::vector<double> levels;

  bool operator==(const LevelGrid&) const = default;
};

// Throws BadConfig unless levels = {0, ...} strictly ascending within [0,1].
LevelGrid make_level_grid(Modality modality, std::vector<double> levels);

// Each whitespace-delimited token is removed independently with probability
// p; survivors are rejoined with single spaces.
std::string drop_words(std::string_view text, double p,
                       std::uint64_t base_seed, std::string_view record_id);

// Same dropout mechanism under an explicit modality tag. Used by the
// surrogate image channel so that joint sweeps draw independent streams for
// raw text and captions.
std::string drop_words_tagged(std::string_view text, double p,
                              std::uint64_t base_seed,
                              std::string_view record_id,
                              std::string_view tag);

// Each non-protected column is removed independently with probability p;
// survivor order is preserved.
using TabularRow = std::vector<std::pair<std::string, std::optional<std::string>>>;
TabularRow drop_columns(const TabularRow& row, double p,
                        std::uint64_t base_seed, std::string_view record_id,
                        const std::set<std::string>& protected_columns = {});

// v -> clamp(round(v + e), 0, 255) with e ~ Normal(0, (level*255)^2), drawn
// independently per channel value. Level 0 returns a bit-identical copy.
Image add_gaussian_noise(const Image& image, double level,
                         std::uint64_t base_seed, std::string_view record_id);

// Applies at most one spec per modality to a copy of the record. The image
// spec noises decoded pixels when present and degrades the precomputed
// caption when present (the surrogate image channel used whenever no vision
// provider can re-caption noisy pixels); the two draws use distinct
// image-tagged streams. Id and label are never touched. Throws
// DuplicateModalitySpec.
MultimodalRecord apply_spec(const MultimodalRecord& record,
                            const std::vector<PerturbationSpec>& specs);

}  // namespace textalign
