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
#include <utility>
#include <vector>

#include "textalign/fsio.hpp"
#include "textalign/image.hpp"

namespace textalign {

enum class ColumnKind { categorical, numeric, text };

struct Column {
  std::string name;
  std::string description;  // interpolated into serialization sentences
  ColumnKind kind = ColumnKind::categorical;

  bool operator==(const Column&) const = default;
};

// Structure of the tabular modality. Feature columns exclude the id, label,
// and free-text columns.
struct TabularSchema {
  std::vector<Column> columns;
  std::string id_column;
  std::string label_column;
  std::string text_column;
  int label_cardinality = 0;  // K

  const Column* find_column(std::string_view name) const;
};

// Loads the schema JSON ({"id_column", "label_column", "text_column",
// "label_cardinality", "columns":[{"name","description","kind"}...]}) and
// checks its invariants: unique names, non-empty descriptions, id/label/text
// distinct from feature columns, K >= 1. Throws BadSchema.
TabularSchema load_schema(const std::filesystem::path& path);
TabularSchema schema_from_json_text(std::string_view text);
std::string schema_to_json_text(const TabularSchema& schema);

// One dataset row. Tabular cells are kept in schema order; a missing cell is
// a present key with an absent value, while a dropped column has no key at
// all. Records are immutable after load and safe to share across threads.
struct MultimodalRecord {
  std::string id;
  std::vector<std::pair<std::string, std::optional<std::string>>> tabular;
  std::string text;
  std::optional<std::string> image_path;
  std::optional<Image> image;  // decoded pixels when an image file exists
  std::optional<std::string> caption;
  int label = 0;

  bool operator==(const MultimodalRecord&) const = default;

  const std::optional<std::string>* find_tabular(std::string_view name) const;
};

struct DatasetSplit {
  std::vector<MultimodalRecord> train;
  std::vector<MultimodalRecord> test;
  std::uint64_t seed = 0;
};

enum class ViolationKind {
  unknown_column,
  out_of_order_column,
  missing_image_modality,
  label_out_of_range,
  empty_id,
};

struct Violation {
  ViolationKind kind;
  std::string detail;
};

std::string_view violation_name(ViolationKind kind);

// Reads the UTF-8 CSV (header row must contain the id, label, text, and all
// schema feature columns; extra columns are ignored), joins captions by id
// when captions_path is given, and decodes <id>.png / <id>.jpg from
// images_dir when given. Missing cells become absent values. Throws
// MissingColumn, DuplicateId, LabelOutOfRange, MalformedRow.
std::vector<MultimodalRecord> load_dataset(
    const std::filesystem::path& csv_path, const TabularSchema& schema,
    const std::optional<std::filesystem::path>& captions_path = std::nullopt,
    const std::optional<std::filesystem::path>& images_dir = std::nullopt);

// JSON-lines: one {"id": ..., "caption": ...} object per line.
std::map<std::string, std::string> load_captions(
    const std::filesystem::path& path);

// Deterministic partition: |train| = round(train_fraction * n), membership
// chosen by a seeded shuffle, both sides kept in input order. Throws
// TooFewRecords when n < 2.
DatasetSplit split_dataset(const std::vector<MultimodalRecord>& records,
                           double train_fraction, std::uint64_t seed);

// Empty result iff the record satisfies every invariant against the schema.
std::vector<Violation> validate_record(const MultimodalRecord& record,
                                       const TabularSchema& schema,
                                       bool image_modality_enabled = true);

// Fixture JSON form. Pixels are not serialized; records_from_json reloads
// them from images_dir when provided, making the round trip an identity.
std::string records_to_json_text(const std::vector<MultimodalRecord>& records);
std::vector<MultimodalRecord> records_from_json_text(
    std::string_view text,
    const std::optional<std::filesystem::path>& images_dir = std::nullopt);

}  // namespace textalign
