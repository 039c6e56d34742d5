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

#include "textalign/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "textalign/csv.hpp"
#include "textalign/error.hpp"
#include "textalign/rng.hpp"

namespace textalign {

using nlohmann::json;

namespace {

ColumnKind parse_kind(const std::string& kind) {
  if (kind == "categorical") return ColumnKind::categorical;
  if (kind == "numeric") return ColumnKind::numeric;
  if (kind == "text") return ColumnKind::text;
  throw Error(Errc::bad_schema, "unknown column kind: " + kind);
}

std::string kind_name(ColumnKind kind) {
  switch (kind) {
    case ColumnKind::categorical: return "categorical";
    case ColumnKind::numeric: return "numeric";
    case ColumnKind::text: return "text";
  }
  return "categorical";
}

void check_schema(const TabularSchema& schema) {
  if (schema.label_cardinality < 1) {
    throw Error(Errc::bad_schema, "label_cardinality must be positive");
  }
  if (schema.id_column.empty() || schema.label_column.empty()) {
    throw Error(Errc::bad_schema, "id_column and label_column are required");
  }
  if (schema.id_column == schema.label_column) {
    throw Error(Errc::bad_schema, "id_column and label_column must differ");
  }
  std::set<std::string> names;
  for (const auto& column : schema.columns) {
    if (column.name.empty()) {
      throw Error(Errc::bad_schema, "empty column name");
    }
    if (column.description.empty()) {
      throw Error(Errc::bad_schema,
                  "column " + column.name + " has an empty description");
    }
    if (!names.insert(column.name).second) {
      throw Error(Errc::bad_schema, "duplicate column name: " + column.name);
    }
    if (column.name == schema.id_column || column.name == schema.label_column ||
        column.name == schema.text_column) {
      throw Error(Errc::bad_schema,
                  "column " + column.name +
                      " collides with the id/label/text column");
    }
  }
}

}  // namespace

const Column* TabularSchema::find_column(std::string_view name) const {
  for (const auto& column : columns) {
    if (column.name == name) return &column;
  }
  return nullptr;
}

const std::optional<std::string>* MultimodalRecord::find_tabular(
    std::string_view name) const {
  for (const auto& [key, value] : tabular) {
    if (key == name) return &value;
  }
  return nullptr;
}

std::string_view violation_name(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::unknown_column: return "UnknownColumn";
    case ViolationKind::out_of_order_column: return "OutOfOrderColumn";
    case ViolationKind::missing_image_modality: return "MissingImageModality";
    case ViolationKind::label_out_of_range: return "LabelOutOfRange";
    case ViolationKind::empty_id: return "EmptyId";
  }
  return "UnknownViolation";
}

TabularSchema schema_from_json_text(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(Errc::bad_schema, std::string("invalid schema JSON: ") +
                                      e.what());
  }
  TabularSchema schema;
  try {
    schema.id_column = j.at("id_column").get<std::string>();
    schema.label_column = j.at("label_column").get<std::string>();
    schema.text_column = j.value("text_column", std::string());
    schema.label_cardinality = j.at("label_cardinality").get<int>();
    for (const auto& c : j.at("columns")) {
      Column column;
      column.name = c.at("name").get<std::string>();
      column.description = c.at("description").get<std::string>();
      column.kind = parse_kind(c.value("kind", "categorical"));
      schema.columns.push_back(std::move(column));
    }
  } catch (const json::exception& e) {
    throw Error(Errc::bad_schema, std::string("schema field error: ") +
                                      e.what());
  }
  check_schema(schema);
  return schema;
}

TabularSchema load_schema(const std::filesystem::path& path) {
  return schema_from_json_text(read_text_file(path));
}

std::string schema_to_json_text(const TabularSchema& schema) {
  json columns = json::array();
  for (const auto& column : schema.columns) {
    columns.push_back({{"name", column.name},
                       {"description", column.description},
                       {"kind", kind_name(column.kind)}});
  }
  json j = {{"id_column", schema.id_column},
            {"label_column", schema.label_column},
            {"text_column", schema.text_column},
            {"label_cardinality", schema.label_cardinality},
            {"columns", columns}};
  return j.dump(2) + "\n";
}

std::map<std::string, std::string> load_captions(
    const std::filesystem::path& path) {
  std::map<std::string, std::string> captions;
  const std::string content = read_text_file(path);
  std::istringstream lines(content);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      captions[j.at("id").get<std::string>()] =
          j.at("caption").get<std::string>();
    } catch (const json::exception& e) {
      throw Error(Errc::malformed_row,
                  "captions line " + std::to_string(line_no) + ": " +
                      e.what());
    }
  }
  return captions;
}

std::vector<MultimodalRecord> load_dataset(
    const std::filesystem::path& csv_path, const TabularSchema& schema,
    const std::optional<std::filesystem::path>& captions_path,
    const std::optional<std::filesystem::path>& images_dir) {
  const std::vector<CsvRow> rows = parse_csv(read_text_file(csv_path));
  if (rows.empty()) {
    throw Error(Errc::malformed_row, "empty CSV: " + csv_path.string());
  }

  const CsvRow& header = rows.front();
  std::unordered_map<std::string, std::size_t> column_index;
  for (std::size_t i = 0; i < header.fields.size(); ++i) {
    column_index.emplace(header.fields[i], i);
  }
  auto require = [&](const std::string& name) {
    const auto it = column_index.find(name);
    if (it == column_index.end()) {
      throw Error(Errc::missing_column, name);
    }
    return it->second;
  };
  const std::size_t id_idx = require(schema.id_column);
  const std::size_t label_idx = require(schema.label_column);
  std::optional<std::size_t> text_idx;
  if (!schema.text_column.empty()) text_idx = require(schema.text_column);
  std::vector<std::size_t> feature_idx;
  feature_idx.reserve(schema.columns.size());
  for (const auto& column : schema.columns) {
    feature_idx.push_back(require(column.name));
  }

  std::map<std::string, std::string> captions;
  if (captions_path) captions = load_captions(*captions_path);

  std::vector<MultimodalRecord> records;
  std::unordered_set<std::string> seen_ids;
  records.reserve(rows.size() - 1);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const CsvRow& row = rows[r];
    if (row.fields.size() != header.fields.size()) {
      throw Error(Errc::malformed_row,
                  "line " + std::to_string(row.line) + ": expected " +
                      std::to_string(header.fields.size()) + " fields, got " +
                      std::to_string(row.fields.size()));
    }
    MultimodalRecord record;
    record.id = row.fields[id_idx];
    if (!seen_ids.insert(record.id).second) {
      throw Error(Errc::duplicate_id, record.id);
    }
    const std::string& label_text = row.fields[label_idx];
    try {
      std::size_t used = 0;
      record.label = std::stoi(label_text, &used);
      if (used != label_text.size()) throw std::invalid_argument(label_text);
    } catch (const std::exception&) {
      throw Error(Errc::malformed_row,
                  "line " + std::to_string(row.line) +
                      ": label is not an integer: '" + label_text + "'");
    }
    if (record.label < 0 || record.label >= schema.label_cardinality) {
      throw Error(Errc::label_out_of_range, record.id);
    }
    if (text_idx) record.text = row.fields[*text_idx];
    for (std::size_t c = 0; c < schema.columns.size(); ++c) {
      const std::string& cell = row.fields[feature_idx[c]];
      record.tabular.emplace_back(
          schema.columns[c].name,
          cell.empty() ? std::nullopt : std::optional<std::string>(cell));
    }
    if (const auto it = captions.find(record.id); it != captions.end()) {
      record.caption = it->second;
    }
    if (images_dir) {
      for (const char* ext : {".png", ".jpg", ".jpeg"}) {
        const auto candidate = *images_dir / (record.id + ext);
        if (std::filesystem::exists(candidate)) {
          record.image_path = candidate.string();
          record.image = load_image(candidate);
          break;
        }
      }
    }
    records.push_back(std::move(record));
  }
  return records;
}

DatasetSplit split_dataset(const std::vector<MultimodalRecord>& records,
                           double train_fraction, std::uint64_t seed) {
  if (records.size() < 2) {
    throw Error(Errc::too_few_records,
                "need at least 2 records, got " +
                    std::to_string(records.size()));
  }
  const std::size_t n = records.size();
  auto train_count = static_cast<std::size_t>(
      std::llround(train_fraction * static_cast<double>(n)));
  train_count = std::clamp<std::size_t>(train_count, 1, n - 1);

  // Fisher-Yates over indices; membership = shuffled prefix. Both sides keep
  // the input order so downstream behavior never depends on shuffle order.
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  CounterRng rng = derive_stream(seed, "", "dataset.split");
  for (std::size_t j = n - 1; j > 0; --j) {
    const std::size_t k = static_cast<std::size_t>(rng.next_below(j + 1));
    std::swap(order[j], order[k]);
  }
  std::vector<bool> in_train(n, false);
  for (std::size_t i = 0; i < train_count; ++i) in_train[order[i]] = true;

  DatasetSplit split;
  split.seed = seed;
  for (std::size_t i = 0; i < n; ++i) {
    (in_train[i] ? split.train : split.test).push_back(records[i]);
  }
  return split;
}

std::vector<Violation> validate_record(const MultimodalRecord& record,
                                       const TabularSchema& schema,
                                       bool image_modality_enabled) {
  std::vector<Violation> violations;
  if (record.id.empty()) {
    violations.push_back({ViolationKind::empty_id, "record id is empty"});
  }
  if (record.label < 0 || record.label >= schema.label_cardinality) {
    violations.push_back(
        {ViolationKind::label_out_of_range,
         "label " + std::to_string(record.label) + " outside [0, " +
             std::to_string(schema.label_cardinality) + ")"});
  }
  // Keys must be a subset of the schema's feature columns, in schema order.
  std::size_t schema_pos = 0;
  for (const auto& [name, value] : record.tabular) {
    (void)value;
    if (schema.find_column(name) == nullptr) {
      violations.push_back({ViolationKind::unknown_column, name});
      continue;
    }
    std::size_t found = schema.columns.size();
    for (std::size_t i = schema_pos; i < schema.columns.size(); ++i) {
      if (schema.columns[i].name == name) {
        found = i;
        break;
      }
    }
    if (found == schema.columns.size()) {
      violations.push_back({ViolationKind::out_of_order_column, name});
    } else {
      schema_pos = found + 1;
    }
  }
  if (image_modality_enabled && !record.image && !record.caption) {
    violations.push_back({ViolationKind::missing_image_modality,
                          "record " + record.id +
                              " has neither image nor caption"});
  }
  return violations;
}

std::string records_to_json_text(
    const std::vector<MultimodalRecord>& records) {
  json out = json::array();
  for (const auto& record : records) {
    json tabular = json::array();
    for (const auto& [name, value] : record.tabular) {
      tabular.push_back(
          {{"column", name}, {"value", value ? json(*value) : json()}});
    }
    out.push_back(
        {{"id", record.id},
         {"tabular", tabular},
         {"text", record.text},
         {"image_path", record.image_path ? json(*record.image_path) : json()},
         {"caption", record.caption ? json(*record.caption) : json()},
         {"label", record.label}});
  }
  return out.dump(2) + "\n";
}

std::vector<MultimodalRecord> records_from_json_text(
    std::string_view text,
    const std::optional<std::filesystem::path>& images_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(Errc::malformed_row, std::string("records JSON: ") + e.what());
  }
  std::vector<MultimodalRecord> records;
  for (const auto& item : j) {
    MultimodalRecord record;
    record.id = item.at("id").get<std::string>();
    for (const auto& cell : item.at("tabular")) {
      const auto& value = cell.at("value");
      record.tabular.emplace_back(
          cell.at("column").get<std::string>(),
          value.is_null() ? std::nullopt
                          : std::optional<std::string>(
                                value.get<std::string>()));
    }
    record.text = item.at("text").get<std::string>();
    if (!item.at("image_path").is_null()) {
      record.image_path = item.at("image_path").get<std::string>();
    }
    if (!item.at("caption").is_null()) {
      record.caption = item.at("caption").get<std::string>();
    }
    record.label = item.at("label").get<int>();
    if (images_dir) {
      for (const char* ext : {".png", ".jpg", ".jpeg"}) {
        const auto candidate = *images_dir / (record.id + ext);
        if (std::filesystem::exists(candidate)) {
          record.image = load_image(candidate);
          break;
        }
      }
    }
    records.push_back(std::move(record));
  }
  return records;
}

}  // namespace textalign
