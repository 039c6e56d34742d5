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

#include "textalign/csv.hpp"

#include "textalign/error.hpp"

namespace textalign {

std::vector<CsvRow> parse_csv(std::string_view content) {
  std::vector<CsvRow> rows;
  CsvRow row;
  std::string field;
  std::size_t line = 1;
  row.line = 1;
  bool quoted = false;
  bool row_has_data = false;

  std::size_t i = 0;
  while (i < content.size()) {
    const char c = content[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < content.size() && content[i + 1] == '"') {
          field.push_back('"');
          i += 2;
        } else {
          quoted = false;
          ++i;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
        ++i;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty()) {
          throw Error(Errc::malformed_row,
                      "stray quote at line " + std::to_string(line));
        }
        quoted = true;
        ++i;
        row_has_data = true;
        break;
      case ',':
        row.fields.push_back(std::move(field));
        field.clear();
        row_has_data = true;
        ++i;
        break;
      case '\r':
        ++i;
        break;
      case '\n':
        ++line;
        ++i;
        if (row_has_data || !field.empty() || !row.fields.empty()) {
          row.fields.push_back(std::move(field));
          field.clear();
          rows.push_back(std::move(row));
          row = CsvRow{};
          row.line = line;
          row_has_data = false;
        } else {
          row.line = line;
        }
        break;
      default:
        field.push_back(c);
        row_has_data = true;
        ++i;
        break;
    }
  }
  if (quoted) {
    throw Error(Errc::malformed_row,
                "unterminated quote in row starting at line " +
                    std::to_string(row.line));
  }
  if (row_has_data || !field.empty() || !row.fields.empty()) {
    row.fields.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string csv_escape(std::string_view field) {
  const bool needs_quotes =
      field.find_first_of(",\"\n\r") != std::string_view::npos;
  if (!needs_quotes) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace textalign
