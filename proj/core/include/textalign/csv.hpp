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

#include <string>
#include <string_view>
#include <vector>

namespace textalign {

struct CsvRow {
  std::vector<std::string> fields;
  std::size_t line = 0;  // physical line number the row starts on (1-based)
};

// RFC 4180 style: comma-separated, double quotes, quoted fields may contain
// commas, newlines, and doubled quotes. Throws MalformedRow on unbalanced
// quotes or stray quote characters.
std::vector<CsvRow> parse_csv(std::string_view content);

std::string csv_escape(std::string_view field);

}  // namespace textalign
