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
#include <string>
#include <string_view>
#include <vector>

namespace textalign {

// Unicode whitespace per the Unicode White_Space property.
bool is_unicode_space(char32_t cp);

// Decodes one UTF-8 code point starting at `pos`; advances `pos` past it.
// Invalid bytes decode as U+FFFD and advance by one.
char32_t decode_utf8(std::string_view s, std::size_t& pos);

// Splits on runs of Unicode whitespace. Punctuation stays attached.
std::vector<std::string> split_whitespace(std::string_view text);

// Word tokens for featurization: maximal runs of ASCII alphanumerics or
// non-ASCII non-space code points. Lowercasing is ASCII-only.
std::vector<std::string> word_tokens(std::string_view text, bool lowercase);

std::string join(const std::vector<std::string>& parts,
                 std::string_view separator);

// Sections separated by one or more blank lines. Each section is trimmed.
std::vector<std::string> split_blank_line_sections(std::string_view text);

// Up to and including the first '.', leading whitespace trimmed; the whole
// trimmed input when there is no '.'.
std::string first_sentence(std::string_view text);

std::string trim(std::string_view s);

bool replace_all(std::string& text, std::string_view placeholder,
                 std::string_view value);

std::string to_hex(const unsigned char* data, std::size_t size);

}  // namespace textalign
