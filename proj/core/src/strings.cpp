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

#include "textalign/strings.hpp"

#include <cctype>

namespace textalign {

bool is_unicode_space(char32_t cp) {
  switch (cp) {
    case 0x0009:
    case 0x000A:
    case 0x000B:
    case 0x000C:
    case 0x000D:
    case 0x0020:
    case 0x0085:
    case 0x00A0:
    case 0x1680:
    case 0x2028:
    case 0x2029:
    case 0x202F:
    case 0x205F:
    case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

char32_t decode_utf8(std::string_view s, std::size_t& pos) {
  const auto byte = [&](std::size_t i) {
    return static_cast<unsigned char>(s[i]);
  };
  const unsigned char b0 = byte(pos);
  if (b0 < 0x80) {
    ++pos;
    return b0;
  }
  auto cont = [&](std::size_t i) {
    return i < s.size() && (byte(i) & 0xC0) == 0x80;
  };
  if ((b0 & 0xE0) == 0xC0 && cont(pos + 1)) {
    char32_t cp = (char32_t(b0 & 0x1F) << 6) | (byte(pos + 1) & 0x3F);
    pos += 2;
    return cp;
  }
  if ((b0 & 0xF0) == 0xE0 && cont(pos + 1) && cont(pos + 2)) {
    char32_t cp = (char32_t(b0 & 0x0F) << 12) |
                  (char32_t(byte(pos + 1) & 0x3F) << 6) |
                  (byte(pos + 2) & 0x3F);
    pos += 3;
    return cp;
  }
  if ((b0 & 0xF8) == 0xF0 && cont(pos + 1) && cont(pos + 2) && cont(pos + 3)) {
    char32_t cp = (char32_t(b0 & 0x07) << 18) |
                  (char32_t(byte(pos + 1) & 0x3F) << 12) |
                  (char32_t(byte(pos + 2) & 0x3F) << 6) |
                  (byte(pos + 3) & 0x3F);
    pos += 4;
    return cp;
  }
  ++pos;
  return 0xFFFD;
}

std::vector<std::string> split_whitespace(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t pos = 0;
  std::size_t token_start = 0;
  bool in_token = false;
  while (pos < text.size()) {
    const std::size_t cp_start = pos;
    const char32_t cp = decode_utf8(text, pos);
    if (is_unicode_space(cp)) {
      if (in_token) {
        tokens.emplace_back(text.substr(token_start, cp_start - token_start));
        in_token = false;
      }
    } else if (!in_token) {
      token_start = cp_start;
      in_token = true;
    }
  }
  if (in_token) tokens.emplace_back(text.substr(token_start));
  return tokens;
}

std::vector<std::string> word_tokens(std::string_view text, bool lowercase) {
  std::vector<std::string> tokens;
  std::string current;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t cp_start = pos;
    const char32_t cp = decode_utf8(text, pos);
    const bool is_word_char =
        (cp < 0x80 && std::isalnum(static_cast<unsigned char>(cp))) ||
        (cp >= 0x80 && !is_unicode_space(cp));
    if (is_word_char) {
      if (cp < 0x80 && lowercase) {
        current.push_back(static_cast<char>(
            std::tolower(static_cast<unsigned char>(cp))));
      } else {
        current.append(text.substr(cp_start, pos - cp_start));
      }
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::string join(const std::vector<std::string>& parts,
                 std::string_view separator) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out.append(separator);
    out.append(parts[i]);
  }
  return out;
}

std::string trim(std::string_view s) {
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end &&
         std::isspace(static_cast<unsigned char>(s[begin]))) {
    ++begin;
  }
  while (end > begin &&
         std::isspace(static_cast<unsigned char>(s[end - 1]))) {
    --end;
  }
  return std::string(s.substr(begin, end - begin));
}

std::vector<std::string> split_blank_line_sections(std::string_view text) {
  std::vector<std::string> sections;
  std::string current;
  std::size_t i = 0;
  auto line_end = [&](std::size_t from) {
    const auto nl = text.find('\n', from);
    return nl == std::string_view::npos ? text.size() : nl;
  };
  bool blank_run = false;
  while (i <= text.size()) {
    if (i == text.size()) break;
    const std::size_t end = line_end(i);
    const std::string_view line = text.substr(i, end - i);
    if (trim(line).empty()) {
      blank_run = true;
    } else {
      if (blank_run && !current.empty()) {
        sections.push_back(trim(current));
        current.clear();
      }
      blank_run = false;
      if (!current.empty()) current.push_back('\n');
      current.append(line);
    }
    i = end + 1;
  }
  if (!trim(current).empty()) sections.push_back(trim(current));
  return sections;
}

std::string first_sentence(std::string_view text) {
  const std::string trimmed = trim(text);
  const auto dot = trimmed.find('.');
  if (dot == std::string::npos) return trimmed;
  return trimmed.substr(0, dot + 1);
}

bool replace_all(std::string& text, std::string_view placeholder,
                 std::string_view value) {
  bool replaced = false;
  std::size_t pos = 0;
  while ((pos = text.find(placeholder, pos)) != std::string::npos) {
    text.replace(pos, placeholder.size(), value);
    pos += value.size();
    replaced = true;
  }
  return replaced;
}

std::string to_hex(const unsigned char* data, std::size_t size) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(size * 2);
  for (std::size_t i = 0; i < size; ++i) {
    out.push_back(digits[data[i] >> 4]);
    out.push_back(digits[data[i] & 0x0F]);
  }
  return out;
}

}  // namespace textalign
