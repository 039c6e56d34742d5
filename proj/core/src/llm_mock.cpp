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

#include <cctype>
#include <string>

#include "textalign/error.hpp"
#include "textalign/llm.hpp"
#include "textalign/strings.hpp"

namespace textalign {
namespace {

const std::string* last_user_content(const CompletionRequest& request) {
  for (auto it = request.messages.rbegin(); it != request.messages.rend();
       ++it) {
    if (it->role == Role::user) return &it->content;
  }
  return nullptr;
}

const std::string* system_content(const CompletionRequest& request) {
  for (const auto& message : request.messages) {
    if (message.role == Role::system) return &message.content;
  }
  return nullptr;
}

std::string summarize_rule(const std::string& input) {
  const auto sections = split_blank_line_sections(input);
  std::vector<std::string> sentences;
  sentences.reserve(sections.size());
  for (const auto& section : sections) {
    sentences.push_back(first_sentence(section));
  }
  return join(sentences, " ");
}

std::string reason_rule(const std::string& input, const std::string& system) {
  const auto k_pos = system.find("K=");
  if (k_pos == std::string::npos) {
    throw Error(Errc::provider_error,
                "mock REASON requires a K=<int> field in the system message");
  }
  int k = 0;
  std::size_t i = k_pos + 2;
  bool any_digit = false;
  while (i < system.size() &&
         std::isdigit(static_cast<unsigned char>(system[i]))) {
    k = k * 10 + (system[i] - '0');
    ++i;
    any_digit = true;
  }
  if (!any_digit || k <= 0) {
    throw Error(Errc::provider_error, "mock REASON: malformed K=<int> field");
  }
  std::size_t alphabetic = 0;
  for (unsigned char c : input) {
    if (std::isalpha(c)) ++alphabetic;
  }
  const int predicted = static_cast<int>(alphabetic % static_cast<std::size_t>(k));
  auto tokens = split_whitespace(input);
  if (tokens.size() > 12) tokens.resize(12);
  return "Prediction: " + std::to_string(predicted) +
         ". Rationale: " + join(tokens, " ") + ".";
}

std::string caption_rule(const std::string& input) {
  const auto start = input.find("[image:");
  std::string id;
  if (start != std::string::npos) {
    const auto end = input.find(']', start);
    if (end != std::string::npos) {
      id = input.substr(start + 7, end - (start + 7));
    }
  }
  if (id.empty()) {
    // Fall back to the last token so the rule stays total on odd prompts.
    const auto tokens = split_whitespace(input);
    if (!tokens.empty()) id = tokens.back();
  }
  return "An image described by " + id + ".";
}

}  // namespace

CompletionResponse mock_complete(const CompletionRequest& request) {
  const std::string* system = system_content(request);
  const std::string* input = last_user_content(request);
  static const std::string empty;
  if (!input) input = &empty;

  const std::string& tagged = system ? *system : empty;
  CompletionResponse response;
  if (tagged.find("SUMMARIZE") != std::string::npos) {
    response.content = summarize_rule(*input);
  } else if (tagged.find("REASON") != std::string::npos) {
    response.content = reason_rule(*input, tagged);
  } else if (tagged.find("CAPTION") != std::string::npos) {
    response.content = caption_rule(*input);
  } else {
    throw Error(Errc::unknown_tag,
                "no SUMMARIZE/REASON/CAPTION tag in the system message");
  }
  response.finish_reason = "stop";
  Usage usage;
  for (const auto& message : request.messages) {
    usage.prompt_tokens +=
        static_cast<std::int64_t>(split_whitespace(message.content).size());
  }
  usage.completion_tokens =
      static_cast<std::int64_t>(split_whitespace(response.content).size());
  response.usage = usage;
  return response;
}

}  // namespace textalign
