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

#include <stdexcept>
#include <string>
#include <string_view>

namespace textalign {

// Error codes cover every named failure across the library. The textual
// name is stable and machine-readable (used by CLI diagnostics).
enum class Errc {
  // dataset
  missing_column,
  duplicate_id,
  label_out_of_range,
  malformed_row,
  too_few_records,
  // perturb
  duplicate_modality_spec,
  // textify
  unknown_column,
  caption_unavailable,
  // llm
  provider_error,
  timeout,
  auth_missing,
  cache_corrupt,
  unknown_tag,
  // pipeline
  empty_input,
  n_at_least_one,
  // model
  shape_mismatch,
  empty_dataset,
  length_mismatch,
  empty,
  // eval
  zero_clean_accuracy,
  mismatched_sweeps,
  // cli
  no_reports_found,
  record_not_found,
  run_id_collision,
  bad_config,
  // shared
  bad_schema,
  io_error,
};

std::string_view errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace textalign
