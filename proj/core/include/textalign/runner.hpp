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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "textalign/config.hpp"

namespace textalign {

// Binds the modules into one reproducible experiment: exemplar collection,
// per-profile training, selected sweeps, and artifact files under
// output_dir/<run-id>/.

struct RunOverrides {
  bool offline = false;
  std::optional<std::filesystem::path> cache_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::vector<std::string> sweeps;     // empty -> all configured sweeps
  std::vector<std::string> pipelines;  // empty -> each sweep's own profile
};

struct RunSummary {
  std::string run_id;
  std::filesystem::path run_dir;
  std::vector<std::filesystem::path> report_files;
  std::vector<std::filesystem::path> model_files;
  std::int64_t live_http_calls = 0;
  std::int64_t provider_calls = 0;
};

// The run id is a 12-hex-character content hash of (canonical config,
// dataset hash, prompt hash, code version). Re-running the same identity
// reuses the directory and reproduces byte-identical reports; a directory
// whose manifest holds a different identity raises RunIdCollision.
std::string compute_run_id(const HarnessConfig& config);

RunSummary run_harness(HarnessConfig config, const RunOverrides& overrides = {});

}  // namespace textalign
