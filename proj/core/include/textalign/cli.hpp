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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace textalign {

// Command implementations behind the textalign binary, callable in-process.
// Exit codes: 0 ok, 1 runtime failure, 2 invalid configuration.

struct GlobalOptions {
  std::filesystem::path config_path;
  bool offline = false;
  std::optional<std::filesystem::path> cache_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
};

int cmd_validate(const GlobalOptions& options, std::ostream& out,
                 std::ostream& err);

struct RunOptions {
  std::vector<std::string> sweeps;
  std::vector<std::string> pipelines;
};

int cmd_run(const GlobalOptions& options, const RunOptions& run,
            std::ostream& out, std::ostream& err);

struct ReportOptions {
  std::filesystem::path run_dir;
  std::string format = "md";  // csv | md | json
};

int cmd_report(const ReportOptions& options, std::ostream& out,
               std::ostream& err);

struct InspectOptions {
  std::filesystem::path run_dir;
  std::string record_id;
  std::string sweep;  // optional filter
  int level_index = -1;  // optional filter
};

int cmd_inspect(const InspectOptions& options, std::ostream& out,
                std::ostream& err);

}  // namespace textalign
