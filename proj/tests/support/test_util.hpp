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

#include <atomic>
#include <filesystem>
#include <random>
#include <string>

#include "textalign/fsio.hpp"

namespace textalign::testing {

inline std::filesystem::path data_dir() { return TEXTALIGN_DATA_DIR; }
inline std::filesystem::path golden_dir() { return TEXTALIGN_GOLDEN_DIR; }
inline std::filesystem::path prompts_dir() { return data_dir() / "prompts"; }
inline std::filesystem::path fixtures_dir() { return data_dir() / "fixtures"; }

// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& label) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("textalign_" + label + "_" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace textalign::testing
