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
#include <filesystem>
#include <vector>

namespace textalign {

// 8-bit RGB, row-major, 3 bytes per pixel. The single internal image
// representation; grayscale and paletted inputs are expanded on load.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  std::size_t size_bytes() const { return pixels.size(); }
  bool operator==(const Image& other) const = default;
};

// Decodes a .png or .jpg/.jpeg file to RGB8. Throws IoError on decode
// failure or unsupported extension.
Image load_image(const std::filesystem::path& path);

// PNG writer for fixtures and dumps.
void write_png(const std::filesystem::path& path, const Image& image);

}  // namespace textalign
