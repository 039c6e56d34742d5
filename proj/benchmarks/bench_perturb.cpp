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

#include <benchmark/benchmark.h>

#include <string>

#include "textalign/image.hpp"
#include "textalign/perturb.hpp"

namespace {

std::string make_corpus(int tokens) {
  std::string text;
  text.reserve(static_cast<std::size_t>(tokens) * 8);
  for (int i = 0; i < tokens; ++i) {
    text += "token" + std::to_string(i % 997) + " ";
  }
  return text;
}

void BM_DropWords(benchmark::State& state) {
  const std::string corpus = make_corpus(static_cast<int>(state.range(0)));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        textalign::drop_words(corpus, 0.3, ++seed, "bench"));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DropWords)->Arg(1000)->Arg(10000);

void BM_DropColumns(benchmark::State& state) {
  textalign::TabularRow row;
  for (int c = 0; c < 20; ++c) {
    row.emplace_back("column" + std::to_string(c),
                     std::optional<std::string>("value"));
  }
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        textalign::drop_columns(row, 0.5, ++seed, "bench"));
  }
}
BENCHMARK(BM_DropColumns);

void BM_GaussianNoise(benchmark::State& state) {
  textalign::Image image;
  image.width = static_cast<int>(state.range(0));
  image.height = static_cast<int>(state.range(0));
  image.pixels.assign(
      static_cast<std::size_t>(image.width) * image.height * 3, 128);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        textalign::add_gaussian_noise(image, 0.1, ++seed, "bench"));
  }
  state.SetBytesProcessed(state.iterations() *
                          static_cast<std::int64_t>(image.pixels.size()));
}
BENCHMARK(BM_GaussianNoise)->Arg(64)->Arg(256);

}  // namespace
