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

#include <cmath>
#include <cstdint>
#include <string_view>

namespace textalign {

// Deterministic randomness used everywhere in the library. All streams are
// derived from explicit inputs (seed, record id, modality tag); there is no
// global generator and no platform-dependent distribution code, so results
// are reproducible across runs, threads, and operating systems.

// splitmix64 finalizer. Bijective on 64-bit values.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// FNV-1a over bytes; the stable string hash for stream derivation and
// feature hashing.
constexpr std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

// Counter-based generator: the i-th output is a pure function of (key, i).
// Draw order therefore never depends on thread scheduling, and streams with
// distinct keys are independent for our purposes.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  std::uint64_t next_u64() { return mix64(key_ ^ mix64(++counter_)); }

  // Uniform in [0, 1), 53-bit resolution.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, bound) via the 128-bit multiply reduction.
  std::uint64_t next_below(std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
  }

  // Standard normal via Box-Muller; consumes exactly two uniforms per draw.
  double next_gaussian() {
    const double u1 =
        (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;  // (0,1]
    const double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Key for the per-record stream: hash of (base_seed, record id, tag).
inline std::uint64_t stream_key(std::uint64_t base_seed, std::string_view id,
                                std::string_view tag) {
  std::uint64_t h = mix64(base_seed);
  h = mix64(h ^ fnv1a64(id));
  h = mix64(h ^ fnv1a64(tag));
  return h;
}

inline CounterRng derive_stream(std::uint64_t base_seed, std::string_view id,
                                std::string_view tag) {
  return CounterRng(stream_key(base_seed, id, tag));
}

}  // namespace textalign
