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
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "textalign/digest.hpp"

namespace textalign {

// Provider-agnostic chat-completion client with a deterministic offline
// mock, retry/backoff on the live path, and content-addressed response
// caching with single-flight de-duplication.

enum class Role { system, user, assistant };

std::string_view role_name(Role role);

struct Message {
  Role role = Role::user;
  std::string content;

  bool operator==(const Message&) const = default;
};

struct CompletionRequest {
  std::string provider_id;
  std::string model;
  std::vector<Message> messages;  // non-empty; first role system or user
  double temperature = 0.0;
  int max_tokens = 512;

  bool operator==(const CompletionRequest&) const = default;
};

struct Usage {
  std::int64_t prompt_tokens = 0;
  std::int64_t completion_tokens = 0;

  bool operator==(const Usage&) const = default;
};

struct CompletionResponse {
  std::string content;
  std::string finish_reason = "stop";
  std::optional<Usage> usage;

  bool operator==(const CompletionResponse&) const = default;
};

// Canonical serialization of a request: compact JSON with lexicographically
// sorted keys and exact field set {max_tokens, messages, model, provider_id,
// temperature}. Byte-stable across runs and platforms.
std::string canonical_request(const CompletionRequest& request);

// SHA-256 of the canonical serialization, lowercase hex. Equal requests map
// to equal digests; the digest is the cache key.
std::string request_digest(const CompletionRequest& request);

// The offline provider: a pure function of the request. The routing tag is
// embedded in the system message.
//   SUMMARIZE  first sentence of each blank-line-separated section of the
//              last user message, joined by single spaces.
//   REASON     "Prediction: <c>. Rationale: <first 12 tokens>." with
//              c = (alphabetic chars in the last user message) mod K, K
//              parsed from a "K=<int>" field in the system message.
//   CAPTION    "An image described by <id>." where <id> comes from the
//              "[image:<id>]" token of the last user message.
// Throws UnknownTag when no tag is present.
CompletionResponse mock_complete(const CompletionRequest& request);

struct ProviderProfile {
  enum class Kind { mock, http, custom };
  std::string id;
  Kind kind = Kind::mock;
  std::string endpoint;                          // http kind
  std::string model;                             // default model
  std::string api_key_env = "TEXTALIGN_API_KEY"; // http kind credential
  int timeout_seconds = 30;
};

struct RetryPolicy {
  int max_attempts = 4;
  int base_delay_ms = 1000;
  double backoff_factor = 2.0;
  bool full_jitter = true;
};

struct ClientStats {
  std::int64_t provider_calls = 0;  // mock + custom + live
  std::int64_t live_http_calls = 0; // network attempts (per request, not try)
  std::int64_t cache_hits = 0;
  std::int64_t cache_misses = 0;
  std::int64_t retries = 0;
};

// Shareable across workers. complete() is safe to call from multiple
// threads; the in-flight limit bounds concurrent provider calls, and the
// cache guarantees at most one provider call per key under concurrency.
class LlmClient {
 public:
  struct Options {
    RetryPolicy retry;
    int max_in_flight = 4;
    bool offline = false;  // force the mock for every profile
  };

  using ProviderFn = std::function<CompletionResponse(const CompletionRequest&)>;

  LlmClient() : LlmClient(Options{}) {}
  explicit LlmClient(Options options);
  ~LlmClient();

  LlmClient(const LlmClient&) = delete;
  LlmClient& operator=(const LlmClient&) = delete;

  void register_profile(ProviderProfile profile);
  // Test seam: a callable provider (counting doubles, scripted failures).
  void register_custom(const std::string& id, ProviderFn fn);

  const ProviderProfile* find_profile(const std::string& id) const;

  // Dispatches on request.provider_id. The live path checks the credential
  // before any network call (AuthMissing), then retries transient failures
  // (transport errors, HTTP 429/5xx) with exponential backoff and full
  // jitter. Throws ProviderError once attempts are exhausted.
  CompletionResponse complete(const CompletionRequest& request);

  // Content-addressed cache in cache_dir (<digest>.json). On a hit, returns
  // the stored response with zero provider calls; on a miss, exactly one
  // concurrent caller performs the provider call (single flight) and
  // persists it. Corrupt cache entries are surfaced as CacheCorrupt, never
  // silently re-fetched.
  CompletionResponse cached_complete(const CompletionRequest& request,
                                     const std::filesystem::path& cache_dir);

  ClientStats stats() const;

  bool offline() const { return options_.offline; }

 private:
  struct Flight;

  CompletionResponse dispatch(const CompletionRequest& request);
  CompletionResponse complete_http(const ProviderProfile& profile,
                                   const CompletionRequest& request,
                                   int* attempts_out);

  Options options_;
  std::map<std::string, ProviderProfile> profiles_;
  std::map<std::string, ProviderFn> custom_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Flight>> flights_;
  std::unique_ptr<class Semaphore> in_flight_;

  std::atomic<std::int64_t> provider_calls_{0};
  std::atomic<std::int64_t> live_http_calls_{0};
  std::atomic<std::int64_t> cache_hits_{0};
  std::atomic<std::int64_t> cache_misses_{0};
  std::atomic<std::int64_t> retries_{0};

  friend struct LlmTestHook;
};

// Cache entry IO, exposed for inspection tooling and tests.
struct CacheEntry {
  std::string request_canonical;
  CompletionResponse response;
  std::string timestamp;
  int attempts = 1;
};

CacheEntry read_cache_entry(const std::filesystem::path& path);
void write_cache_entry(const std::filesystem::path& path,
                       const CacheEntry& entry);

}  // namespace textalign
