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

#include "textalign/llm.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <ctime>
#include <cstdlib>
#include <thread>

#include <nlohmann/json.hpp>

#include "textalign/error.hpp"
#include "textalign/fsio.hpp"
#include "textalign/http_transport.hpp"
#include "textalign/rng.hpp"
#include "textalign/strings.hpp"

namespace textalign {

using nlohmann::json;

std::string_view role_name(Role role) {
  switch (role) {
    case Role::system: return "system";
    case Role::user: return "user";
    case Role::assistant: return "assistant";
  }
  return "user";
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(),
                 nullptr) != 1) {
    throw Error(Errc::provider_error, "SHA-256 computation failed");
  }
  return to_hex(digest, length);
}

std::string canonical_request(const CompletionRequest& request) {
  // nlohmann objects iterate in key order, so dump() is canonical given the
  // fixed field set.
  json messages = json::array();
  for (const auto& message : request.messages) {
    messages.push_back({{"content", message.content},
                        {"role", std::string(role_name(message.role))}});
  }
  const json j = {{"max_tokens", request.max_tokens},
                  {"messages", messages},
                  {"model", request.model},
                  {"provider_id", request.provider_id},
                  {"temperature", request.temperature}};
  return j.dump();
}

std::string request_digest(const CompletionRequest& request) {
  return sha256_hex(canonical_request(request));
}

namespace {

void check_request(const CompletionRequest& request) {
  if (request.messages.empty()) {
    throw Error(Errc::provider_error, "request has no messages");
  }
  if (request.messages.front().role == Role::assistant) {
    throw Error(Errc::provider_error,
                "first message role must be system or user");
  }
  if (request.temperature < 0.0) {
    throw Error(Errc::provider_error, "temperature must be >= 0");
  }
  if (request.max_tokens <= 0) {
    throw Error(Errc::provider_error, "max_tokens must be positive");
  }
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buffer[32];
  std::tm tm_utc{};
  gmtime_r(&t, &tm_utc);
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buffer;
}

}  // namespace

class Semaphore {
 public:
  explicit Semaphore(int count) : count_(count) {}

  void acquire() {
    std::unique_lock lock(mutex_);
    cv_.wait(lock, [this] { return count_ > 0; });
    --count_;
  }

  void release() {
    {
      std::lock_guard lock(mutex_);
      ++count_;
    }
    cv_.notify_one();
  }

 private:
  std::mutex mutex_;
  std::condition_variable cv_;
  int count_;
};

namespace {

struct SemaphoreGuard {
  explicit SemaphoreGuard(Semaphore& s) : sem(s) { sem.acquire(); }
  ~SemaphoreGuard() { sem.release(); }
  Semaphore& sem;
};

}  // namespace

struct LlmClient::Flight {
  std::mutex mutex;
  std::condition_variable cv;
  bool done = false;
  std::optional<CompletionResponse> result;
  std::exception_ptr error;
};

LlmClient::LlmClient(Options options)
    : options_(options),
      in_flight_(std::make_unique<Semaphore>(
          options.max_in_flight > 0 ? options.max_in_flight : 1)) {}

LlmClient::~LlmClient() = default;

void LlmClient::register_profile(ProviderProfile profile) {
  std::lock_guard lock(mutex_);
  profiles_[profile.id] = std::move(profile);
}

void LlmClient::register_custom(const std::string& id, ProviderFn fn) {
  std::lock_guard lock(mutex_);
  custom_[id] = std::move(fn);
  ProviderProfile profile;
  profile.id = id;
  profile.kind = ProviderProfile::Kind::custom;
  profiles_[id] = std::move(profile);
}

const ProviderProfile* LlmClient::find_profile(const std::string& id) const {
  std::lock_guard lock(mutex_);
  const auto it = profiles_.find(id);
  return it == profiles_.end() ? nullptr : &it->second;
}

CompletionResponse LlmClient::complete(const CompletionRequest& request) {
  check_request(request);
  SemaphoreGuard guard(*in_flight_);
  provider_calls_.fetch_add(1, std::memory_order_relaxed);
  return dispatch(request);
}

CompletionResponse LlmClient::dispatch(const CompletionRequest& request) {
  ProviderProfile profile;
  ProviderFn custom_fn;
  {
    std::lock_guard lock(mutex_);
    const auto it = profiles_.find(request.provider_id);
    if (it == profiles_.end()) {
      throw Error(Errc::provider_error,
                  "unknown provider: " + request.provider_id);
    }
    profile = it->second;
    if (profile.kind == ProviderProfile::Kind::custom) {
      custom_fn = custom_.at(request.provider_id);
    }
  }
  if (options_.offline || profile.kind == ProviderProfile::Kind::mock) {
    return mock_complete(request);
  }
  if (profile.kind == ProviderProfile::Kind::custom) {
    return custom_fn(request);
  }
  int attempts = 0;
  return complete_http(profile, request, &attempts);
}

CompletionResponse LlmClient::complete_http(const ProviderProfile& profile,
                                            const CompletionRequest& request,
                                            int* attempts_out) {
  // Credential check precedes any network activity.
  std::string bearer;
  if (!profile.api_key_env.empty()) {
    const char* key = std::getenv(profile.api_key_env.c_str());
    if (key == nullptr || *key == '\0') {
      throw Error(Errc::auth_missing,
                  "environment variable " + profile.api_key_env +
                      " is not set for provider " + profile.id);
    }
    bearer = key;
  }

  json body_messages = json::array();
  for (const auto& message : request.messages) {
    body_messages.push_back({{"role", std::string(role_name(message.role))},
                             {"content", message.content}});
  }
  const json body = {{"model", request.model},
                     {"messages", body_messages},
                     {"temperature", request.temperature},
                     {"max_tokens", request.max_tokens}};
  const std::string payload = body.dump();

  const RetryPolicy& retry = options_.retry;
  CounterRng jitter = derive_stream(fnv1a64(request_digest(request)), "",
                                    "retry.jitter");
  HttpResult last{};
  for (int attempt = 1; attempt <= retry.max_attempts; ++attempt) {
    if (attempts_out) *attempts_out = attempt;
    live_http_calls_.fetch_add(1, std::memory_order_relaxed);
    last = http_post_json(profile.endpoint, payload, bearer,
                          profile.timeout_seconds);
    if (!last.transport_error && last.status == 200) {
      try {
        const json reply = json::parse(last.body);
        const auto& choice = reply.at("choices").at(0);
        CompletionResponse response;
        response.content =
            choice.at("message").at("content").get<std::string>();
        response.finish_reason = choice.value("finish_reason", "stop");
        if (reply.contains("usage") && reply["usage"].is_object()) {
          Usage usage;
          usage.prompt_tokens = reply["usage"].value("prompt_tokens", 0);
          usage.completion_tokens =
              reply["usage"].value("completion_tokens", 0);
          response.usage = usage;
        }
        return response;
      } catch (const json::exception& e) {
        throw Error(Errc::provider_error,
                    std::string("malformed provider response: ") + e.what());
      }
    }
    const bool retryable =
        last.transport_error || last.status == 429 ||
        (last.status >= 500 && last.status <= 599);
    if (!retryable || attempt == retry.max_attempts) break;
    retries_.fetch_add(1, std::memory_order_relaxed);
    double delay_ms = retry.base_delay_ms *
                      std::pow(retry.backoff_factor, attempt - 1);
    if (retry.full_jitter) delay_ms *= jitter.next_double();
    std::this_thread::sleep_for(
        std::chrono::milliseconds(static_cast<std::int64_t>(delay_ms)));
  }
  if (last.transport_error && last.timed_out) {
    throw Error(Errc::timeout, "provider " + profile.id + " timed out after " +
                                   std::to_string(retry.max_attempts) +
                                   " attempts");
  }
  if (last.transport_error) {
    throw Error(Errc::provider_error,
                "transport failure for provider " + profile.id + ": " +
                    last.error);
  }
  throw Error(Errc::provider_error,
              "HTTP " + std::to_string(last.status) + " from provider " +
                  profile.id + ": " + last.body.substr(0, 256));
}

CompletionResponse LlmClient::cached_complete(
    const CompletionRequest& request, const std::filesystem::path& cache_dir) {
  check_request(request);
  const std::string digest = request_digest(request);
  std::filesystem::create_directories(cache_dir);
  const std::filesystem::path entry_path = cache_dir / (digest + ".json");

  std::shared_ptr<Flight> flight;
  bool leader = false;
  {
    std::lock_guard lock(mutex_);
    const auto it = flights_.find(digest);
    if (it == flights_.end()) {
      flight = std::make_shared<Flight>();
      flights_.emplace(digest, flight);
      leader = true;
    } else {
      flight = it->second;
    }
  }
  if (!leader) {
    std::unique_lock lock(flight->mutex);
    flight->cv.wait(lock, [&] { return flight->done; });
    if (flight->error) std::rethrow_exception(flight->error);
    return *flight->result;
  }

  CompletionResponse response;
  std::exception_ptr failure;
  try {
    if (std::filesystem::exists(entry_path)) {
      response = read_cache_entry(entry_path).response;
      cache_hits_.fetch_add(1, std::memory_order_relaxed);
    } else {
      cache_misses_.fetch_add(1, std::memory_order_relaxed);
      SemaphoreGuard guard(*in_flight_);
      provider_calls_.fetch_add(1, std::memory_order_relaxed);
      int attempts = 1;
      {
        ProviderProfile profile;
        ProviderFn custom_fn;
        {
          std::lock_guard lock(mutex_);
          const auto it = profiles_.find(request.provider_id);
          if (it == profiles_.end()) {
            throw Error(Errc::provider_error,
                        "unknown provider: " + request.provider_id);
          }
          profile = it->second;
          if (profile.kind == ProviderProfile::Kind::custom) {
            custom_fn = custom_.at(request.provider_id);
          }
        }
        if (options_.offline || profile.kind == ProviderProfile::Kind::mock) {
          response = mock_complete(request);
        } else if (profile.kind == ProviderProfile::Kind::custom) {
          response = custom_fn(request);
        } else {
          response = complete_http(profile, request, &attempts);
        }
      }
      CacheEntry entry;
      entry.request_canonical = canonical_request(request);
      entry.response = response;
      entry.timestamp = utc_timestamp();
      entry.attempts = attempts;
      write_cache_entry(entry_path, entry);
    }
  } catch (...) {
    failure = std::current_exception();
  }

  {
    std::lock_guard lock(mutex_);
    flights_.erase(digest);
  }
  {
    std::lock_guard lock(flight->mutex);
    flight->done = true;
    if (failure) {
      flight->error = failure;
    } else {
      flight->result = response;
    }
  }
  flight->cv.notify_all();
  if (failure) std::rethrow_exception(failure);
  return response;
}

ClientStats LlmClient::stats() const {
  ClientStats s;
  s.provider_calls = provider_calls_.load(std::memory_order_relaxed);
  s.live_http_calls = live_http_calls_.load(std::memory_order_relaxed);
  s.cache_hits = cache_hits_.load(std::memory_order_relaxed);
  s.cache_misses = cache_misses_.load(std::memory_order_relaxed);
  s.retries = retries_.load(std::memory_order_relaxed);
  return s;
}

CacheEntry read_cache_entry(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const std::exception& e) {
    throw Error(Errc::cache_corrupt, path.string() + ": " + e.what());
  }
  try {
    CacheEntry entry;
    entry.request_canonical = j.at("request").dump();
    const auto& r = j.at("response");
    entry.response.content = r.at("content").get<std::string>();
    entry.response.finish_reason = r.value("finish_reason", "stop");
    if (r.contains("usage") && r["usage"].is_object()) {
      Usage usage;
      usage.prompt_tokens = r["usage"].value("prompt_tokens", 0);
      usage.completion_tokens = r["usage"].value("completion_tokens", 0);
      entry.response.usage = usage;
    }
    entry.timestamp = j.value("timestamp", "");
    entry.attempts = j.value("attempts", 1);
    return entry;
  } catch (const json::exception& e) {
    throw Error(Errc::cache_corrupt, path.string() + ": " + e.what());
  }
}

void write_cache_entry(const std::filesystem::path& path,
                       const CacheEntry& entry) {
  json usage;
  if (entry.response.usage) {
    usage = {{"prompt_tokens", entry.response.usage->prompt_tokens},
             {"completion_tokens", entry.response.usage->completion_tokens}};
  }
  const json j = {{"request", json::parse(entry.request_canonical)},
                  {"response",
                   {{"content", entry.response.content},
                    {"finish_reason", entry.response.finish_reason},
                    {"usage", usage}}},
                  {"timestamp", entry.timestamp},
                  {"attempts", entry.attempts}};
  const std::filesystem::path tmp =
      path.string() + ".tmp." +
      std::to_string(
          std::hash<std::thread::id>{}(std::this_thread::get_id()));
  write_text_file(tmp, j.dump(2) + "\n");
  std::filesystem::rename(tmp, path);
}

}  // namespace textalign
