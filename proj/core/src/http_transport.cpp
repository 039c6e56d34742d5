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

#include "textalign/http_transport.hpp"

#include <httplib.h>

namespace textalign {

namespace {

// Splits "https://host:port/path" into origin and path.
void split_endpoint(const std::string& endpoint, std::string& origin,
                    std::string& path) {
  const auto scheme_end = endpoint.find("://");
  std::size_t path_start = std::string::npos;
  if (scheme_end != std::string::npos) {
    path_start = endpoint.find('/', scheme_end + 3);
  } else {
    path_start = endpoint.find('/');
  }
  if (path_start == std::string::npos) {
    origin = endpoint;
    path = "/";
  } else {
    origin = endpoint.substr(0, path_start);
    path = endpoint.substr(path_start);
  }
}

}  // namespace

HttpResult http_post_json(const std::string& endpoint,
                          const std::string& payload,
                          const std::string& bearer, int timeout_seconds) {
  HttpResult result;
  std::string origin;
  std::string path;
  split_endpoint(endpoint, origin, path);

  httplib::Client client(origin);
  client.set_connection_timeout(timeout_seconds, 0);
  client.set_read_timeout(timeout_seconds, 0);
  client.set_write_timeout(timeout_seconds, 0);
  httplib::Headers headers;
  if (!bearer.empty()) {
    headers.emplace("Authorization", "Bearer " + bearer);
  }
  const httplib::Result reply =
      client.Post(path, headers, payload, "application/json");
  if (!reply) {
    result.transport_error = true;
    result.error = httplib::to_string(reply.error());
    result.timed_out = reply.error() == httplib::Error::ConnectionTimeout ||
                       reply.error() == httplib::Error::Read ||
                       reply.error() == httplib::Error::Write;
    return result;
  }
  result.status = reply->status;
  result.body = reply->body;
  return result;
}

}  // namespace textalign
