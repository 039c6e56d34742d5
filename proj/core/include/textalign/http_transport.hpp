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

#include <string>

namespace textalign {

struct HttpResult {
  int status = 0;
  std::string body;
  std::string error;
  bool transport_error = false;
  bool timed_out = false;
};

// Single POST of a JSON payload; bearer added as an Authorization header
// when non-empty. Never throws; failures come back in the result.
HttpResult http_post_json(const std::string& endpoint,
                          const std::string& payload,
                          const std::string& bearer, int timeout_seconds);

}  // namespace textalign
