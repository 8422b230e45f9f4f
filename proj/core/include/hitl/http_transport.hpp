// Copyright 2026 The HITL Control Plane Authors
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

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace hitl {

struct HttpResult {
  int status = 0;  // 0 when no response arrived
  std::string error;
  std::string body;

  bool ok() const { return status >= 200 && status < 300; }
};

/// Outbound POST used by the webhook channel and the callback dispatcher.
/// Implementations must be safe to call from several threads at once.
class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResult post_json(std::string_view url, const std::string& body,
                               std::chrono::milliseconds timeout) = 0;
};

/// cpp-httplib backed transport. Plain http only.
class DefaultHttpTransport final : public HttpTransport {
 public:
  HttpResult post_json(std::string_view url, const std::string& body,
                       std::chrono::milliseconds timeout) override;
};

struct ParsedUrl {
  std::string scheme;
  std::string host;
  int port = 80;
  std::string path = "/";

  /// "scheme://host:port"
  std::string origin() const;
};

std::optional<ParsedUrl> parse_url(std::string_view url);

}  // namespace hitl
