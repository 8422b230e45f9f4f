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
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hitl/routing.hpp"
#include "hitl/types.hpp"

namespace hitl::service {

struct CallbackPolicy {
  std::chrono::milliseconds base_delay{1000};
  double factor = 2.0;
  int max_attempts = 5;
  std::chrono::milliseconds timeout{5000};
};

struct ServiceConfig {
  std::string bind_address = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  /// Event log (NDJSON). Doubles as the audit log.
  std::filesystem::path storage_path = "hitl-events.ndjson";
  bool sync_writes = true;

  channel::RoutingPolicy routing = channel::RoutingPolicy::defaults();
  std::vector<ChannelKind> channels = {ChannelKind::Dashboard, ChannelKind::Webhook,
                                       ChannelKind::EmailStub};
  std::chrono::milliseconds webhook_timeout{5000};
  int webhook_retries = 1;
  std::filesystem::path email_outbox = "outbox";

  std::optional<std::filesystem::path> org_model_path;
  std::optional<std::filesystem::path> fact_provider_path;

  /// Role spec used when a rubric gates to a human without a role_hint.
  std::string default_role = "approver";
  int max_defers = 3;
  /// Open requests expire this long after (re)entering awaiting_human.
  std::optional<std::chrono::milliseconds> awaiting_timeout;
  std::chrono::milliseconds retry_after{2000};
  CallbackPolicy callback;
  /// Background callback/expiry sweep interval.
  std::chrono::milliseconds dispatch_interval{200};
  /// Base URL placed in work items as the respond endpoint. Filled from the
  /// bound address when empty.
  std::string public_base_url;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Relative paths in the document resolve against `base_dir`.
ServiceConfig parse_service_config(const json& document,
                                   const std::filesystem::path& base_dir = {});
ServiceConfig load_service_config(const std::filesystem::path& path);

}  // namespace hitl::service
