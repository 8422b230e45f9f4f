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

#include "hitl/service_config.hpp"

#include <algorithm>
#include <fstream>

namespace hitl::service {
namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  if (path.is_absolute() || base.empty()) return path;
  return base / path;
}

std::chrono::milliseconds millis(const json& doc, const char* key,
                                 std::chrono::milliseconds fallback) {
  auto it = doc.find(key);
  if (it == doc.end()) return fallback;
  if (!it->is_number() || it->get<double>() < 0) {
    throw ConfigError(std::string(key) + " must be a non-negative number of milliseconds");
  }
  return std::chrono::milliseconds{it->get<std::int64_t>()};
}

}  // namespace

ServiceConfig parse_service_config(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw ConfigError("service config must be an object");
  ServiceConfig cfg;
  try {
    cfg.bind_address = doc.value("bind_address", cfg.bind_address);
    cfg.port = doc.value("port", cfg.port);
    if (doc.contains("storage_path")) {
      cfg.storage_path = resolve(base_dir, doc["storage_path"].get<std::string>());
    } else {
      cfg.storage_path = resolve(base_dir, cfg.storage_path.string());
    }
    cfg.sync_writes = doc.value("sync_writes", cfg.sync_writes);

    if (doc.contains("routing_policy")) {
      cfg.routing = channel::RoutingPolicy::load(doc["routing_policy"]);
    }
    if (doc.contains("channels")) {
      cfg.channels.clear();
      for (const auto& name : doc["channels"]) {
        auto kind = parse_channel_kind(name.get<std::string>());
        if (!kind) throw ConfigError("unknown channel " + name.dump());
        cfg.channels.push_back(*kind);
      }
      if (std::find(cfg.channels.begin(), cfg.channels.end(), ChannelKind::Dashboard) ==
          cfg.channels.end()) {
        throw ConfigError("the dashboard channel cannot be disabled");
      }
    }
    cfg.webhook_timeout = millis(doc, "webhook_timeout_ms", cfg.webhook_timeout);
    cfg.webhook_retries = doc.value("webhook_retries", cfg.webhook_retries);
    cfg.email_outbox =
        resolve(base_dir, doc.value("email_outbox", cfg.email_outbox.string()));

    if (doc.contains("org_model_path")) {
      cfg.org_model_path = resolve(base_dir, doc["org_model_path"].get<std::string>());
    }
    if (doc.contains("fact_provider_path")) {
      cfg.fact_provider_path = resolve(base_dir, doc["fact_provider_path"].get<std::string>());
    }

    cfg.default_role = doc.value("default_role", cfg.default_role);
    cfg.max_defers = doc.value("max_defers", cfg.max_defers);
    if (cfg.max_defers < 0) throw ConfigError("max_defers must be >= 0");
    if (doc.contains("awaiting_timeout_ms")) {
      cfg.awaiting_timeout = millis(doc, "awaiting_timeout_ms", {});
    }
    cfg.retry_after = millis(doc, "retry_after_ms", cfg.retry_after);
    cfg.dispatch_interval = millis(doc, "dispatch_interval_ms", cfg.dispatch_interval);
    cfg.public_base_url = doc.value("public_base_url", cfg.public_base_url);

    if (auto cb = doc.find("callback"); cb != doc.end()) {
      cfg.callback.base_delay = millis(*cb, "base_delay_ms", cfg.callback.base_delay);
      cfg.callback.factor = cb->value("factor", cfg.callback.factor);
      cfg.callback.max_attempts = cb->value("max_attempts", cfg.callback.max_attempts);
      cfg.callback.timeout = millis(*cb, "timeout_ms", cfg.callback.timeout);
      if (cfg.callback.max_attempts < 1) throw ConfigError("callback.max_attempts must be >= 1");
      if (cfg.callback.factor < 1.0) throw ConfigError("callback.factor must be >= 1");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("service config: ") + e.what());
  } catch (const channel::RoutingError& e) {
    throw ConfigError(std::string("routing_policy: ") + e.what());
  }
  return cfg;
}

ServiceConfig load_service_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config file " + path.string() + ": " + e.what());
  }
  return parse_service_config(doc, path.parent_path());
}

}  // namespace hitl::service
