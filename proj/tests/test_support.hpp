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

#include <atomic>
#include <deque>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "hitl/event_log.hpp"
#include "hitl/http_transport.hpp"
#include "hitl/org_model.hpp"
#include "hitl/service.hpp"
#include "hitl/time.hpp"

namespace hitl::testing {

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("hitl-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

/// Scripted outbound HTTP. Each URL consumes its queue of statuses, then
/// falls back to the default.
class FakeTransport final : public HttpTransport {
 public:
  struct Call {
    std::string url;
    json body;
  };

  HttpResult post_json(std::string_view url, const std::string& body,
                       std::chrono::milliseconds) override {
    std::lock_guard lock(mu_);
    calls_.push_back({std::string(url), json::parse(body, nullptr, false)});
    int status = default_status_;
    auto it = scripted_.find(std::string(url));
    if (it != scripted_.end() && !it->second.empty()) {
      status = it->second.front();
      it->second.pop_front();
    }
    if (status == 0) return {0, "connection refused", {}};
    return {status, {}, "{}"};
  }

  void script(const std::string& url, std::vector<int> statuses) {
    std::lock_guard lock(mu_);
    auto& q = scripted_[url];
    q.insert(q.end(), statuses.begin(), statuses.end());
  }
  void set_default(int status) {
    std::lock_guard lock(mu_);
    default_status_ = status;
  }
  std::vector<Call> calls() const {
    std::lock_guard lock(mu_);
    return calls_;
  }
  std::vector<Call> calls_to(const std::string& url) const {
    std::lock_guard lock(mu_);
    std::vector<Call> out;
    for (const auto& c : calls_) {
      if (c.url == url) out.push_back(c);
    }
    return out;
  }

 private:
  mutable std::mutex mu_;
  int default_status_ = 200;
  std::map<std::string, std::deque<int>> scripted_;
  std::vector<Call> calls_;
};

/// Sink that can be told to start failing.
class FlakySink final : public audit::LogSink {
 public:
  void write(std::string_view lines) override {
    if (fail) throw audit::StorageError("disk full (simulated)");
    data_.append(lines);
  }
  std::atomic<bool> fail{false};

 private:
  std::string data_;
};

// alice -> bob -> carol, dave -> carol; erin is a root.
inline json sample_org_json() {
  return json::parse(R"({
    "users": [
      {"user_id": "alice", "display_name": "Alice"},
      {"user_id": "bob", "display_name": "Bob"},
      {"user_id": "carol", "display_name": "Carol"},
      {"user_id": "dave", "display_name": "Dave",
       "channel_addresses": {"email_stub": "dave@example.test"}},
      {"user_id": "erin", "display_name": "Erin",
       "channel_addresses": {"webhook": "http://hooks.test/erin"}}
    ],
    "roles": ["approver", "finance", "cfo"],
    "role_bindings": {"approver": ["bob", "dave"], "finance": ["erin"], "cfo": []},
    "reporting_edges": {"alice": "bob", "bob": "carol", "dave": "carol"}
  })");
}

inline org::OrgModel sample_org() { return org::load_org_model(sample_org_json()); }

inline json auto_approve_request(const std::string& agent = "agent-1") {
  return {{"agent_id", agent},
          {"task_state", "step 3 of 5"},
          {"proposed_action", {{"name", "send_email"}, {"fields", {{"to", "x@y.z"}}}}},
          {"facts", json::object()},
          {"confidence", 0.95},
          {"rubric",
           {{"rules",
             {{{"fact", "confidence"},
               {"comparator", "ge"},
               {"operand", 0.9},
               {"disposition", "auto_approve"}}}},
            {"default_disposition", "require_human"}}}};
}

/// amount > 10000 gates to `role_hint`; anything else auto-approves.
inline json gated_request(double amount = 50000, const std::string& role_hint = "role:approver",
                          const std::string& urgency = "normal") {
  return {{"agent_id", "billing-agent"},
          {"task_state", {{"step", "refund"}}},
          {"proposed_action",
           {{"name", "issue_refund"}, {"fields", {{"order", "A-1"}, {"amount", amount}}}}},
          {"facts", {{"amount", amount}, {"requester", "alice"}}},
          {"urgency", urgency},
          {"rubric",
           {{"rules",
             {{{"fact", "amount"},
               {"comparator", "gt"},
               {"operand", 10000},
               {"disposition", "require_human"},
               {"role_hint", role_hint}},
              {{"fact", "amount"},
               {"comparator", "gt"},
               {"operand", 0},
               {"disposition", "auto_approve"}}}}}}};
}

inline service::ServiceConfig test_config() {
  service::ServiceConfig cfg;
  cfg.sync_writes = false;
  cfg.public_base_url = "http://hitl.test";
  cfg.channels = {ChannelKind::Dashboard, ChannelKind::Webhook};
  return cfg;
}

/// A service on a manual clock, fake transport and in-memory log.
struct Harness {
  std::shared_ptr<ManualClock> clock = std::make_shared<ManualClock>();
  std::shared_ptr<FakeTransport> transport = std::make_shared<FakeTransport>();
  service::ServiceConfig config = test_config();
  std::unique_ptr<service::HitlService> service;

  explicit Harness(service::ServiceConfig cfg = test_config(),
                   std::unique_ptr<audit::EventLog> log = audit::EventLog::in_memory(),
                   org::OrgModel org = sample_org())
      : config(std::move(cfg)) {
    service = std::make_unique<service::HitlService>(config, std::move(org), std::move(log),
                                                     deps());
  }

  service::ServiceDependencies deps() const {
    service::ServiceDependencies d;
    d.clock = clock;
    d.transport = transport;
    return d;
  }

  /// A second service built only from this one's log, as after a restart.
  std::unique_ptr<service::HitlService> restarted() const {
    auto log = std::make_unique<audit::EventLog>(std::make_unique<audit::MemorySink>(),
                                                 service->event_log().records());
    return std::make_unique<service::HitlService>(config, *service->org_model(), std::move(log),
                                                  deps());
  }

  std::string submit(const json& body) {
    auto res = service->submit_request(body);
    if (!res.body.contains("request_id")) return {};
    return res.body["request_id"].get<std::string>();
  }

  service::ApiResponse respond(const std::string& id, const std::string& user,
                               const std::string& outcome, json extra = json::object()) {
    json body = {{"request_id", id}, {"user_id", user}, {"outcome", outcome}};
    for (auto& [k, v] : extra.items()) body[k] = v;
    return service->submit_response(body);
  }
};

}  // namespace hitl::testing
