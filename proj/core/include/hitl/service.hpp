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
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "hitl/delivery.hpp"
#include "hitl/event_log.hpp"
#include "hitl/fact_provider.hpp"
#include "hitl/http_transport.hpp"
#include "hitl/org_model.hpp"
#include "hitl/request_state.hpp"
#include "hitl/service_config.hpp"
#include "hitl/time.hpp"

namespace hitl::service {

/// Transport-neutral result of an API call: HTTP status plus JSON body.
struct ApiResponse {
  int status = 200;
  json body = json::object();
};

struct ServiceDependencies {
  std::shared_ptr<const Clock> clock = std::make_shared<SystemClock>();
  std::shared_ptr<HttpTransport> transport = std::make_shared<DefaultHttpTransport>();
  std::shared_ptr<const FactProvider> fact_provider;
};

/// The request/resolution protocol. Every state change is written to the
/// event log before the call returns, and in-memory state is only ever
/// changed by folding those same records (see apply_event), so a restart
/// that replays the log ends up in the same place.
///
/// Thread-safe. Mutations of one request are serialized; different requests
/// proceed independently.
class HitlService {
 public:
  HitlService(ServiceConfig config, org::OrgModel org, std::unique_ptr<audit::EventLog> log,
              ServiceDependencies deps = {});
  ~HitlService();

  HitlService(const HitlService&) = delete;
  HitlService& operator=(const HitlService&) = delete;

  /// Opens the configured event log (replaying it), org model and fact provider.
  static std::unique_ptr<HitlService> open(const ServiceConfig& config,
                                           ServiceDependencies deps = {});

  // POST /api/hitl/request
  ApiResponse submit_request(const json& body);
  // GET /api/hitl/get-decision?request_id=
  ApiResponse get_decision(std::string_view request_id) const;
  // POST /api/hitl/respond
  ApiResponse submit_response(const json& body);
  // GET /api/hitl/pending?user_id=
  ApiResponse list_pending(std::string_view user_id) const;
  // POST /api/admin/reload-org
  ApiResponse reload_org_model(const json& document);
  // GET /api/hitl/descriptor
  json export_a2a_descriptor() const;
  // GET /api/hitl/audit?request_id= | ?offset=&limit=
  ApiResponse query_audit(std::optional<std::string_view> request_id, std::size_t offset = 0,
                          std::size_t limit = 100) const;
  // GET /api/hitl/suggestions?threshold=
  ApiResponse suggestions(std::size_t threshold) const;

  /// POSTs every due callback once. Returns how many were delivered.
  std::size_t dispatch_callbacks();
  /// Moves awaiting requests past their deadline to expired.
  std::size_t expire_overdue();

  /// Blocks until callback work is queued, stop_waiting() is called, or the
  /// timeout passes.
  void wait_for_work(std::chrono::milliseconds timeout);
  void stop_waiting();

  void set_public_base_url(std::string url);

  std::optional<RequestState> snapshot(std::string_view request_id) const;
  std::vector<RequestState> snapshot_all() const;
  std::shared_ptr<const org::OrgModel> org_model() const;
  const audit::EventLog& event_log() const { return *log_; }
  channel::ChannelRouter& router() { return router_; }
  const ServiceConfig& config() const { return config_; }

 private:
  struct Entry {
    mutable std::mutex mu;
    RequestState state;
  };

  std::shared_ptr<Entry> find_entry(std::string_view request_id) const;
  std::vector<std::shared_ptr<Entry>> all_entries() const;

  /// Persists `batch` and folds it into `entry` (whose mutex the caller holds).
  void commit(Entry& entry, std::vector<audit::AuditRecord> batch);
  audit::AuditRecord make_record(std::string_view request_id, audit::AuditEvent event,
                                 json payload) const;

  std::vector<audit::AuditRecord> deliver_round(const RequestState& state,
                                                const std::vector<org::User>& users, int round,
                                                bool notification);
  std::optional<json> callback_for(const RequestState& state, Status terminal,
                                   const std::optional<Resolution>& resolution) const;
  std::string respond_endpoint() const;
  std::string next_request_id();

  ServiceConfig config_;
  ServiceDependencies deps_;
  std::unique_ptr<audit::EventLog> log_;
  channel::ChannelRouter router_;

  mutable std::mutex org_mu_;
  std::shared_ptr<const org::OrgModel> org_;

  mutable std::shared_mutex index_mu_;
  std::map<std::string, std::shared_ptr<Entry>, std::less<>> index_;
  std::atomic<std::uint64_t> next_id_{1};

  std::mutex dispatch_mu_;

  mutable std::mutex base_url_mu_;
  std::string public_base_url_;

  std::mutex work_mu_;
  std::condition_variable work_cv_;
  bool work_pending_ = false;
  bool stop_waiting_ = false;
};

}  // namespace hitl::service
