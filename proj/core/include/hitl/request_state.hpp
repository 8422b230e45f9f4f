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
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hitl/delivery.hpp"
#include "hitl/event_log.hpp"
#include "hitl/request.hpp"
#include "hitl/resolution.hpp"
#include "hitl/rubric.hpp"

namespace hitl::service {

enum class Status { Received, AutoResolved, AwaitingHuman, Resolved, Expired };

std::string_view to_string(Status status);
std::optional<Status> parse_status(std::string_view text);

constexpr bool is_terminal(Status status) {
  return status == Status::AutoResolved || status == Status::Resolved ||
         status == Status::Expired;
}

/// received->auto_resolved, received->awaiting_human, awaiting_human->resolved,
/// awaiting_human->awaiting_human (defer), awaiting_human->expired.
bool is_legal_transition(Status from, Status to);

struct HistoryEntry {
  Status status;
  Timestamp at;

  friend bool operator==(const HistoryEntry&, const HistoryEntry&) = default;
};

/// Pending delivery of a terminal result to the agent's callback endpoint.
struct CallbackTask {
  std::string request_id;
  std::string endpoint;
  std::string idempotency_key;
  int attempts = 0;
  Timestamp next_attempt_at{};
  bool delivered = false;
  bool parked = false;

  friend bool operator==(const CallbackTask&, const CallbackTask&) = default;
};

json to_json(const CallbackTask& task);

struct RequestState {
  HitlRequest request;
  std::string signature;
  Status status = Status::Received;
  std::optional<Disposition> disposition;
  std::optional<Resolution> resolution;
  std::vector<std::string> participants;
  int defer_count = 0;
  std::optional<Timestamp> deadline;
  std::vector<HistoryEntry> history;
  std::vector<channel::DeliveryRecord> deliveries;
  std::optional<CallbackTask> callback;

  friend bool operator==(const RequestState&, const RequestState&) = default;
};

/// Raised when an event would break the lifecycle state machine.
class ProjectionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Builds the initial state from a `submitted` record.
RequestState state_from_submitted(const audit::AuditRecord& record);

/// Folds one record into a request's state. The live service and log replay
/// both go through here, so replay reproduces live state exactly.
void apply_event(RequestState& state, const audit::AuditRecord& record);

/// Rebuilds every request's state from a log.
std::map<std::string, RequestState, std::less<>> replay(std::span<const audit::AuditRecord> log);

/// Body of GET /api/hitl/get-decision. `retry_after` is only emitted while
/// the request is still open, so terminal bodies never change.
json decision_body(const RequestState& state, std::chrono::milliseconds retry_after);

/// `<request_id>:<fnv1a64 of the terminal status and resolution>`.
std::string idempotency_key(std::string_view request_id, Status status,
                            const std::optional<Resolution>& resolution);

/// Document POSTed to the callback endpoint.
json callback_body(const RequestState& state);

}  // namespace hitl::service
