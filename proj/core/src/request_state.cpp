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

#include "hitl/request_state.hpp"

#include "hash.hpp"

namespace hitl::service {
namespace {

using audit::AuditEvent;
using audit::AuditRecord;

void transition(RequestState& state, Status to, Timestamp at) {
  if (!is_legal_transition(state.status, to)) {
    throw ProjectionError("illegal transition " + std::string(to_string(state.status)) + " -> " +
                          std::string(to_string(to)) + " for " + state.request.request_id);
  }
  state.status = to;
  state.history.push_back({to, at});
}

Timestamp timestamp_field(const json& doc, const char* key) {
  auto ts = parse_iso8601(doc.at(key).get<std::string>());
  if (!ts) throw ProjectionError(std::string("malformed timestamp in ") + key);
  return *ts;
}

void start_callback(RequestState& state, const json& payload) {
  auto it = payload.find("callback");
  if (it == payload.end()) return;
  CallbackTask task;
  task.request_id = state.request.request_id;
  task.endpoint = it->at("endpoint").get<std::string>();
  task.idempotency_key = it->at("idempotency_key").get<std::string>();
  task.next_attempt_at = timestamp_field(*it, "next_attempt_at");
  state.callback = std::move(task);
}

CallbackTask& require_callback(RequestState& state) {
  if (!state.callback) {
    throw ProjectionError("callback event without a callback task for " +
                          state.request.request_id);
  }
  return *state.callback;
}

}  // namespace

std::string_view to_string(Status status) {
  switch (status) {
    case Status::Received: return "received";
    case Status::AutoResolved: return "auto_resolved";
    case Status::AwaitingHuman: return "awaiting_human";
    case Status::Resolved: return "resolved";
    case Status::Expired: return "expired";
  }
  return "received";
}

std::optional<Status> parse_status(std::string_view text) {
  for (auto s : {Status::Received, Status::AutoResolved, Status::AwaitingHuman, Status::Resolved,
                 Status::Expired}) {
    if (to_string(s) == text) return s;
  }
  return std::nullopt;
}

bool is_legal_transition(Status from, Status to) {
  switch (from) {
    case Status::Received:
      return to == Status::AutoResolved || to == Status::AwaitingHuman;
    case Status::AwaitingHuman:
      return to == Status::Resolved || to == Status::AwaitingHuman || to == Status::Expired;
    default:
      return false;
  }
}

json to_json(const CallbackTask& task) {
  return {{"request_id", task.request_id},
          {"endpoint", task.endpoint},
          {"idempotency_key", task.idempotency_key},
          {"attempts", task.attempts},
          {"next_attempt_at", format_iso8601(task.next_attempt_at)},
          {"delivered", task.delivered},
          {"parked", task.parked}};
}

RequestState state_from_submitted(const AuditRecord& record) {
  if (record.event != AuditEvent::Submitted) {
    throw ProjectionError("request " + record.request_id + " does not start with submitted");
  }
  RequestState state;
  state.request = request_from_json(record.payload.at("request"));
  state.signature = record.payload.value("signature", std::string{});
  state.status = Status::Received;
  state.history.push_back({Status::Received, record.ts});
  return state;
}

void apply_event(RequestState& state, const AuditRecord& record) {
  const json& p = record.payload;
  switch (record.event) {
    case AuditEvent::Submitted:
      throw ProjectionError("duplicate submitted event for " + record.request_id);

    case AuditEvent::Evaluated: {
      if (state.status != Status::Received) {
        throw ProjectionError("evaluated event after evaluation for " + record.request_id);
      }
      state.disposition = disposition_from_json(p.at("disposition"));
      state.participants = p.value("participants", std::vector<std::string>{});
      if (auto it = p.find("deadline"); it != p.end()) state.deadline = timestamp_field(p, "deadline");
      if (p.value("status", std::string{}) == "awaiting_human") {
        transition(state, Status::AwaitingHuman, record.ts);
      }
      break;
    }

    case AuditEvent::Delivered:
      state.deliveries.push_back(channel::delivery_from_json(p.at("delivery")));
      break;

    case AuditEvent::Responded: {
      if (state.status != Status::AwaitingHuman) {
        throw ProjectionError("response to a request that is not awaiting a human: " +
                              record.request_id);
      }
      if (auto it = p.find("enrichment"); it != p.end()) {
        for (const auto& [name, value] : it->items()) {
          if (auto scalar = scalar_from_json(value)) state.request.facts[name] = *scalar;
        }
      }
      if (p.value("requeued", false)) {
        state.defer_count = p.at("defer_count").get<int>();
        if (p.contains("deadline")) state.deadline = timestamp_field(p, "deadline");
        transition(state, Status::AwaitingHuman, record.ts);
      }
      break;
    }

    case AuditEvent::Resolved: {
      auto to = parse_status(p.at("status").get<std::string>());
      if (!to || (*to != Status::Resolved && *to != Status::AutoResolved)) {
        throw ProjectionError("resolved event with bad status for " + record.request_id);
      }
      transition(state, *to, record.ts);
      state.resolution = resolution_from_json(p.at("resolution"));
      start_callback(state, p);
      break;
    }

    case AuditEvent::Expired:
      transition(state, Status::Expired, record.ts);
      start_callback(state, p);
      break;

    case AuditEvent::CallbackAttempted: {
      auto& task = require_callback(state);
      task.attempts = p.at("attempt").get<int>();
      if (p.contains("next_attempt_at")) task.next_attempt_at = timestamp_field(p, "next_attempt_at");
      break;
    }

    case AuditEvent::CallbackDelivered:
      require_callback(state).delivered = true;
      break;

    case AuditEvent::CallbackParked:
      require_callback(state).parked = true;
      break;

    case AuditEvent::OrgReloaded:
      break;
  }
}

std::map<std::string, RequestState, std::less<>> replay(std::span<const AuditRecord> log) {
  std::map<std::string, RequestState, std::less<>> states;
  for (const AuditRecord& record : log) {
    if (record.request_id.empty()) continue;
    if (record.event == AuditEvent::Submitted) {
      if (states.count(record.request_id)) {
        throw ProjectionError("duplicate request id " + record.request_id);
      }
      states.emplace(record.request_id, state_from_submitted(record));
      continue;
    }
    auto it = states.find(record.request_id);
    if (it == states.end()) {
      throw ProjectionError("event for unknown request " + record.request_id);
    }
    apply_event(it->second, record);
  }
  return states;
}

json decision_body(const RequestState& state, std::chrono::milliseconds retry_after) {
  json history = json::array();
  for (const auto& entry : state.history) {
    history.push_back(
        {{"status", std::string(to_string(entry.status))}, {"at", format_iso8601(entry.at)}});
  }
  json body = {{"request_id", state.request.request_id},
               {"status", std::string(to_string(state.status))},
               {"defer_count", state.defer_count},
               {"history", std::move(history)}};
  if (state.disposition) body["disposition_reason"] = state.disposition->reason;
  if (state.resolution) {
    body["resolution"] = to_json(*state.resolution);
    body["decided_by"] = std::string(to_string(state.resolution->decided_by));
    if (state.resolution->user_id) body["user_id"] = *state.resolution->user_id;
  }
  if (!is_terminal(state.status)) body["retry_after_ms"] = retry_after.count();
  return body;
}

std::string idempotency_key(std::string_view request_id, Status status,
                            const std::optional<Resolution>& resolution) {
  json content = {{"status", std::string(to_string(status))},
                  {"resolution", resolution ? to_json(*resolution) : json(nullptr)}};
  return std::string(request_id) + ":" + detail::to_hex(detail::fnv1a64(content.dump()));
}

json callback_body(const RequestState& state) {
  json body = {{"request_id", state.request.request_id},
               {"status", std::string(to_string(state.status))},
               {"resolution", state.resolution ? to_json(*state.resolution) : json(nullptr)}};
  if (state.callback) body["idempotency_key"] = state.callback->idempotency_key;
  return body;
}

}  // namespace hitl::service
