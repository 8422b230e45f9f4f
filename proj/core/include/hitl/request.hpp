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

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hitl/rubric.hpp"
#include "hitl/time.hpp"
#include "hitl/types.hpp"

namespace hitl {

/// The action an agent wants to take: a name plus typed fields.
/// Wire form: {"name": "...", "fields": {...}}.
struct ProposedAction {
  std::string name;
  json fields = json::object();

  friend bool operator==(const ProposedAction&, const ProposedAction&) = default;
};

json to_json(const ProposedAction& action);

/// A gated decision delegated by an agent.
struct HitlRequest {
  std::string request_id;  // assigned by the service
  std::string agent_id;
  json task_state;  // string or object; display only
  ProposedAction proposed_action;
  FactMap facts;
  std::optional<double> confidence;
  std::vector<std::string> constraints;
  Rubric rubric;
  Urgency urgency = Urgency::Normal;
  std::optional<std::string> callback_endpoint;
  Timestamp created_at{};

  friend bool operator==(const HitlRequest&, const HitlRequest&) = default;
};

using ValidationResult = std::variant<HitlRequest, std::vector<FieldError>>;

/// Normalizes an incoming request document. Collects every field error rather
/// than stopping at the first. `request_id` and `created_at` in the input are
/// ignored; the service assigns them.
ValidationResult validate_request(const json& raw);

/// Wire form, including request_id and created_at.
json to_json(const HitlRequest& request);

/// Inverse of to_json for documents this service wrote itself.
/// Throws std::invalid_argument if the document does not validate.
HitlRequest request_from_json(const json& doc);

}  // namespace hitl
