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

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include <nlohmann/json.hpp>

namespace hitl {

using json = nlohmann::json;

/// A fact value. Facts are flat: nested documents belong in the proposed
/// action or task state, never in the fact map.
using Scalar = std::variant<double, std::string, bool>;

/// Fact name -> value. Ordered so every serialization is canonical.
using FactMap = std::map<std::string, Scalar, std::less<>>;

/// Returns nullopt when `value` is not a JSON number, string or boolean.
std::optional<Scalar> scalar_from_json(const json& value);

/// Integral doubles below 2^53 are written as JSON integers.
json scalar_to_json(const Scalar& value);

json facts_to_json(const FactMap& facts);

bool is_numeric(const Scalar& value);

/// Strict equality: values of different types never compare equal.
bool scalar_equal(const Scalar& lhs, const Scalar& rhs);

std::string scalar_to_string(const Scalar& value);

enum class Urgency { Low, Normal, Realtime };

std::string_view to_string(Urgency urgency);
std::optional<Urgency> parse_urgency(std::string_view text);

/// Delivery media a work item can travel over.
enum class ChannelKind { Dashboard, Webhook, EmailStub };

std::string_view to_string(ChannelKind kind);
std::optional<ChannelKind> parse_channel_kind(std::string_view text);

inline constexpr ChannelKind kAllChannelKinds[] = {
    ChannelKind::Dashboard, ChannelKind::Webhook, ChannelKind::EmailStub};

/// Field-level validation failure for documents arriving over the wire.
struct FieldError {
  enum class Kind { MissingField, TypeMismatch, ConfidenceOutOfRange, InvalidValue };

  Kind kind;
  std::string field;
  std::string expected;

  friend bool operator==(const FieldError&, const FieldError&) = default;
};

std::string_view to_string(FieldError::Kind kind);
json to_json(const FieldError& error);

}  // namespace hitl
