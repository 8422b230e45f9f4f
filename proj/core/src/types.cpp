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

#include "hitl/types.hpp"

#include <cmath>
#include <sstream>

namespace hitl {

std::optional<Scalar> scalar_from_json(const json& value) {
  if (value.is_boolean()) return Scalar{value.get<bool>()};
  if (value.is_number()) return Scalar{value.get<double>()};
  if (value.is_string()) return Scalar{value.get<std::string>()};
  return std::nullopt;
}

json scalar_to_json(const Scalar& value) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          constexpr double kExactIntLimit = 9007199254740992.0;  // 2^53
          if (std::isfinite(v) && std::trunc(v) == v && std::fabs(v) < kExactIntLimit) {
            return static_cast<std::int64_t>(v);
          }
          return v;
        } else {
          return v;
        }
      },
      value);
}

json facts_to_json(const FactMap& facts) {
  json out = json::object();
  for (const auto& [name, value] : facts) out[name] = scalar_to_json(value);
  return out;
}

bool is_numeric(const Scalar& value) { return std::holds_alternative<double>(value); }

bool scalar_equal(const Scalar& lhs, const Scalar& rhs) {
  if (lhs.index() != rhs.index()) return false;
  return lhs == rhs;
}

std::string scalar_to_string(const Scalar& value) { return scalar_to_json(value).dump(); }

std::string_view to_string(Urgency urgency) {
  switch (urgency) {
    case Urgency::Low: return "low";
    case Urgency::Normal: return "normal";
    case Urgency::Realtime: return "realtime";
  }
  return "normal";
}

std::optional<Urgency> parse_urgency(std::string_view text) {
  if (text == "low") return Urgency::Low;
  if (text == "normal") return Urgency::Normal;
  if (text == "realtime") return Urgency::Realtime;
  return std::nullopt;
}

std::string_view to_string(ChannelKind kind) {
  switch (kind) {
    case ChannelKind::Dashboard: return "dashboard";
    case ChannelKind::Webhook: return "webhook";
    case ChannelKind::EmailStub: return "email_stub";
  }
  return "dashboard";
}

std::optional<ChannelKind> parse_channel_kind(std::string_view text) {
  if (text == "dashboard") return ChannelKind::Dashboard;
  if (text == "webhook") return ChannelKind::Webhook;
  if (text == "email_stub") return ChannelKind::EmailStub;
  return std::nullopt;
}

std::string_view to_string(FieldError::Kind kind) {
  switch (kind) {
    case FieldError::Kind::MissingField: return "MissingField";
    case FieldError::Kind::TypeMismatch: return "TypeMismatch";
    case FieldError::Kind::ConfidenceOutOfRange: return "ConfidenceOutOfRange";
    case FieldError::Kind::InvalidValue: return "InvalidValue";
  }
  return "InvalidValue";
}

json to_json(const FieldError& error) {
  json out = {{"error", std::string(to_string(error.kind))}, {"field", error.field}};
  if (!error.expected.empty()) out["expected"] = error.expected;
  return out;
}

}  // namespace hitl
