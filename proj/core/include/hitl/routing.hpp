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
#include <stdexcept>
#include <vector>

#include "hitl/org_model.hpp"
#include "hitl/types.hpp"

namespace hitl::channel {

struct RoutingRule {
  /// nullopt matches any urgency ("*").
  std::optional<Urgency> match;
  std::vector<ChannelKind> channel_order;

  friend bool operator==(const RoutingRule&, const RoutingRule&) = default;
};

class RoutingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ordered urgency -> channel preference rules. Every urgency is guaranteed to
/// match at least one rule.
class RoutingPolicy {
 public:
  /// realtime -> [webhook, dashboard], low -> [email_stub, dashboard],
  /// * -> [dashboard].
  static RoutingPolicy defaults();

  /// Parses {"rules": [{"match": "realtime"|"normal"|"low"|"*",
  /// "channel_order": [...]}]}. Throws RoutingError.
  static RoutingPolicy load(const json& document);

  const std::vector<RoutingRule>& rules() const { return rules_; }
  json to_json() const;

 private:
  explicit RoutingPolicy(std::vector<RoutingRule> rules) : rules_(std::move(rules)) {}
  std::vector<RoutingRule> rules_;
};

/// Channel preference list for one participant: the first matching rule's
/// order, restricted to channels the user has an address for, truncated
/// after dashboard and always ending in dashboard (every user has an inbox).
std::vector<ChannelKind> select_channel(Urgency urgency, const org::User& user,
                                        const RoutingPolicy& policy);

}  // namespace hitl::channel
