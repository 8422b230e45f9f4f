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

#include "hitl/routing.hpp"

#include <algorithm>

namespace hitl::channel {

RoutingPolicy RoutingPolicy::defaults() {
  return RoutingPolicy({
      {Urgency::Realtime, {ChannelKind::Webhook, ChannelKind::Dashboard}},
      {Urgency::Low, {ChannelKind::EmailStub, ChannelKind::Dashboard}},
      {std::nullopt, {ChannelKind::Dashboard}},
  });
}

RoutingPolicy RoutingPolicy::load(const json& document) {
  if (!document.is_object() || !document.contains("rules") || !document["rules"].is_array()) {
    throw RoutingError("routing policy needs a rules array");
  }
  std::vector<RoutingRule> rules;
  for (const auto& entry : document["rules"]) {
    if (!entry.is_object() || !entry.contains("match") || !entry["match"].is_string()) {
      throw RoutingError("routing rule needs a string match");
    }
    RoutingRule rule;
    const auto match = entry["match"].get<std::string>();
    if (match != "*") {
      rule.match = parse_urgency(match);
      if (!rule.match) throw RoutingError("unknown urgency '" + match + "' in routing rule");
    }
    if (!entry.contains("channel_order") || !entry["channel_order"].is_array() ||
        entry["channel_order"].empty()) {
      throw RoutingError("routing rule needs a non-empty channel_order");
    }
    for (const auto& name : entry["channel_order"]) {
      auto kind = name.is_string() ? parse_channel_kind(name.get<std::string>()) : std::nullopt;
      if (!kind) throw RoutingError("unknown channel kind " + name.dump());
      rule.channel_order.push_back(*kind);
    }
    rules.push_back(std::move(rule));
  }

  for (Urgency urgency : {Urgency::Low, Urgency::Normal, Urgency::Realtime}) {
    const bool covered = std::any_of(rules.begin(), rules.end(), [&](const RoutingRule& r) {
      return !r.match || *r.match == urgency;
    });
    if (!covered) {
      throw RoutingError("no routing rule matches urgency '" + std::string(to_string(urgency)) +
                         "'; add a \"*\" fallback");
    }
  }
  return RoutingPolicy(std::move(rules));
}

json RoutingPolicy::to_json() const {
  json rules = json::array();
  for (const auto& rule : rules_) {
    json order = json::array();
    for (auto kind : rule.channel_order) order.push_back(std::string(to_string(kind)));
    rules.push_back({{"match", rule.match ? std::string(to_string(*rule.match)) : "*"},
                     {"channel_order", order}});
  }
  return {{"rules", rules}};
}

std::vector<ChannelKind> select_channel(Urgency urgency, const org::User& user,
                                        const RoutingPolicy& policy) {
  std::vector<ChannelKind> out;
  for (const auto& rule : policy.rules()) {
    if (rule.match && *rule.match != urgency) continue;
    for (ChannelKind kind : rule.channel_order) {
      if (kind == ChannelKind::Dashboard) break;
      if (!user.has_address(kind)) continue;
      if (std::find(out.begin(), out.end(), kind) == out.end()) out.push_back(kind);
    }
    break;
  }
  out.push_back(ChannelKind::Dashboard);
  return out;
}

}  // namespace hitl::channel
