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

#include <gtest/gtest.h>

#include <algorithm>

#include "hitl/routing.hpp"

namespace hitl::channel {
namespace {

org::User user_with(std::initializer_list<ChannelKind> kinds) {
  org::User u{"u", "U", {}};
  for (auto k : kinds) u.channel_addresses[k] = "addr";
  return u;
}

TEST(SelectChannel, RealtimeGoesToWebhookFirst) {
  auto policy = RoutingPolicy::defaults();
  EXPECT_EQ(select_channel(Urgency::Realtime, user_with({ChannelKind::Webhook}), policy),
            (std::vector<ChannelKind>{ChannelKind::Webhook, ChannelKind::Dashboard}));
}

TEST(SelectChannel, MissingAddressFallsBackToDashboard) {
  auto policy = RoutingPolicy::defaults();
  EXPECT_EQ(select_channel(Urgency::Low, user_with({}), policy),
            std::vector<ChannelKind>{ChannelKind::Dashboard});
}

TEST(SelectChannel, WildcardRule) {
  auto policy = RoutingPolicy::load(json::parse(
      R"({"rules": [{"match": "*", "channel_order": ["dashboard"]}]})"));
  EXPECT_EQ(select_channel(Urgency::Normal, user_with({ChannelKind::Webhook}), policy),
            std::vector<ChannelKind>{ChannelKind::Dashboard});
}

TEST(RoutingPolicy, LoadRequiresCoverage) {
  EXPECT_THROW(RoutingPolicy::load(json::parse(
                   R"({"rules": [{"match": "low", "channel_order": ["email_stub"]}]})")),
               RoutingError);
  EXPECT_THROW(RoutingPolicy::load(json::parse(
                   R"({"rules": [{"match": "*", "channel_order": ["pigeon"]}]})")),
               RoutingError);
  EXPECT_THROW(RoutingPolicy::load(json::parse(R"({"rules": [{"match": "*", "channel_order": []}]})")),
               RoutingError);
  auto explicit_all = RoutingPolicy::load(json::parse(R"({"rules": [
      {"match": "low", "channel_order": ["email_stub"]},
      {"match": "normal", "channel_order": ["dashboard"]},
      {"match": "realtime", "channel_order": ["webhook"]}]})"));
  EXPECT_EQ(explicit_all.rules().size(), 3u);
  EXPECT_EQ(RoutingPolicy::load(explicit_all.to_json()).to_json(), explicit_all.to_json());
}

// Reference: first matching rule's order, restricted to channels the user can
// receive on, cut after the first dashboard, dashboard appended if absent.
std::vector<ChannelKind> expected_channels(Urgency urgency, const org::User& user,
                                           const std::vector<RoutingRule>& rules) {
  std::vector<ChannelKind> out;
  for (const auto& rule : rules) {
    if (rule.match.has_value() && *rule.match != urgency) continue;
    for (auto k : rule.channel_order) {
      if (k != ChannelKind::Dashboard && !user.has_address(k)) continue;
      if (std::find(out.begin(), out.end(), k) != out.end()) continue;
      out.push_back(k);
      if (k == ChannelKind::Dashboard) return out;
    }
    break;
  }
  out.push_back(ChannelKind::Dashboard);
  return out;
}

TEST(SelectChannel, ExhaustiveOverUrgencyAndAddressSubsets) {
  std::vector<ChannelKind> order(std::begin(kAllChannelKinds), std::end(kAllChannelKinds));
  std::vector<std::vector<ChannelKind>> permutations;
  std::sort(order.begin(), order.end());
  do {
    permutations.push_back(order);
  } while (std::next_permutation(order.begin(), order.end()));
  // Every prefix of every permutation is a legal channel_order too.
  std::vector<std::vector<ChannelKind>> orders;
  for (const auto& p : permutations) {
    for (std::size_t len = 1; len <= p.size(); ++len) orders.emplace_back(p.begin(), p.begin() + len);
  }
  std::sort(orders.begin(), orders.end());
  orders.erase(std::unique(orders.begin(), orders.end()), orders.end());
  ASSERT_EQ(orders.size(), 15u);

  std::size_t cases = 0;
  for (const auto& low : orders) {
    for (const auto& realtime : orders) {
      for (const auto& fallback : {std::vector<ChannelKind>{ChannelKind::Dashboard},
                                   std::vector<ChannelKind>{ChannelKind::EmailStub,
                                                            ChannelKind::Webhook}}) {
        json doc = {{"rules", json::array()}};
        auto add = [&](const char* match, const std::vector<ChannelKind>& kinds) {
          json names = json::array();
          for (auto k : kinds) names.push_back(std::string(to_string(k)));
          doc["rules"].push_back({{"match", match}, {"channel_order", names}});
        };
        add("low", low);
        add("realtime", realtime);
        add("*", fallback);
        const auto policy = RoutingPolicy::load(doc);

        for (int mask = 0; mask < 4; ++mask) {
          org::User user{"u", "U", {}};
          if (mask & 1) user.channel_addresses[ChannelKind::Webhook] = "http://h";
          if (mask & 2) user.channel_addresses[ChannelKind::EmailStub] = "u@x";
          for (auto urgency : {Urgency::Low, Urgency::Normal, Urgency::Realtime}) {
            const auto got = select_channel(urgency, user, policy);
            ASSERT_EQ(got, expected_channels(urgency, user, policy.rules()));
            ASSERT_FALSE(got.empty());
            ASSERT_EQ(got.back(), ChannelKind::Dashboard);
            ++cases;
          }
        }
      }
    }
  }
  EXPECT_EQ(cases, 15u * 15u * 2u * 4u * 3u);
}

}  // namespace
}  // namespace hitl::channel
