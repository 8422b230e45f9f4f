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

#include "hitl/resolution.hpp"
#include "hitl/time.hpp"
#include "hitl/types.hpp"

namespace hitl {
namespace {

TEST(Scalar, JsonConversion) {
  EXPECT_EQ(scalar_from_json(json(3)), Scalar{3.0});
  EXPECT_EQ(scalar_from_json(json("x")), Scalar{std::string("x")});
  EXPECT_EQ(scalar_from_json(json(true)), Scalar{true});
  EXPECT_FALSE(scalar_from_json(json::object()));
  EXPECT_FALSE(scalar_from_json(json::array()));
  EXPECT_FALSE(scalar_from_json(json(nullptr)));
  EXPECT_EQ(scalar_to_json(Scalar{50000.0}).dump(), "50000");
  EXPECT_EQ(scalar_to_json(Scalar{0.25}).dump(), "0.25");
}

TEST(Scalar, EqualityIsTypeStrict) {
  EXPECT_TRUE(scalar_equal(Scalar{1.0}, Scalar{1.0}));
  EXPECT_FALSE(scalar_equal(Scalar{1.0}, Scalar{std::string("1")}));
  EXPECT_FALSE(scalar_equal(Scalar{1.0}, Scalar{true}));
}

TEST(Enums, WireNamesRoundTrip) {
  for (auto u : {Urgency::Low, Urgency::Normal, Urgency::Realtime}) {
    EXPECT_EQ(parse_urgency(to_string(u)), u);
  }
  for (auto k : kAllChannelKinds) EXPECT_EQ(parse_channel_kind(to_string(k)), k);
  EXPECT_EQ(to_string(ChannelKind::EmailStub), "email_stub");
  for (auto o : {Outcome::Approve, Outcome::Reject, Outcome::Modify, Outcome::Defer}) {
    EXPECT_EQ(parse_outcome(to_string(o)), o);
  }
  EXPECT_FALSE(parse_urgency("urgent"));
}

TEST(Time, Iso8601RoundTrip) {
  const Timestamp t{std::chrono::milliseconds{1767225600123}};
  EXPECT_EQ(format_iso8601(t), "2026-01-01T00:00:00.123Z");
  EXPECT_EQ(parse_iso8601("2026-01-01T00:00:00.123Z"), t);
  EXPECT_EQ(parse_iso8601("2026-01-01T00:00:00Z"),
            Timestamp{std::chrono::milliseconds{1767225600000}});
  EXPECT_FALSE(parse_iso8601("2026-01-01T00:00:00+01:00"));
  EXPECT_FALSE(parse_iso8601("yesterday"));
}

TEST(Time, ManualClockOnlyMovesWhenTold) {
  ManualClock clock;
  const auto t0 = clock.now();
  EXPECT_EQ(clock.now(), t0);
  clock.advance(std::chrono::milliseconds{1500});
  EXPECT_EQ(clock.now() - t0, std::chrono::milliseconds{1500});
}

TEST(Resolution, JsonRoundTrip) {
  Resolution r;
  r.outcome = Outcome::Modify;
  r.modified_action = json{{"name", "refund"}, {"fields", {{"amount", 9000}}}};
  r.enrichment = {{"ticket", std::string("T-9")}};
  r.decided_by = DecidedBy::Human;
  r.user_id = "bob";
  r.decided_at = Timestamp{std::chrono::milliseconds{1767225600000}};
  r.comment = "cap it";
  EXPECT_EQ(resolution_from_json(to_json(r)), r);
}

}  // namespace
}  // namespace hitl
