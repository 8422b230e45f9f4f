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

#include <random>

#include "autonomy_log.hpp"
#include "hitl/autonomy.hpp"

namespace hitl::audit {
namespace {

using hitl::testing::LogBuilder;

TEST(AnalyzeAutonomy, FiveApprovalsSuggestAutomation) {
  LogBuilder b;
  for (int i = 0; i < 5; ++i) b.decide("refund#1", "approve");
  auto out = analyze_autonomy(b.records(), 5);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].kind, SuggestionKind::AutomateCandidate);
  EXPECT_EQ(out[0].signature, "refund#1");
  EXPECT_EQ(out[0].evidence.approvals, 5u);
  EXPECT_EQ(out[0].window, 5u);
}

TEST(AnalyzeAutonomy, InterleavedRejectSuppressesAutomation) {
  LogBuilder b;
  for (const char* o : {"approve", "approve", "reject", "approve", "approve"}) {
    b.decide("refund#1", o);
  }
  EXPECT_TRUE(analyze_autonomy(b.records(), 5).empty());

  // Five approvals, then one reject slipped in before the last approval.
  LogBuilder c;
  for (const char* o : {"approve", "approve", "approve", "approve", "reject", "approve"}) {
    c.decide("refund#1", o);
  }
  for (const auto& s : analyze_autonomy(c.records(), 5)) {
    EXPECT_NE(s.kind, SuggestionKind::AutomateCandidate);
  }
}

TEST(AnalyzeAutonomy, FrequentOverridesSuggestConstraint) {
  LogBuilder b;
  for (const char* o : {"reject", "modify", "approve", "reject"}) b.decide("wire#2", o, true, true);
  auto out = analyze_autonomy(b.records(), 4);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].kind, SuggestionKind::ConstraintCandidate);
  EXPECT_EQ(out[0].evidence, (Evidence{1, 2, 1, 3}));
}

TEST(AnalyzeAutonomy, OnlyHumanDecisionsCount) {
  LogBuilder b;
  for (int i = 0; i < 5; ++i) b.decide("x#1", "approve", false);
  for (int i = 0; i < 4; ++i) b.decide("x#1", "approve");
  b.open("x#1");
  EXPECT_TRUE(analyze_autonomy(b.records(), 5).empty());
  b.decide("x#1", "approve");
  EXPECT_EQ(analyze_autonomy(b.records(), 5).size(), 1u);
}

TEST(AnalyzeAutonomy, ThresholdMustBePositive) {
  LogBuilder b;
  EXPECT_THROW(analyze_autonomy(b.records(), 0), std::invalid_argument);
}

TEST(AnalyzeAutonomy, DeterministicAndSideEffectFree) {
  LogBuilder b;
  for (int i = 0; i < 6; ++i) b.decide(i % 2 ? "a#1" : "b#2", i % 3 ? "approve" : "reject");
  const auto before = b.records();
  EXPECT_EQ(analyze_autonomy(b.records(), 3), analyze_autonomy(b.records(), 3));
  EXPECT_EQ(b.records(), before);
}

TEST(AnalyzeAutonomy, MatchesRecountOnRandomLogs) {
  std::mt19937 rng(2024);
  const char* outcomes[] = {"approve", "approve", "approve", "reject", "modify"};
  int with_suggestions = 0;
  for (int trial = 0; trial < 300; ++trial) {
    LogBuilder b;
    const std::size_t n = 1 + rng() % 6;
    const int sigs = 1 + static_cast<int>(rng() % 4);
    const double approve_bias = (rng() % 100) / 100.0;
    while (b.records().size() + 3 <= 200) {
      const auto sig = "s" + std::to_string(rng() % sigs);
      if (rng() % 10 == 0) {
        b.open(sig);
        continue;
      }
      const bool biased = (rng() % 100) / 100.0 < approve_bias;
      b.decide(sig, biased ? "approve" : outcomes[rng() % 5], rng() % 5 != 0, rng() % 2 == 0);
      if (rng() % 15 == 0) break;
    }
    // Shuffle interleaving a little: move some resolved records later.
    auto& recs = b.mutable_records();
    for (std::size_t i = 0; i + 1 < recs.size(); ++i) {
      if (recs[i].event == AuditEvent::Resolved && recs[i + 1].event == AuditEvent::Submitted &&
          rng() % 3 == 0) {
        std::swap(recs[i], recs[i + 1]);
      }
    }
    ASSERT_LE(recs.size(), 200u);
    const auto got = analyze_autonomy(recs, n);
    EXPECT_EQ(got, hitl::testing::recount_autonomy(recs, n)) << "trial " << trial;
    with_suggestions += !got.empty();
  }
  EXPECT_GT(with_suggestions, 30);
}

}  // namespace
}  // namespace hitl::audit
