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

#include "live_server.hpp"

namespace hitl::service {
namespace {

using hitl::testing::gated_request;
using hitl::testing::LiveServer;

TEST(HttpApi, SubmitPollRespond) {
  LiveServer s;
  auto [status, body] = s.post("/api/hitl/request", gated_request());
  ASSERT_EQ(status, 200);
  const auto id = body["request_id"].get<std::string>();
  EXPECT_EQ(body["status"], "awaiting_human");

  auto [pstatus, pending] = s.get("/api/hitl/pending?user_id=bob");
  ASSERT_EQ(pstatus, 200);
  ASSERT_EQ(pending["items"].size(), 1u);
  EXPECT_EQ(pending["items"][0]["request_id"], id);

  auto [dstatus, decision] = s.get("/api/hitl/get-decision?request_id=" + id);
  ASSERT_EQ(dstatus, 200);
  EXPECT_EQ(decision["status"], "awaiting_human");
  EXPECT_EQ(decision["retry_after_ms"], 50);

  auto [rstatus, responded] = s.post(
      "/api/hitl/respond", {{"request_id", id}, {"user_id", "bob"}, {"outcome", "approve"}});
  ASSERT_EQ(rstatus, 200);
  EXPECT_EQ(responded["status"], "resolved");
  EXPECT_EQ(s.post("/api/hitl/respond",
                   {{"request_id", id}, {"user_id", "dave"}, {"outcome", "approve"}})
                .first,
            409);
  EXPECT_EQ(s.get("/api/hitl/get-decision?request_id=" + id).second["status"], "resolved");
}

TEST(HttpApi, ErrorStatuses) {
  LiveServer s;
  EXPECT_EQ(s.post_raw("/api/hitl/request", "{not json").first, 400);
  EXPECT_EQ(s.post_raw("/api/hitl/request", "{not json").second["error"], "malformed_json");
  EXPECT_EQ(s.post_raw("/api/hitl/respond", "[").first, 400);
  EXPECT_EQ(s.post("/api/hitl/request", json::object()).first, 400);
  EXPECT_EQ(s.get("/api/hitl/get-decision").first, 400);
  EXPECT_EQ(s.get("/api/hitl/get-decision?request_id=hitl-77").first, 404);
  EXPECT_EQ(s.get("/api/hitl/pending").first, 400);
  EXPECT_EQ(s.get("/api/hitl/pending?user_id=ghost").first, 404);
  EXPECT_EQ(s.get("/api/hitl/suggestions?threshold=0").first, 400);
  EXPECT_EQ(s.get("/api/hitl/suggestions?threshold=abc").first, 400);
  EXPECT_EQ(s.get("/api/hitl/nope").first, 404);
}

TEST(HttpApi, DescriptorIsByteIdentical) {
  LiveServer s;
  auto c = s.client();
  auto a = c.Get("/api/hitl/descriptor");
  auto b = c.Get("/api/hitl/descriptor");
  ASSERT_TRUE(a && b);
  EXPECT_EQ(a->status, 200);
  EXPECT_EQ(a->body, b->body);
  auto doc = json::parse(a->body);
  for (const char* key : {"WHEN", "WHO", "WHAT", "WHERE"}) EXPECT_TRUE(doc.contains(key));
}

TEST(HttpApi, ReloadOrg) {
  LiveServer s;
  auto doc = hitl::testing::sample_org_json();
  doc["reporting_edges"]["carol"] = "alice";
  auto [bad, err] = s.post("/api/admin/reload-org", doc);
  EXPECT_EQ(bad, 400);
  EXPECT_EQ(err["error"], "CyclicHierarchy");
  EXPECT_EQ(s.post("/api/admin/reload-org", hitl::testing::sample_org_json()).first, 200);
}

TEST(HttpApi, AuditQueriesAndPagination) {
  LiveServer s;
  const auto id = s.post("/api/hitl/request", gated_request()).second["request_id"];
  s.post("/api/hitl/request", hitl::testing::auto_approve_request());

  auto [status, trail] = s.get("/api/hitl/audit?request_id=" + id.get<std::string>());
  ASSERT_EQ(status, 200);
  EXPECT_EQ(trail["records"][0]["event"], "submitted");

  auto [pstatus, page] = s.get("/api/hitl/audit?offset=1&limit=2");
  ASSERT_EQ(pstatus, 200);
  EXPECT_EQ(page["records"].size(), 2u);
  EXPECT_EQ(page["records"][0]["seq"], 2);
  EXPECT_EQ(page["next_offset"], 3);
  EXPECT_EQ(s.get("/api/hitl/audit?offset=x").first, 400);

  auto [sstatus, suggestions] = s.get("/api/hitl/suggestions");
  EXPECT_EQ(sstatus, 200);
  EXPECT_EQ(suggestions["threshold"], 5);
}

TEST(HttpApi, WorkItemsCarryTheRespondEndpoint) {
  auto transport = std::make_shared<hitl::testing::FakeTransport>();
  ServiceDependencies deps;
  deps.transport = transport;
  LiveServer s(LiveServer::live_config(), deps);
  s.post("/api/hitl/request", gated_request(50000, "role:finance", "realtime"));
  auto calls = transport->calls_to("http://hooks.test/erin");
  ASSERT_EQ(calls.size(), 1u);
  EXPECT_EQ(calls[0].body["respond_endpoint"], s.url() + "/api/hitl/respond");
}

}  // namespace
}  // namespace hitl::service
