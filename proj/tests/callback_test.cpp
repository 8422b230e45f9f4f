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

#include "hitl/service.hpp"
#include "test_support.hpp"

namespace hitl::service {
namespace {

using hitl::testing::gated_request;
using hitl::testing::Harness;
using namespace std::chrono_literals;

const std::string kEndpoint = "http://agent.test/callback";

json with_callback(json body) {
  body["callback_endpoint"] = kEndpoint;
  return body;
}

std::vector<audit::AuditRecord> records_of(const Harness& h, const std::string& id,
                                           audit::AuditEvent event) {
  std::vector<audit::AuditRecord> out;
  for (const auto& r : h.service->event_log().for_request(id)) {
    if (r.event == event) out.push_back(r);
  }
  return out;
}

TEST(Callback, DeliveredOnFirstAttempt) {
  Harness h;
  const auto id = h.submit(with_callback(gated_request()));
  EXPECT_EQ(h.service->dispatch_callbacks(), 0u);  // nothing terminal yet
  ASSERT_EQ(h.respond(id, "bob", "approve").status, 200);

  EXPECT_EQ(h.service->dispatch_callbacks(), 1u);
  auto calls = h.transport->calls_to(kEndpoint);
  ASSERT_EQ(calls.size(), 1u);
  EXPECT_EQ(calls[0].body["request_id"], id);
  EXPECT_EQ(calls[0].body["status"], "resolved");
  EXPECT_EQ(calls[0].body["resolution"]["outcome"], "approve");
  EXPECT_FALSE(calls[0].body["idempotency_key"].get<std::string>().empty());

  const auto cb = *h.service->snapshot(id)->callback;
  EXPECT_TRUE(cb.delivered);
  EXPECT_EQ(cb.attempts, 1);
  EXPECT_EQ(h.service->dispatch_callbacks(), 0u);
  EXPECT_EQ(h.transport->calls_to(kEndpoint).size(), 1u);
}

TEST(Callback, RetriesWithExponentialBackoff) {
  auto cfg = hitl::testing::test_config();
  cfg.callback.base_delay = 1000ms;
  cfg.callback.factor = 2.0;
  Harness h(cfg);
  h.transport->script(kEndpoint, {500, 0});
  const auto id = h.submit(with_callback(hitl::testing::auto_approve_request()));

  EXPECT_EQ(h.service->dispatch_callbacks(), 0u);  // attempt 1 fails
  h.clock->advance(999ms);
  EXPECT_EQ(h.service->dispatch_callbacks(), 0u);  // not due yet
  EXPECT_EQ(h.transport->calls_to(kEndpoint).size(), 1u);
  h.clock->advance(1ms);
  EXPECT_EQ(h.service->dispatch_callbacks(), 0u);  // attempt 2 refused
  h.clock->advance(1999ms);
  EXPECT_EQ(h.service->dispatch_callbacks(), 0u);
  h.clock->advance(1ms);
  EXPECT_EQ(h.service->dispatch_callbacks(), 1u);  // attempt 3 succeeds

  const auto attempts = records_of(h, id, audit::AuditEvent::CallbackAttempted);
  ASSERT_EQ(attempts.size(), 3u);
  for (int k = 0; k < 3; ++k) EXPECT_EQ(attempts[k].payload["attempt"], k + 1);
  EXPECT_EQ(attempts[0].payload["http_status"], 500);
  EXPECT_TRUE(attempts[1].payload.contains("error"));
  EXPECT_EQ(attempts[2].payload["ok"], true);

  // next_attempt_at - attempt time == base * factor^(k-1)
  for (int k = 0; k < 2; ++k) {
    const auto next = *parse_iso8601(attempts[k].payload["next_attempt_at"].get<std::string>());
    EXPECT_EQ(next - attempts[k].ts, 1000ms * (1 << k));
  }
  EXPECT_LT(*parse_iso8601(attempts[0].payload["next_attempt_at"].get<std::string>()),
            *parse_iso8601(attempts[1].payload["next_attempt_at"].get<std::string>()));

  const auto cb = *h.service->snapshot(id)->callback;
  EXPECT_EQ(cb.attempts, 3);
  EXPECT_TRUE(cb.delivered);
  EXPECT_EQ(records_of(h, id, audit::AuditEvent::CallbackDelivered).size(), 1u);
}

TEST(Callback, ParksAfterMaxAttempts) {
  auto cfg = hitl::testing::test_config();
  cfg.callback.base_delay = 10ms;
  Harness h(cfg);
  h.transport->set_default(503);
  const auto id = h.submit(with_callback(hitl::testing::auto_approve_request()));
  for (int i = 0; i < 20; ++i) {
    h.service->dispatch_callbacks();
    h.clock->advance(1s);
  }
  EXPECT_EQ(h.transport->calls_to(kEndpoint).size(),
            static_cast<std::size_t>(cfg.callback.max_attempts));
  const auto cb = *h.service->snapshot(id)->callback;
  EXPECT_TRUE(cb.parked);
  EXPECT_FALSE(cb.delivered);
  ASSERT_EQ(records_of(h, id, audit::AuditEvent::CallbackParked).size(), 1u);
  // Parking does not change the decision itself.
  EXPECT_EQ(h.service->get_decision(id).body["status"], "auto_resolved");
}

TEST(Callback, IdempotencyKeyIsStableAcrossRetries) {
  auto cfg = hitl::testing::test_config();
  cfg.callback.base_delay = 1ms;
  Harness h(cfg);
  h.transport->script(kEndpoint, {500, 500});
  const auto id = h.submit(with_callback(gated_request()));
  ASSERT_EQ(h.respond(id, "dave", "reject").status, 200);
  for (int i = 0; i < 3; ++i) {
    h.service->dispatch_callbacks();
    h.clock->advance(10ms);
  }
  const auto calls = h.transport->calls_to(kEndpoint);
  ASSERT_EQ(calls.size(), 3u);
  for (const auto& c : calls) EXPECT_EQ(c.body, calls[0].body);
  const auto state = *h.service->snapshot(id);
  EXPECT_EQ(calls[0].body["idempotency_key"],
            idempotency_key(id, Status::Resolved, state.resolution));
}

TEST(Callback, ExpiryNotifiesWithNullResolution) {
  auto cfg = hitl::testing::test_config();
  cfg.awaiting_timeout = 5s;
  Harness h(cfg);
  const auto id = h.submit(with_callback(gated_request()));
  h.clock->advance(6s);
  ASSERT_EQ(h.service->expire_overdue(), 1u);
  ASSERT_EQ(h.service->dispatch_callbacks(), 1u);
  const auto calls = h.transport->calls_to(kEndpoint);
  ASSERT_EQ(calls.size(), 1u);
  EXPECT_EQ(calls[0].body["status"], "expired");
  EXPECT_TRUE(calls[0].body["resolution"].is_null());
  (void)id;
}

TEST(Callback, PendingWorkSurvivesRestart) {
  Harness h;
  h.transport->script(kEndpoint, {500});
  const auto id = h.submit(with_callback(hitl::testing::auto_approve_request()));
  h.service->dispatch_callbacks();
  auto copy = h.restarted();
  EXPECT_EQ(copy->snapshot(id)->callback->attempts, 1);
  h.clock->advance(h.config.callback.base_delay);
  EXPECT_EQ(copy->dispatch_callbacks(), 1u);
  EXPECT_TRUE(copy->snapshot(id)->callback->delivered);
}

}  // namespace
}  // namespace hitl::service
