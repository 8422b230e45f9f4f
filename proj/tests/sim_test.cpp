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

#include "hitl/sim/callback_receiver.hpp"
#include "hitl/sim/report.hpp"
#include "hitl/sim/runner.hpp"
#include "hitl/sim/scenario.hpp"
#include "live_server.hpp"

namespace hitl::sim {
namespace {

using hitl::testing::LiveServer;
using namespace std::chrono_literals;

json gated_scenario_request(const char* order = "G-{{instance}}") {
  auto req = hitl::testing::gated_request();
  req["proposed_action"]["fields"]["order"] = order;
  return req;
}

TEST(Scenario, ParsesDocument) {
  auto spec = scenario_from_json(json::parse(R"({
    "name": "s", "repetitions": 3,
    "requests": [{"mode": "callback", "request": {"agent_id": "a"}}, {"request": {}}],
    "responder_script": [{"delay_ms": 250, "user_id": "bob", "outcome": "modify", "request": 0,
                          "modified_action": {"name": "x"}, "comment": "c"}]
  })"));
  EXPECT_EQ(spec.name, "s");
  EXPECT_EQ(spec.repetitions, 3);
  ASSERT_EQ(spec.requests.size(), 2u);
  EXPECT_EQ(spec.requests[0].mode, Mode::Callback);
  EXPECT_EQ(spec.requests[1].mode, Mode::Poll);
  ASSERT_EQ(spec.responder_script.size(), 1u);
  const auto& d = spec.responder_script[0];
  EXPECT_EQ(d.delay, 250ms);
  EXPECT_EQ(d.request, std::optional<std::size_t>(0));
  EXPECT_EQ(d.modified_action, std::optional<json>(json{{"name", "x"}}));

  EXPECT_THROW(scenario_from_json(json::array()), ScenarioError);
  EXPECT_THROW(scenario_from_json({{"requests", {{{"mode", "carrier_pigeon"}, {"request", {}}}}}}),
               ScenarioError);
  EXPECT_THROW(scenario_from_json(
                   {{"requests", {{{"request", json::object()}}}},
                    {"responder_script", {{{"user_id", "bob"}, {"outcome", "approve"},
                                           {"request", 4}}}}}),
               ScenarioError);
  EXPECT_THROW(load_scenario("/nonexistent/scenario.json"), ScenarioError);
}

TEST(Scenario, InstantiateExpandsPlaceholders) {
  const json templ = {{"a", "r{{rep}}-i{{index}}-n{{instance}}"},
                      {"nested", {{"list", {"{{instance}}", 3}}}},
                      {"n", 1.5}};
  const auto out = instantiate(templ, 2, 1, 7);
  EXPECT_EQ(out["a"], "r2-i1-n7");
  EXPECT_EQ(out["nested"]["list"][0], "7");
  EXPECT_EQ(out["nested"]["list"][1], 3);
  EXPECT_EQ(out["n"], 1.5);
}

TEST(Report, RatiosAndFormatting) {
  ScenarioReport empty{"empty", {}};
  EXPECT_FALSE(empty.autonomy_ratio().has_value());
  EXPECT_EQ(report_to_json(empty)["summary"]["autonomy_ratio"], "n/a");
  EXPECT_NE(emit_report(empty, ReportFormat::Text).find("n/a"), std::string::npos);

  ScenarioReport r{"mix", {}};
  for (int i = 0; i < 4; ++i) {
    RequestResult res;
    res.instance = i;
    res.request_id = "hitl-" + std::to_string(i);
    res.status = i < 3 ? "auto_resolved" : "resolved";
    res.terminal = true;
    res.latency_ms = 10.0 * (i + 1);
    r.results.push_back(res);
  }
  EXPECT_DOUBLE_EQ(*r.autonomy_ratio(), 0.75);
  EXPECT_TRUE(r.all_terminal());
  const auto doc = report_to_json(r);
  EXPECT_EQ(doc["summary"]["autonomy_ratio"], 0.75);
  EXPECT_EQ(doc["summary"]["by_status"]["auto_resolved"], 3);
  EXPECT_EQ(emit_report(r, ReportFormat::Json), emit_report(r, ReportFormat::Json));
  EXPECT_EQ(json::parse(emit_report(r, ReportFormat::Json)), doc);
  r.results[0].terminal = false;
  EXPECT_FALSE(r.all_terminal());
}

TEST(CallbackReceiver, DeduplicatesByIdempotencyKey) {
  CallbackReceiver rx;
  rx.start();
  rx.fail_first(1);
  httplib::Client c("127.0.0.1", std::stoi(rx.url().substr(rx.url().rfind(':') + 1)));
  const json body = {{"request_id", "hitl-1"}, {"idempotency_key", "hitl-1:abc"},
                     {"status", "resolved"}};
  const auto path = rx.url().substr(rx.url().find('/', 7));
  EXPECT_EQ(c.Post(path, body.dump(), "application/json")->status, 500);
  EXPECT_EQ(c.Post(path, body.dump(), "application/json")->status, 200);
  EXPECT_EQ(c.Post(path, body.dump(), "application/json")->status, 200);
  EXPECT_EQ(rx.counts("hitl-1").raw, 3);
  EXPECT_EQ(rx.counts("hitl-1").effective, 1);
  EXPECT_EQ(rx.wait_for("hitl-1", 100ms), std::optional<json>(body));
  EXPECT_FALSE(rx.wait_for("hitl-2", 20ms).has_value());
  rx.stop();
}

TEST(RunScenario, AllAutoApprovable) {
  LiveServer s;
  ScenarioSpec spec;
  spec.name = "auto";
  spec.repetitions = 10;
  spec.requests.push_back({hitl::testing::auto_approve_request("agent-{{instance}}"), Mode::Poll});
  auto report = run_scenario(spec, s.url());
  ASSERT_EQ(report.total(), 10u);
  EXPECT_TRUE(report.all_terminal());
  EXPECT_DOUBLE_EQ(*report.autonomy_ratio(), 1.0);
  EXPECT_EQ(report_to_json(report)["summary"]["pending_observed"], 0);
}

TEST(RunScenario, PollModeWaitsForScriptedResponder) {
  LiveServer s;
  ScenarioSpec spec;
  spec.name = "gated";
  spec.requests.push_back({gated_scenario_request(), Mode::Poll});
  spec.responder_script.push_back({1000ms, "bob", "approve", 0, {}, {}, {}});
  RunOptions opts;
  opts.receiver_enabled = false;
  auto report = run_scenario(spec, s.url(), opts);
  ASSERT_EQ(report.total(), 1u);
  const auto& r = report.results[0];
  EXPECT_EQ(r.status, "resolved");
  EXPECT_EQ(r.outcome, std::optional<std::string>("approve"));
  EXPECT_EQ(r.decided_by, std::optional<std::string>("human"));
  EXPECT_GE(r.polls, 1);
  EXPECT_TRUE(r.awaiting_observed);
  EXPECT_GE(r.latency_ms, 1000.0);
  EXPECT_DOUBLE_EQ(*report.autonomy_ratio(), 0.0);
}

TEST(RunScenario, CallbackModeSurvivesInjectedFailures) {
  LiveServer s;
  ScenarioSpec spec;
  spec.name = "cb";
  spec.requests.push_back({gated_scenario_request(), Mode::Callback});
  spec.requests.push_back({hitl::testing::auto_approve_request(), Mode::Callback});
  spec.responder_script.push_back({200ms, "dave", "reject", 0, {}, {}, std::string("no")});
  RunOptions opts;
  opts.inject_callback_failures = 2;
  opts.timeout = 20s;
  auto report = run_scenario(spec, s.url(), opts);
  ASSERT_EQ(report.total(), 2u);
  EXPECT_TRUE(report.all_terminal());
  EXPECT_EQ(report.results[0].outcome, std::optional<std::string>("reject"));
  for (const auto& r : report.results) {
    EXPECT_EQ(r.callbacks_effective, 1) << r.request_id;
    EXPECT_EQ(r.callbacks_raw, 3) << r.request_id;
  }
}

TEST(RunScenario, ModesAgreeOnOutcomes) {
  LiveServer s;
  ScenarioSpec spec;
  spec.name = "equiv";
  spec.requests.push_back({gated_scenario_request(), Mode::Poll});
  spec.requests.push_back({hitl::testing::auto_approve_request(), Mode::Poll});
  spec.requests.push_back({gated_scenario_request("H-{{instance}}"), Mode::Poll});
  spec.responder_script.push_back({100ms, "bob", "approve", 0, {}, {}, {}});
  spec.responder_script.push_back({100ms, "dave", "reject", 2, {}, {}, {}});

  std::vector<std::vector<std::pair<std::string, std::optional<std::string>>>> seen;
  for (auto mode : {Mode::Poll, Mode::Callback}) {
    RunOptions opts;
    opts.mode_override = mode;
    opts.parallel = 3;
    auto report = run_scenario(spec, s.url(), opts);
    std::vector<std::pair<std::string, std::optional<std::string>>> outcomes;
    for (const auto& r : report.results) outcomes.emplace_back(r.status, r.outcome);
    seen.push_back(outcomes);
  }
  EXPECT_EQ(seen[0], seen[1]);
}

TEST(RunScenario, UnreachableServiceAndTimeouts) {
  ScenarioSpec spec;
  spec.requests.push_back({hitl::testing::auto_approve_request(), Mode::Poll});
  EXPECT_THROW(run_scenario(spec, "http://127.0.0.1:1"), ServiceUnreachable);

  LiveServer s;
  ScenarioSpec stuck;
  stuck.requests.push_back({gated_scenario_request(), Mode::Poll});
  RunOptions opts;
  opts.timeout = 300ms;
  try {
    run_scenario(stuck, s.url(), opts);
    FAIL() << "expected ScenarioTimeout";
  } catch (const ScenarioTimeout& e) {
    ASSERT_EQ(e.report.total(), 1u);
    EXPECT_EQ(e.report.results[0].status, "awaiting_human");
    EXPECT_FALSE(e.report.all_terminal());
  }

  RunOptions no_rx;
  no_rx.receiver_enabled = false;
  ScenarioSpec cb;
  cb.requests.push_back({hitl::testing::auto_approve_request(), Mode::Callback});
  EXPECT_THROW(run_scenario(cb, s.url(), no_rx), ScenarioError);
}

}  // namespace
}  // namespace hitl::sim
