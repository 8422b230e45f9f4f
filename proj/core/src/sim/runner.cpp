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

#include "hitl/sim/runner.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include <httplib.h>

#include "hitl/http_transport.hpp"
#include "hitl/sim/callback_receiver.hpp"

namespace hitl::sim {
namespace {

using Clock = std::chrono::steady_clock;
using std::chrono::milliseconds;

bool is_terminal_status(std::string_view s) {
  return s == "auto_resolved" || s == "resolved" || s == "expired";
}

struct Instance {
  int repetition;
  std::size_t index;
  std::size_t instance;
  Mode mode;
  json request;
};

class Client {
 public:
  Client(const ParsedUrl& base, milliseconds timeout) : http_(base.host, base.port) {
    const auto secs = timeout.count() / 1000;
    const auto usecs = (timeout.count() % 1000) * 1000;
    http_.set_connection_timeout(secs, usecs);
    http_.set_read_timeout(secs, usecs);
  }

  /// {status, body}; status 0 when the service could not be reached.
  std::pair<int, json> post(const std::string& path, const json& body) {
    return unpack(http_.Post(path, body.dump(), "application/json"));
  }
  std::pair<int, json> get(const std::string& path) { return unpack(http_.Get(path)); }

 private:
  static std::pair<int, json> unpack(const httplib::Result& res) {
    if (!res) return {0, json{{"error", httplib::to_string(res.error())}}};
    auto doc = json::parse(res->body, nullptr, false);
    if (doc.is_discarded()) doc = json::object();
    return {res->status, std::move(doc)};
  }

  httplib::Client http_;
};

void take_outcome(RequestResult& r, const json& body) {
  if (auto it = body.find("status"); it != body.end() && it->is_string()) {
    r.status = it->get<std::string>();
    r.terminal = is_terminal_status(r.status);
    if (r.status == "awaiting_human") r.awaiting_observed = true;
  }
  if (auto it = body.find("resolution"); it != body.end() && it->is_object()) {
    r.outcome = it->value("outcome", std::string{});
    r.decided_by = it->value("decided_by", std::string{});
  }
}

json respond_body(const std::string& request_id, const ResponderDirective& d) {
  json body = {{"request_id", request_id}, {"user_id", d.user_id}, {"outcome", d.outcome}};
  if (d.modified_action) body["modified_action"] = *d.modified_action;
  if (d.enrichment) body["enrichment"] = *d.enrichment;
  if (d.comment) body["comment"] = *d.comment;
  return body;
}

RequestResult run_instance(const Instance& inst, const ScenarioSpec& spec, Client& client,
                           CallbackReceiver* receiver, Clock::time_point deadline) {
  RequestResult r;
  r.repetition = inst.repetition;
  r.index = inst.index;
  r.instance = inst.instance;
  r.mode = inst.mode;

  std::vector<const ResponderDirective*> script;
  for (const auto& d : spec.responder_script) {
    if (!d.request || *d.request == inst.index) script.push_back(&d);
  }
  std::stable_sort(script.begin(), script.end(),
                   [](const auto* a, const auto* b) { return a->delay < b->delay; });

  json request = inst.request;
  if (inst.mode == Mode::Callback) request["callback_endpoint"] = receiver->url();

  const auto t0 = Clock::now();
  auto finish = [&] {
    r.latency_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  };

  auto [status, body] = client.post("/api/hitl/request", request);
  r.submit_http_status = status;
  if (status == 0) {
    r.error = "submit failed: " + body.value("error", std::string{});
    finish();
    return r;
  }
  r.request_id = body.value("request_id", std::string{});
  if (r.request_id.empty()) {
    r.error = "submit rejected with HTTP " + std::to_string(status) + ": " + body.dump();
    finish();
    return r;
  }
  take_outcome(r, body);
  auto retry_after = milliseconds{body.value("retry_after_ms", 1000)};

  std::size_t next_directive = 0;
  while (true) {
    if (inst.mode == Mode::Poll && r.terminal) break;
    if (inst.mode == Mode::Callback) {
      if (auto cb = receiver->received(r.request_id)) {
        take_outcome(r, *cb);
        break;
      }
    }
    const auto now = Clock::now();
    if (now >= deadline) {
      r.error = "timed out waiting for a terminal status";
      r.terminal = false;
      break;
    }

    // Scripted humans only act on work that is still open.
    while (next_directive < script.size() && t0 + script[next_directive]->delay <= now) {
      if (!r.terminal) {
        client.post("/api/hitl/respond", respond_body(r.request_id, *script[next_directive]));
        ++r.responses_sent;
      }
      ++next_directive;
    }

    auto wake = deadline;
    if (next_directive < script.size()) {
      wake = std::min(wake, t0 + script[next_directive]->delay);
    }

    if (inst.mode == Mode::Poll) {
      auto [code, decision] = client.get("/api/hitl/get-decision?request_id=" + r.request_id);
      ++r.polls;
      if (code == 200) {
        take_outcome(r, decision);
        if (auto it = decision.find("retry_after_ms"); it != decision.end()) {
          retry_after = milliseconds{it->get<std::int64_t>()};
        }
      }
      if (r.terminal) break;
      wake = std::min(wake, Clock::now() + retry_after);
      std::this_thread::sleep_until(wake);
    } else {
      const auto wait = std::chrono::duration_cast<milliseconds>(wake - Clock::now());
      if (auto cb = receiver->wait_for(r.request_id, std::max(wait, milliseconds{0}))) {
        take_outcome(r, *cb);
        break;
      }
    }
  }
  finish();
  return r;
}

}  // namespace

ScenarioReport run_scenario(const ScenarioSpec& spec, const std::string& service_url,
                            const RunOptions& options) {
  const auto base = parse_url(service_url);
  if (!base || base->scheme != "http") {
    throw ServiceUnreachable("service url must be http://host:port, got " + service_url);
  }
  {
    Client probe(*base, milliseconds{2000});
    auto [status, body] = probe.get("/api/hitl/descriptor");
    if (status != 200) {
      throw ServiceUnreachable("no descriptor at " + service_url + ": " +
                               (status == 0 ? body.value("error", std::string{})
                                            : "HTTP " + std::to_string(status)));
    }
  }

  std::vector<Instance> instances;
  for (int rep = 0; rep < spec.repetitions; ++rep) {
    for (std::size_t i = 0; i < spec.requests.size(); ++i) {
      const std::size_t n = static_cast<std::size_t>(rep) * spec.requests.size() + i;
      instances.push_back({rep, i, n, options.mode_override.value_or(spec.requests[i].mode),
                           instantiate(spec.requests[i].request, rep, i, n)});
    }
  }

  const bool needs_receiver = std::any_of(instances.begin(), instances.end(),
                                          [](const Instance& x) { return x.mode == Mode::Callback; });
  std::unique_ptr<CallbackReceiver> receiver;
  if (needs_receiver) {
    if (!options.receiver_enabled) {
      throw ScenarioError("callback-mode requests need the callback receiver");
    }
    receiver = std::make_unique<CallbackReceiver>();
    receiver->fail_first(options.inject_callback_failures);
    receiver->start();
  }

  const auto deadline = Clock::now() + options.timeout;
  std::vector<RequestResult> results(instances.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    Client client(*base, milliseconds{10000});
    for (std::size_t i = next++; i < instances.size(); i = next++) {
      results[i] = run_instance(instances[i], spec, client, receiver.get(), deadline);
    }
  };
  const int threads = std::clamp<int>(options.parallel, 1, std::max<int>(1, instances.size()));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (receiver) {
    for (auto& r : results) {
      const auto counts = receiver->counts(r.request_id);
      r.callbacks_raw = counts.raw;
      r.callbacks_effective = counts.effective;
    }
    receiver->stop();
  }

  ScenarioReport report{spec.name, std::move(results)};
  const bool timed_out = std::any_of(report.results.begin(), report.results.end(),
                                     [](const RequestResult& r) {
                                       return r.error.rfind("timed out", 0) == 0;
                                     });
  if (timed_out) {
    throw ScenarioTimeout("scenario '" + spec.name + "' did not finish within " +
                              std::to_string(options.timeout.count()) + " ms",
                          std::move(report));
  }
  return report;
}

}  // namespace hitl::sim
