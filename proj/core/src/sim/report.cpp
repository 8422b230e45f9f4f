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

#include "hitl/sim/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace hitl::sim {
namespace {

double percentile(std::vector<double> values, double p) {
  if (values.empty()) return 0;
  std::sort(values.begin(), values.end());
  const auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(values.size())));
  return values[std::clamp<std::size_t>(rank, 1, values.size()) - 1];
}

// Fixed three-decimal rendering keeps the json and text output stable.
double round3(double v) { return std::round(v * 1000.0) / 1000.0; }

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

}  // namespace

std::size_t ScenarioReport::count_status(std::string_view status) const {
  return static_cast<std::size_t>(std::count_if(
      results.begin(), results.end(), [&](const RequestResult& r) { return r.status == status; }));
}

std::optional<double> ScenarioReport::autonomy_ratio() const {
  if (results.empty()) return std::nullopt;
  return static_cast<double>(count_status("auto_resolved")) / static_cast<double>(total());
}

bool ScenarioReport::all_terminal() const {
  return std::all_of(results.begin(), results.end(),
                     [](const RequestResult& r) { return r.terminal; });
}

json report_to_json(const ScenarioReport& report) {
  json requests = json::array();
  std::vector<double> latencies;
  std::map<std::string, std::size_t> by_status;
  int polls = 0;
  int pending_observed = 0;
  for (const auto& r : report.results) {
    json item = {{"instance", r.instance},
                 {"repetition", r.repetition},
                 {"index", r.index},
                 {"mode", std::string(to_string(r.mode))},
                 {"request_id", r.request_id},
                 {"http_status", r.submit_http_status},
                 {"status", r.status},
                 {"terminal", r.terminal},
                 {"outcome", r.outcome ? json(*r.outcome) : json(nullptr)},
                 {"decided_by", r.decided_by ? json(*r.decided_by) : json(nullptr)},
                 {"latency_ms", round3(r.latency_ms)},
                 {"polls", r.polls},
                 {"responses_sent", r.responses_sent},
                 {"callbacks_raw", r.callbacks_raw},
                 {"callbacks_effective", r.callbacks_effective}};
    if (!r.error.empty()) item["error"] = r.error;
    requests.push_back(std::move(item));
    latencies.push_back(r.latency_ms);
    ++by_status[r.status];
    polls += r.polls;
    pending_observed += r.awaiting_observed ? 1 : 0;
  }
  const auto ratio = report.autonomy_ratio();
  return {{"scenario", report.name},
          {"summary",
           {{"total", report.total()},
            {"by_status", by_status},
            {"all_terminal", report.all_terminal()},
            {"autonomy_ratio", ratio ? json(round3(*ratio)) : json("n/a")},
            {"pending_observed", pending_observed},
            {"polls", polls},
            {"latency_ms",
             {{"p50", round3(percentile(latencies, 0.50))},
              {"p95", round3(percentile(latencies, 0.95))},
              {"max", round3(percentile(latencies, 1.0))}}}}},
          {"requests", std::move(requests)}};
}

std::string emit_report(const ScenarioReport& report, ReportFormat format) {
  const json doc = report_to_json(report);
  if (format == ReportFormat::Json) return doc.dump(2) + "\n";

  const auto& s = doc["summary"];
  std::ostringstream out;
  out << "scenario " << report.name << "\n";
  out << "requests " << report.total() << "  all_terminal "
      << (report.all_terminal() ? "yes" : "no") << "\n";
  const auto ratio = report.autonomy_ratio();
  out << "autonomy_ratio " << (ratio ? fixed(*ratio, 3) : "n/a") << "\n";
  for (const auto& [status, n] : s["by_status"].items()) {
    out << "  " << status << " " << n.get<std::size_t>() << "\n";
  }
  out << "latency_ms p50 " << fixed(s["latency_ms"]["p50"].get<double>(), 1) << " p95 "
      << fixed(s["latency_ms"]["p95"].get<double>(), 1) << " max "
      << fixed(s["latency_ms"]["max"].get<double>(), 1) << "\n";
  out << "polls " << s["polls"].get<int>() << "\n\n";

  char line[256];
  std::snprintf(line, sizeof(line), "%-5s %-8s %-14s %-13s %-8s %-9s %10s %5s\n", "#", "mode",
                "request_id", "status", "outcome", "by", "latency", "polls");
  out << line;
  for (const auto& r : report.results) {
    std::snprintf(line, sizeof(line), "%-5zu %-8s %-14s %-13s %-8s %-9s %10.1f %5d\n", r.instance,
                  std::string(to_string(r.mode)).c_str(), r.request_id.c_str(), r.status.c_str(),
                  r.outcome.value_or("-").c_str(), r.decided_by.value_or("-").c_str(),
                  r.latency_ms, r.polls);
    out << line;
    if (!r.error.empty()) out << "      error: " << r.error << "\n";
  }
  return out.str();
}

}  // namespace hitl::sim
