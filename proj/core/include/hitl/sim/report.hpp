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
#include <string>
#include <vector>

#include "hitl/sim/scenario.hpp"

namespace hitl::sim {

struct RequestResult {
  int repetition = 0;
  std::size_t index = 0;     // position in ScenarioSpec::requests
  std::size_t instance = 0;  // repetition * requests.size() + index
  Mode mode = Mode::Poll;
  std::string request_id;
  int submit_http_status = 0;
  std::string status;  // last observed request status
  bool terminal = false;
  std::optional<std::string> outcome;
  std::optional<std::string> decided_by;
  double latency_ms = 0;
  int polls = 0;
  int responses_sent = 0;
  bool awaiting_observed = false;
  int callbacks_raw = 0;
  int callbacks_effective = 0;
  std::string error;
};

struct ScenarioReport {
  std::string name;
  std::vector<RequestResult> results;  // ordered by instance

  std::size_t total() const { return results.size(); }
  std::size_t count_status(std::string_view status) const;
  /// auto_resolved / total; nullopt for an empty report.
  std::optional<double> autonomy_ratio() const;
  bool all_terminal() const;
};

enum class ReportFormat { Text, Json };

json report_to_json(const ScenarioReport& report);
std::string emit_report(const ScenarioReport& report, ReportFormat format);

}  // namespace hitl::sim
