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

#include <chrono>
#include <optional>
#include <stdexcept>
#include <string>

#include "hitl/sim/report.hpp"
#include "hitl/sim/scenario.hpp"

namespace hitl::sim {

struct RunOptions {
  /// Forces every request into one mode.
  std::optional<Mode> mode_override;
  int parallel = 1;
  std::chrono::milliseconds timeout{60000};
  /// Poll-only runs can go without an inbound listener.
  bool receiver_enabled = true;
  /// Receiver answers the first N callback deliveries per request with 500.
  int inject_callback_failures = 0;
};

class ServiceUnreachable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown when some instance is still open at the deadline. Carries what was
/// observed up to that point.
class ScenarioTimeout : public std::runtime_error {
 public:
  ScenarioTimeout(std::string what, ScenarioReport partial)
      : std::runtime_error(std::move(what)), report(std::move(partial)) {}
  ScenarioReport report;
};

ScenarioReport run_scenario(const ScenarioSpec& spec, const std::string& service_url,
                            const RunOptions& options = {});

}  // namespace hitl::sim
