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
#include <vector>

#include "hitl/types.hpp"

namespace hitl::sim {

enum class Mode { Poll, Callback };

std::string_view to_string(Mode mode);
std::optional<Mode> parse_mode(std::string_view text);

struct ScenarioRequest {
  /// HitlRequest document. String values may contain {{rep}}, {{index}} and
  /// {{instance}} placeholders, expanded per instance.
  json request;
  Mode mode = Mode::Poll;
};

/// One scripted human response, fired `delay` after the target instance was
/// submitted. Without `request` it applies to every request of the scenario.
struct ResponderDirective {
  std::chrono::milliseconds delay{0};
  std::string user_id;
  std::string outcome;
  std::optional<std::size_t> request;
  std::optional<json> modified_action;
  std::optional<json> enrichment;
  std::optional<std::string> comment;
};

struct ScenarioSpec {
  std::string name;
  std::vector<ScenarioRequest> requests;
  std::vector<ResponderDirective> responder_script;
  int repetitions = 1;
};

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ScenarioSpec scenario_from_json(const json& document);
ScenarioSpec load_scenario(const std::string& path);

/// Expands placeholders in every string of `templ`.
json instantiate(const json& templ, int repetition, std::size_t index, std::size_t instance);

}  // namespace hitl::sim
