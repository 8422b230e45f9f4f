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

#include "hitl/sim/scenario.hpp"

#include <fstream>

namespace hitl::sim {

std::string_view to_string(Mode mode) { return mode == Mode::Poll ? "poll" : "callback"; }

std::optional<Mode> parse_mode(std::string_view text) {
  if (text == "poll") return Mode::Poll;
  if (text == "callback") return Mode::Callback;
  return std::nullopt;
}

namespace {

void replace_all(std::string& s, std::string_view from, const std::string& to) {
  for (auto pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
}

ResponderDirective directive_from_json(const json& d, std::size_t i, std::size_t request_count) {
  const std::string where = "responder_script[" + std::to_string(i) + "]";
  if (!d.is_object()) throw ScenarioError(where + " must be an object");
  ResponderDirective out;
  if (!d.contains("user_id") || !d["user_id"].is_string()) {
    throw ScenarioError(where + ".user_id must be a string");
  }
  if (!d.contains("outcome") || !d["outcome"].is_string()) {
    throw ScenarioError(where + ".outcome must be a string");
  }
  out.user_id = d["user_id"].get<std::string>();
  out.outcome = d["outcome"].get<std::string>();
  if (auto it = d.find("delay_ms"); it != d.end()) {
    if (!it->is_number() || it->get<double>() < 0) {
      throw ScenarioError(where + ".delay_ms must be a non-negative number");
    }
    out.delay = std::chrono::milliseconds{it->get<std::int64_t>()};
  }
  if (auto it = d.find("request"); it != d.end()) {
    if (!it->is_number_unsigned() || it->get<std::size_t>() >= request_count) {
      throw ScenarioError(where + ".request must index requests[]");
    }
    out.request = it->get<std::size_t>();
  }
  if (auto it = d.find("modified_action"); it != d.end()) out.modified_action = *it;
  if (auto it = d.find("enrichment"); it != d.end()) out.enrichment = *it;
  if (auto it = d.find("comment"); it != d.end() && it->is_string()) {
    out.comment = it->get<std::string>();
  }
  return out;
}

}  // namespace

ScenarioSpec scenario_from_json(const json& doc) {
  if (!doc.is_object()) throw ScenarioError("scenario must be an object");
  ScenarioSpec spec;
  spec.name = doc.value("name", std::string("scenario"));
  if (auto it = doc.find("repetitions"); it != doc.end()) {
    if (!it->is_number_integer() || it->get<int>() < 0) {
      throw ScenarioError("repetitions must be a non-negative integer");
    }
    spec.repetitions = it->get<int>();
  }
  const auto requests = doc.value("requests", json::array());
  if (!requests.is_array()) throw ScenarioError("requests must be an array");
  for (std::size_t i = 0; i < requests.size(); ++i) {
    const auto& r = requests[i];
    const std::string where = "requests[" + std::to_string(i) + "]";
    if (!r.is_object() || !r.contains("request") || !r["request"].is_object()) {
      throw ScenarioError(where + ".request must be an object");
    }
    ScenarioRequest entry{r["request"], Mode::Poll};
    if (auto it = r.find("mode"); it != r.end()) {
      auto mode = it->is_string() ? parse_mode(it->get<std::string>()) : std::nullopt;
      if (!mode) throw ScenarioError(where + ".mode must be poll or callback");
      entry.mode = *mode;
    }
    spec.requests.push_back(std::move(entry));
  }
  const auto script = doc.value("responder_script", json::array());
  if (!script.is_array()) throw ScenarioError("responder_script must be an array");
  for (std::size_t i = 0; i < script.size(); ++i) {
    spec.responder_script.push_back(directive_from_json(script[i], i, spec.requests.size()));
  }
  return spec;
}

ScenarioSpec load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot read scenario " + path);
  auto doc = json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw ScenarioError("scenario " + path + " is not valid JSON");
  return scenario_from_json(doc);
}

json instantiate(const json& templ, int repetition, std::size_t index, std::size_t instance) {
  if (templ.is_string()) {
    auto s = templ.get<std::string>();
    replace_all(s, "{{rep}}", std::to_string(repetition));
    replace_all(s, "{{index}}", std::to_string(index));
    replace_all(s, "{{instance}}", std::to_string(instance));
    return s;
  }
  if (templ.is_object() || templ.is_array()) {
    json out = templ;
    for (auto it = out.begin(); it != out.end(); ++it) {
      *it = instantiate(*it, repetition, index, instance);
    }
    return out;
  }
  return templ;
}

}  // namespace hitl::sim
