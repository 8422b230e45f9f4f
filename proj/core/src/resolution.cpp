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

#include "hitl/resolution.hpp"

#include <stdexcept>

namespace hitl {

std::string_view to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::Approve: return "approve";
    case Outcome::Reject: return "reject";
    case Outcome::Modify: return "modify";
    case Outcome::Defer: return "defer";
  }
  return "approve";
}

std::optional<Outcome> parse_outcome(std::string_view text) {
  if (text == "approve") return Outcome::Approve;
  if (text == "reject") return Outcome::Reject;
  if (text == "modify") return Outcome::Modify;
  if (text == "defer") return Outcome::Defer;
  return std::nullopt;
}

std::string_view to_string(DecidedBy decided_by) {
  return decided_by == DecidedBy::Human ? "human" : "automated";
}

json to_json(const Resolution& resolution) {
  json out = {{"outcome", std::string(to_string(resolution.outcome))},
              {"decided_by", std::string(to_string(resolution.decided_by))},
              {"decided_at", format_iso8601(resolution.decided_at)}};
  if (resolution.modified_action) out["modified_action"] = *resolution.modified_action;
  if (!resolution.enrichment.empty()) out["enrichment"] = facts_to_json(resolution.enrichment);
  if (resolution.user_id) out["user_id"] = *resolution.user_id;
  if (resolution.comment) out["comment"] = *resolution.comment;
  return out;
}

Resolution resolution_from_json(const json& doc) {
  Resolution out;
  auto outcome = parse_outcome(doc.at("outcome").get<std::string>());
  if (!outcome) throw std::invalid_argument("unknown outcome in stored resolution");
  out.outcome = *outcome;
  out.decided_by =
      doc.at("decided_by").get<std::string>() == "human" ? DecidedBy::Human : DecidedBy::Automated;
  auto decided_at = parse_iso8601(doc.at("decided_at").get<std::string>());
  if (!decided_at) throw std::invalid_argument("malformed decided_at in stored resolution");
  out.decided_at = *decided_at;
  if (auto it = doc.find("modified_action"); it != doc.end()) out.modified_action = *it;
  if (auto it = doc.find("enrichment"); it != doc.end()) {
    for (const auto& [name, value] : it->items()) {
      if (auto scalar = scalar_from_json(value)) out.enrichment.emplace(name, std::move(*scalar));
    }
  }
  if (auto it = doc.find("user_id"); it != doc.end()) out.user_id = it->get<std::string>();
  if (auto it = doc.find("comment"); it != doc.end()) out.comment = it->get<std::string>();
  return out;
}

}  // namespace hitl
