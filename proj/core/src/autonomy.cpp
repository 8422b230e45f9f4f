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

#include "hitl/autonomy.hpp"

#include <map>
#include <stdexcept>

namespace hitl::audit {
namespace {

struct Observation {
  std::string outcome;
  bool would_auto_approve = false;
};

}  // namespace

std::string_view to_string(SuggestionKind kind) {
  return kind == SuggestionKind::AutomateCandidate ? "automate_candidate"
                                                   : "constraint_candidate";
}

json to_json(const AutonomySuggestion& suggestion) {
  return {{"signature", suggestion.signature},
          {"kind", std::string(to_string(suggestion.kind))},
          {"evidence",
           {{"approvals", suggestion.evidence.approvals},
            {"rejections", suggestion.evidence.rejections},
            {"modifications", suggestion.evidence.modifications},
            {"overrides_of_auto", suggestion.evidence.overrides_of_auto}}},
          {"window", suggestion.window}};
}

std::vector<AutonomySuggestion> analyze_autonomy(std::span<const AuditRecord> log,
                                                 std::size_t threshold_n) {
  if (threshold_n == 0) throw std::invalid_argument("threshold_n must be at least 1");

  std::map<std::string, std::string, std::less<>> signature_of;
  std::map<std::string, bool, std::less<>> auto_approvable;
  std::map<std::string, std::vector<Observation>> by_signature;

  for (const AuditRecord& record : log) {
    switch (record.event) {
      case AuditEvent::Submitted:
        if (auto it = record.payload.find("signature"); it != record.payload.end()) {
          signature_of[record.request_id] = it->get<std::string>();
        }
        break;
      case AuditEvent::Evaluated:
        auto_approvable[record.request_id] =
            record.payload.value("ungated", std::string{}) == "auto_approve";
        break;
      case AuditEvent::Resolved: {
        auto res = record.payload.find("resolution");
        if (res == record.payload.end() || res->value("decided_by", "") != "human") break;
        auto sig = signature_of.find(record.request_id);
        if (sig == signature_of.end()) break;
        auto approvable = auto_approvable.find(record.request_id);
        by_signature[sig->second].push_back(
            {res->value("outcome", ""),
             approvable != auto_approvable.end() && approvable->second});
        break;
      }
      default:
        break;
    }
  }

  std::vector<AutonomySuggestion> out;
  for (const auto& [signature, observations] : by_signature) {
    if (observations.size() < threshold_n) continue;
    Evidence evidence;
    for (auto i = observations.size() - threshold_n; i < observations.size(); ++i) {
      const auto& obs = observations[i];
      if (obs.outcome == "approve") {
        ++evidence.approvals;
      } else if (obs.outcome == "reject") {
        ++evidence.rejections;
      } else if (obs.outcome == "modify") {
        ++evidence.modifications;
      }
      if ((obs.outcome == "reject" || obs.outcome == "modify") && obs.would_auto_approve) {
        ++evidence.overrides_of_auto;
      }
    }
    const std::size_t overridden = evidence.rejections + evidence.modifications;
    if (evidence.approvals == threshold_n) {
      out.push_back({signature, SuggestionKind::AutomateCandidate, evidence, threshold_n});
    } else if (2 * overridden >= threshold_n) {
      out.push_back({signature, SuggestionKind::ConstraintCandidate, evidence, threshold_n});
    }
  }
  return out;
}

}  // namespace hitl::audit
