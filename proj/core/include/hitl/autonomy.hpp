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

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hitl/event_log.hpp"

namespace hitl::audit {

enum class SuggestionKind { AutomateCandidate, ConstraintCandidate };

std::string_view to_string(SuggestionKind kind);

struct Evidence {
  std::size_t approvals = 0;
  std::size_t rejections = 0;
  std::size_t modifications = 0;
  /// Rejections/modifications of actions the rubric would have auto-approved
  /// had it not been allowed to gate to a human.
  std::size_t overrides_of_auto = 0;

  friend bool operator==(const Evidence&, const Evidence&) = default;
};

struct AutonomySuggestion {
  std::string signature;
  SuggestionKind kind = SuggestionKind::AutomateCandidate;
  Evidence evidence;
  std::size_t window = 0;

  friend bool operator==(const AutonomySuggestion&, const AutonomySuggestion&) = default;
};

json to_json(const AutonomySuggestion& suggestion);

inline constexpr std::size_t kDefaultAutonomyThreshold = 5;

/// Looks at the most recent `threshold_n` human resolutions per action
/// signature (signatures need at least that many to be considered):
///  - all approvals            -> automate_candidate
///  - at least half reject/modify -> constraint_candidate
///
/// Reads `signature` from submitted events, `ungated` from evaluated events
/// and `resolution` from resolved events. Pure; results are sorted by
/// signature. Throws std::invalid_argument when threshold_n is 0.
std::vector<AutonomySuggestion> analyze_autonomy(std::span<const AuditRecord> log,
                                                 std::size_t threshold_n);

}  // namespace hitl::audit
