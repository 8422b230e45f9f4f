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
#include <string_view>

#include "hitl/time.hpp"
#include "hitl/types.hpp"

namespace hitl {

/// The decision vocabulary a participant (or the rubric) can return.
enum class Outcome { Approve, Reject, Modify, Defer };

std::string_view to_string(Outcome outcome);
std::optional<Outcome> parse_outcome(std::string_view text);

enum class DecidedBy { Automated, Human };

std::string_view to_string(DecidedBy decided_by);

/// Terminal outcome of a request.
///
/// Invariants: `modified_action` is set iff outcome is Modify; `user_id` is
/// set and non-empty iff decided_by is Human.
struct Resolution {
  Outcome outcome = Outcome::Approve;
  std::optional<json> modified_action;
  FactMap enrichment;
  DecidedBy decided_by = DecidedBy::Automated;
  std::optional<std::string> user_id;
  Timestamp decided_at{};
  std::optional<std::string> comment;

  friend bool operator==(const Resolution&, const Resolution&) = default;
};

json to_json(const Resolution& resolution);
Resolution resolution_from_json(const json& doc);

}  // namespace hitl
