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
#include <memory>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hitl/types.hpp"

namespace hitl {

enum class Comparator { Lt, Le, Gt, Ge, Eq, Ne, InSet, MatchesPattern };

std::string_view to_string(Comparator comparator);
std::optional<Comparator> parse_comparator(std::string_view text);

/// True for lt/le/gt/ge, which only accept numeric operands.
bool is_ordering(Comparator comparator);

enum class DispositionKind { AutoApprove, AutoReject, RequireHuman, NotifyOnly };

std::string_view to_string(DispositionKind kind);
std::optional<DispositionKind> parse_disposition_kind(std::string_view text);

/// require_human and notify_only put something in front of a person;
/// the auto_* kinds never do.
constexpr bool creates_work_item(DispositionKind kind) {
  return kind == DispositionKind::RequireHuman || kind == DispositionKind::NotifyOnly;
}

/// A regular expression operand. The source text is what round-trips; the
/// compiled form is shared between copies of the rule.
struct Pattern {
  std::string source;
  std::shared_ptr<const std::regex> compiled;

  friend bool operator==(const Pattern& a, const Pattern& b) { return a.source == b.source; }
};

using ScalarSet = std::vector<Scalar>;
using Operand = std::variant<Scalar, ScalarSet, Pattern>;

struct RubricRule {
  std::string fact;
  Comparator comparator = Comparator::Eq;
  Operand operand;
  DispositionKind disposition = DispositionKind::RequireHuman;
  std::optional<std::string> role_hint;

  friend bool operator==(const RubricRule&, const RubricRule&) = default;
};

/// Ordered first-match rule list. Rule order is significant.
struct Rubric {
  std::vector<RubricRule> rules;
  DispositionKind default_disposition = DispositionKind::RequireHuman;

  friend bool operator==(const Rubric&, const Rubric&) = default;
};

struct Disposition {
  DispositionKind kind = DispositionKind::RequireHuman;
  /// "rule:<index>", "default", or "missing_fact:<name>".
  std::string reason;
  std::optional<std::string> role_hint;
  std::optional<std::size_t> rule_index;

  friend bool operator==(const Disposition&, const Disposition&) = default;
};

/// Fact name under which the request's top-level confidence is visible to rules.
inline constexpr std::string_view kConfidenceFact = "confidence";

/// Evaluates `rubric` against the facts. Rules are scanned in order and the
/// first one whose condition holds decides. A rule naming an absent fact stops
/// the scan with require_human ("missing_fact:<name>"); no match yields the
/// default disposition with reason "default".
///
/// A present `confidence` shadows any `confidence` entry in `facts`. A fact of
/// the wrong type for its comparator (a string under `gt`, say) makes the
/// condition false rather than failing the evaluation.
Disposition evaluate_rubric(const FactMap& facts, std::optional<double> confidence,
                            const Rubric& rubric);

/// What the rubric would decide if no rule were allowed to gate to a human:
/// require_human/notify_only rules are skipped, and a missing fact is
/// treated as "cannot auto-decide". Used to recognise humans overriding an
/// action the rubric would otherwise have let through.
DispositionKind ungated_disposition(const FactMap& facts, std::optional<double> confidence,
                                    const Rubric& rubric);

/// Parses a rubric document. Errors are appended with field paths rooted at
/// `path` (e.g. "rubric.rules[2].operand"); the returned rubric is only
/// meaningful when no errors were added.
Rubric parse_rubric(const json& doc, std::string_view path, std::vector<FieldError>& errors);

json to_json(const Rubric& rubric);
json to_json(const RubricRule& rule);
json to_json(const Disposition& disposition);
Disposition disposition_from_json(const json& doc);

}  // namespace hitl
