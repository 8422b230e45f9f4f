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

#include "hitl/rubric.hpp"

namespace hitl {
namespace {

enum class Verdict { Holds, Fails, Missing };

const Scalar* lookup_fact(const FactMap& facts, const std::optional<double>& confidence,
                          std::string_view name, Scalar& confidence_slot) {
  if (name == kConfidenceFact && confidence) {
    confidence_slot = *confidence;
    return &confidence_slot;
  }
  auto it = facts.find(name);
  return it == facts.end() ? nullptr : &it->second;
}

bool compare_ordering(Comparator cmp, double lhs, double rhs) {
  switch (cmp) {
    case Comparator::Lt: return lhs < rhs;
    case Comparator::Le: return lhs <= rhs;
    case Comparator::Gt: return lhs > rhs;
    case Comparator::Ge: return lhs >= rhs;
    default: return false;
  }
}

bool condition_holds(const RubricRule& rule, const Scalar& value) {
  switch (rule.comparator) {
    case Comparator::Lt:
    case Comparator::Le:
    case Comparator::Gt:
    case Comparator::Ge: {
      const auto* operand = std::get_if<Scalar>(&rule.operand);
      if (!operand || !is_numeric(*operand) || !is_numeric(value)) return false;
      return compare_ordering(rule.comparator, std::get<double>(value), std::get<double>(*operand));
    }
    case Comparator::Eq:
    case Comparator::Ne: {
      const auto* operand = std::get_if<Scalar>(&rule.operand);
      if (!operand) return false;
      const bool equal = scalar_equal(value, *operand);
      return rule.comparator == Comparator::Eq ? equal : !equal;
    }
    case Comparator::InSet: {
      const auto* members = std::get_if<ScalarSet>(&rule.operand);
      if (!members) return false;
      for (const auto& member : *members) {
        if (scalar_equal(value, member)) return true;
      }
      return false;
    }
    case Comparator::MatchesPattern: {
      const auto* pattern = std::get_if<Pattern>(&rule.operand);
      const auto* text = std::get_if<std::string>(&value);
      if (!pattern || !pattern->compiled || !text) return false;
      return std::regex_match(*text, *pattern->compiled);
    }
  }
  return false;
}

Verdict check(const RubricRule& rule, const FactMap& facts,
              const std::optional<double>& confidence) {
  Scalar slot;
  const Scalar* value = lookup_fact(facts, confidence, rule.fact, slot);
  if (!value) return Verdict::Missing;
  return condition_holds(rule, *value) ? Verdict::Holds : Verdict::Fails;
}

std::string describe_operand_type(Comparator cmp) {
  if (is_ordering(cmp)) return "number";
  if (cmp == Comparator::InSet) return "array of scalars";
  if (cmp == Comparator::MatchesPattern) return "regex string";
  return "scalar";
}

std::optional<Operand> parse_operand(Comparator cmp, const json& doc, const std::string& path,
                                     std::vector<FieldError>& errors) {
  auto mismatch = [&] {
    errors.push_back({FieldError::Kind::TypeMismatch, path, describe_operand_type(cmp)});
    return std::nullopt;
  };
  switch (cmp) {
    case Comparator::Lt:
    case Comparator::Le:
    case Comparator::Gt:
    case Comparator::Ge:
      if (!doc.is_number()) return mismatch();
      return Operand{Scalar{doc.get<double>()}};
    case Comparator::Eq:
    case Comparator::Ne: {
      auto scalar = scalar_from_json(doc);
      if (!scalar) return mismatch();
      return Operand{*scalar};
    }
    case Comparator::InSet: {
      if (!doc.is_array()) return mismatch();
      ScalarSet members;
      for (const auto& item : doc) {
        auto scalar = scalar_from_json(item);
        if (!scalar) return mismatch();
        members.push_back(std::move(*scalar));
      }
      return Operand{std::move(members)};
    }
    case Comparator::MatchesPattern: {
      if (!doc.is_string()) return mismatch();
      Pattern pattern{doc.get<std::string>(), nullptr};
      try {
        pattern.compiled = std::make_shared<const std::regex>(pattern.source);
      } catch (const std::regex_error&) {
        errors.push_back({FieldError::Kind::InvalidValue, path, "valid ECMAScript regex"});
        return std::nullopt;
      }
      return Operand{std::move(pattern)};
    }
  }
  return std::nullopt;
}

json operand_to_json(const Operand& operand) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Scalar>) {
          return scalar_to_json(v);
        } else if constexpr (std::is_same_v<T, ScalarSet>) {
          json arr = json::array();
          for (const auto& member : v) arr.push_back(scalar_to_json(member));
          return arr;
        } else {
          return v.source;
        }
      },
      operand);
}

}  // namespace

std::string_view to_string(Comparator comparator) {
  switch (comparator) {
    case Comparator::Lt: return "lt";
    case Comparator::Le: return "le";
    case Comparator::Gt: return "gt";
    case Comparator::Ge: return "ge";
    case Comparator::Eq: return "eq";
    case Comparator::Ne: return "ne";
    case Comparator::InSet: return "in_set";
    case Comparator::MatchesPattern: return "matches_pattern";
  }
  return "eq";
}

std::optional<Comparator> parse_comparator(std::string_view text) {
  if (text == "lt") return Comparator::Lt;
  if (text == "le") return Comparator::Le;
  if (text == "gt") return Comparator::Gt;
  if (text == "ge") return Comparator::Ge;
  if (text == "eq") return Comparator::Eq;
  if (text == "ne") return Comparator::Ne;
  if (text == "in_set") return Comparator::InSet;
  if (text == "matches_pattern") return Comparator::MatchesPattern;
  return std::nullopt;
}

bool is_ordering(Comparator comparator) {
  return comparator == Comparator::Lt || comparator == Comparator::Le ||
         comparator == Comparator::Gt || comparator == Comparator::Ge;
}

std::string_view to_string(DispositionKind kind) {
  switch (kind) {
    case DispositionKind::AutoApprove: return "auto_approve";
    case DispositionKind::AutoReject: return "auto_reject";
    case DispositionKind::RequireHuman: return "require_human";
    case DispositionKind::NotifyOnly: return "notify_only";
  }
  return "require_human";
}

std::optional<DispositionKind> parse_disposition_kind(std::string_view text) {
  if (text == "auto_approve") return DispositionKind::AutoApprove;
  if (text == "auto_reject") return DispositionKind::AutoReject;
  if (text == "require_human") return DispositionKind::RequireHuman;
  if (text == "notify_only") return DispositionKind::NotifyOnly;
  return std::nullopt;
}

Disposition evaluate_rubric(const FactMap& facts, std::optional<double> confidence,
                            const Rubric& rubric) {
  for (std::size_t i = 0; i < rubric.rules.size(); ++i) {
    const RubricRule& rule = rubric.rules[i];
    switch (check(rule, facts, confidence)) {
      case Verdict::Missing:
        return {DispositionKind::RequireHuman, "missing_fact:" + rule.fact, std::nullopt, i};
      case Verdict::Holds:
        return {rule.disposition, "rule:" + std::to_string(i), rule.role_hint, i};
      case Verdict::Fails:
        break;
    }
  }
  return {rubric.default_disposition, "default", std::nullopt, std::nullopt};
}

DispositionKind ungated_disposition(const FactMap& facts, std::optional<double> confidence,
                                    const Rubric& rubric) {
  for (const RubricRule& rule : rubric.rules) {
    if (creates_work_item(rule.disposition)) continue;
    switch (check(rule, facts, confidence)) {
      case Verdict::Missing: return DispositionKind::RequireHuman;
      case Verdict::Holds: return rule.disposition;
      case Verdict::Fails: break;
    }
  }
  return rubric.default_disposition;
}

Rubric parse_rubric(const json& doc, std::string_view path, std::vector<FieldError>& errors) {
  Rubric rubric;
  const std::string root(path);
  if (!doc.is_object()) {
    errors.push_back({FieldError::Kind::TypeMismatch, root, "object"});
    return rubric;
  }

  if (auto it = doc.find("default_disposition"); it != doc.end() && !it->is_null()) {
    auto kind = it->is_string() ? parse_disposition_kind(it->get<std::string>()) : std::nullopt;
    if (kind) {
      rubric.default_disposition = *kind;
    } else {
      errors.push_back({FieldError::Kind::InvalidValue, root + ".default_disposition",
                        "auto_approve|auto_reject|require_human|notify_only"});
    }
  }

  auto rules_it = doc.find("rules");
  if (rules_it == doc.end() || rules_it->is_null()) return rubric;
  if (!rules_it->is_array()) {
    errors.push_back({FieldError::Kind::TypeMismatch, root + ".rules", "array"});
    return rubric;
  }

  for (std::size_t i = 0; i < rules_it->size(); ++i) {
    const json& item = (*rules_it)[i];
    const std::string rule_path = root + ".rules[" + std::to_string(i) + "]";
    if (!item.is_object()) {
      errors.push_back({FieldError::Kind::TypeMismatch, rule_path, "object"});
      continue;
    }
    RubricRule rule;
    bool ok = true;

    auto fact = item.find("fact");
    if (fact == item.end()) {
      errors.push_back({FieldError::Kind::MissingField, rule_path + ".fact", ""});
      ok = false;
    } else if (!fact->is_string() || fact->get<std::string>().empty()) {
      errors.push_back({FieldError::Kind::TypeMismatch, rule_path + ".fact", "non-empty string"});
      ok = false;
    } else {
      rule.fact = fact->get<std::string>();
    }

    std::optional<Comparator> cmp;
    auto cmp_it = item.find("comparator");
    if (cmp_it == item.end()) {
      errors.push_back({FieldError::Kind::MissingField, rule_path + ".comparator", ""});
      ok = false;
    } else {
      cmp = cmp_it->is_string() ? parse_comparator(cmp_it->get<std::string>()) : std::nullopt;
      if (!cmp) {
        errors.push_back({FieldError::Kind::InvalidValue, rule_path + ".comparator",
                          "lt|le|gt|ge|eq|ne|in_set|matches_pattern"});
        ok = false;
      } else {
        rule.comparator = *cmp;
      }
    }

    auto operand_it = item.find("operand");
    if (operand_it == item.end()) {
      errors.push_back({FieldError::Kind::MissingField, rule_path + ".operand", ""});
      ok = false;
    } else if (cmp) {
      auto operand = parse_operand(*cmp, *operand_it, rule_path + ".operand", errors);
      if (operand) {
        rule.operand = std::move(*operand);
      } else {
        ok = false;
      }
    }

    auto disp_it = item.find("disposition");
    if (disp_it == item.end()) {
      errors.push_back({FieldError::Kind::MissingField, rule_path + ".disposition", ""});
      ok = false;
    } else {
      auto kind =
          disp_it->is_string() ? parse_disposition_kind(disp_it->get<std::string>()) : std::nullopt;
      if (!kind) {
        errors.push_back({FieldError::Kind::InvalidValue, rule_path + ".disposition",
                          "auto_approve|auto_reject|require_human|notify_only"});
        ok = false;
      } else {
        rule.disposition = *kind;
      }
    }

    if (auto hint = item.find("role_hint"); hint != item.end() && !hint->is_null()) {
      if (!hint->is_string() || hint->get<std::string>().empty()) {
        errors.push_back({FieldError::Kind::TypeMismatch, rule_path + ".role_hint",
                          "non-empty string"});
        ok = false;
      } else {
        rule.role_hint = hint->get<std::string>();
      }
    }

    if (ok) rubric.rules.push_back(std::move(rule));
  }
  return rubric;
}

json to_json(const RubricRule& rule) {
  json out = {{"fact", rule.fact},
              {"comparator", std::string(to_string(rule.comparator))},
              {"operand", operand_to_json(rule.operand)},
              {"disposition", std::string(to_string(rule.disposition))}};
  if (rule.role_hint) out["role_hint"] = *rule.role_hint;
  return out;
}

json to_json(const Rubric& rubric) {
  json rules = json::array();
  for (const auto& rule : rubric.rules) rules.push_back(to_json(rule));
  return {{"rules", std::move(rules)},
          {"default_disposition", std::string(to_string(rubric.default_disposition))}};
}

json to_json(const Disposition& disposition) {
  json out = {{"kind", std::string(to_string(disposition.kind))}, {"reason", disposition.reason}};
  if (disposition.role_hint) out["role_hint"] = *disposition.role_hint;
  if (disposition.rule_index) out["rule_index"] = *disposition.rule_index;
  return out;
}

Disposition disposition_from_json(const json& doc) {
  Disposition out;
  out.kind = parse_disposition_kind(doc.at("kind").get<std::string>())
                 .value_or(DispositionKind::RequireHuman);
  out.reason = doc.at("reason").get<std::string>();
  if (auto it = doc.find("role_hint"); it != doc.end()) out.role_hint = it->get<std::string>();
  if (auto it = doc.find("rule_index"); it != doc.end()) out.rule_index = it->get<std::size_t>();
  return out;
}

}  // namespace hitl
