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

#include <gtest/gtest.h>

#include "hitl/request.hpp"

namespace hitl {
namespace {

json minimal() {
  return {{"agent_id", "a"},
          {"proposed_action", {{"name", "noop"}, {"fields", json::object()}}},
          {"facts", json::object()},
          {"rubric", {{"rules", json::array()}}}};
}

std::vector<FieldError> errors_of(const json& doc) {
  auto result = validate_request(doc);
  if (auto* e = std::get_if<std::vector<FieldError>>(&result)) return *e;
  return {};
}

bool has_error(const std::vector<FieldError>& errors, FieldError::Kind kind,
               const std::string& field) {
  for (const auto& e : errors) {
    if (e.kind == kind && e.field == field) return true;
  }
  return false;
}

TEST(ValidateRequest, MinimalDocumentGetsDefaults) {
  auto result = validate_request(minimal());
  ASSERT_TRUE(std::holds_alternative<HitlRequest>(result));
  const auto& req = std::get<HitlRequest>(result);
  EXPECT_EQ(req.urgency, Urgency::Normal);
  EXPECT_EQ(req.rubric.default_disposition, DispositionKind::RequireHuman);
  EXPECT_TRUE(req.facts.empty());
  EXPECT_FALSE(req.confidence);
  EXPECT_FALSE(req.callback_endpoint);
}

TEST(ValidateRequest, MissingDefaultDispositionIsFilled) {
  auto doc = minimal();
  doc["rubric"] = {{"rules", json::array({{{"fact", "x"},
                                           {"comparator", "eq"},
                                           {"operand", 1},
                                           {"disposition", "auto_approve"}}})}};
  auto result = validate_request(doc);
  ASSERT_TRUE(std::holds_alternative<HitlRequest>(result));
  EXPECT_EQ(std::get<HitlRequest>(result).rubric.default_disposition,
            DispositionKind::RequireHuman);
}

TEST(ValidateRequest, ConfidenceOutOfRange) {
  auto doc = minimal();
  doc["confidence"] = 1.3;
  EXPECT_TRUE(has_error(errors_of(doc), FieldError::Kind::ConfidenceOutOfRange, "confidence"));
  doc["confidence"] = -0.01;
  EXPECT_TRUE(has_error(errors_of(doc), FieldError::Kind::ConfidenceOutOfRange, "confidence"));
  doc["confidence"] = 1.0;
  EXPECT_TRUE(errors_of(doc).empty());
}

TEST(ValidateRequest, CollectsEveryError) {
  json doc = {{"facts", {{"nested", {{"a", 1}}}}},
              {"urgency", "asap"},
              {"confidence", "high"},
              {"callback_endpoint", "ftp://x"}};
  auto errors = errors_of(doc);
  EXPECT_TRUE(has_error(errors, FieldError::Kind::MissingField, "agent_id"));
  EXPECT_TRUE(has_error(errors, FieldError::Kind::MissingField, "proposed_action"));
  EXPECT_TRUE(has_error(errors, FieldError::Kind::MissingField, "rubric"));
  EXPECT_TRUE(has_error(errors, FieldError::Kind::TypeMismatch, "facts.nested"));
  EXPECT_TRUE(has_error(errors, FieldError::Kind::InvalidValue, "urgency"));
  EXPECT_TRUE(has_error(errors, FieldError::Kind::TypeMismatch, "confidence"));
  EXPECT_TRUE(has_error(errors, FieldError::Kind::InvalidValue, "callback_endpoint"));
}

TEST(ValidateRequest, ServiceAssignedFieldsAreIgnored) {
  auto doc = minimal();
  doc["request_id"] = "forged";
  doc["created_at"] = "1999-01-01T00:00:00Z";
  auto result = validate_request(doc);
  ASSERT_TRUE(std::holds_alternative<HitlRequest>(result));
  EXPECT_TRUE(std::get<HitlRequest>(result).request_id.empty());
}

TEST(HitlRequest, WireRoundTrip) {
  auto doc = minimal();
  doc["facts"] = {{"amount", 12.5}, {"region", "eu"}, {"vip", true}};
  doc["confidence"] = 0.7;
  doc["constraints"] = {"pii", "sox"};
  doc["urgency"] = "realtime";
  doc["callback_endpoint"] = "http://127.0.0.1:9000/cb";
  doc["task_state"] = {{"step", 2}};
  auto req = std::get<HitlRequest>(validate_request(doc));
  req.request_id = "hitl-00000001";
  req.created_at = Timestamp{std::chrono::milliseconds{1767225600000}};
  const auto wire = to_json(req);
  EXPECT_EQ(wire["request_id"], "hitl-00000001");
  EXPECT_EQ(wire["created_at"], "2026-01-01T00:00:00.000Z");
  EXPECT_EQ(request_from_json(wire), req);
  EXPECT_THROW(request_from_json(json{{"agent_id", 3}}), std::invalid_argument);
}

}  // namespace
}  // namespace hitl
