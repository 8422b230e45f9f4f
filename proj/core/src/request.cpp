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

#include "hitl/request.hpp"

#include <stdexcept>

namespace hitl {
namespace {

bool is_http_url(std::string_view url) {
  return url.rfind("http://", 0) == 0 || url.rfind("https://", 0) == 0;
}

}  // namespace

json to_json(const ProposedAction& action) {
  return {{"name", action.name}, {"fields", action.fields}};
}

ValidationResult validate_request(const json& raw) {
  std::vector<FieldError> errors;
  if (!raw.is_object()) {
    errors.push_back({FieldError::Kind::TypeMismatch, "", "object"});
    return errors;
  }

  HitlRequest req;

  if (auto it = raw.find("agent_id"); it == raw.end()) {
    errors.push_back({FieldError::Kind::MissingField, "agent_id", ""});
  } else if (!it->is_string() || it->get<std::string>().empty()) {
    errors.push_back({FieldError::Kind::TypeMismatch, "agent_id", "non-empty string"});
  } else {
    req.agent_id = it->get<std::string>();
  }

  if (auto it = raw.find("task_state"); it != raw.end() && !it->is_null()) {
    if (it->is_string() || it->is_object()) {
      req.task_state = *it;
    } else {
      errors.push_back({FieldError::Kind::TypeMismatch, "task_state", "string or object"});
    }
  }

  if (auto it = raw.find("proposed_action"); it == raw.end()) {
    errors.push_back({FieldError::Kind::MissingField, "proposed_action", ""});
  } else if (!it->is_object()) {
    errors.push_back({FieldError::Kind::TypeMismatch, "proposed_action", "object"});
  } else {
    auto name = it->find("name");
    if (name == it->end()) {
      errors.push_back({FieldError::Kind::MissingField, "proposed_action.name", ""});
    } else if (!name->is_string() || name->get<std::string>().empty()) {
      errors.push_back(
          {FieldError::Kind::TypeMismatch, "proposed_action.name", "non-empty string"});
    } else {
      req.proposed_action.name = name->get<std::string>();
    }
    if (auto fields = it->find("fields"); fields != it->end() && !fields->is_null()) {
      if (fields->is_object()) {
        req.proposed_action.fields = *fields;
      } else {
        errors.push_back({FieldError::Kind::TypeMismatch, "proposed_action.fields", "object"});
      }
    }
  }

  if (auto it = raw.find("facts"); it != raw.end() && !it->is_null()) {
    if (!it->is_object()) {
      errors.push_back({FieldError::Kind::TypeMismatch, "facts", "object"});
    } else {
      for (const auto& [name, value] : it->items()) {
        if (name.empty()) {
          errors.push_back({FieldError::Kind::InvalidValue, "facts", "non-empty fact names"});
          continue;
        }
        auto scalar = scalar_from_json(value);
        if (!scalar) {
          errors.push_back(
              {FieldError::Kind::TypeMismatch, "facts." + name, "number, string or boolean"});
          continue;
        }
        req.facts.emplace(name, std::move(*scalar));
      }
    }
  }

  if (auto it = raw.find("confidence"); it != raw.end() && !it->is_null()) {
    if (!it->is_number()) {
      errors.push_back({FieldError::Kind::TypeMismatch, "confidence", "number"});
    } else {
      const double c = it->get<double>();
      if (!(c >= 0.0 && c <= 1.0)) {
        errors.push_back({FieldError::Kind::ConfidenceOutOfRange, "confidence", "[0,1]"});
      } else {
        req.confidence = c;
      }
    }
  }

  if (auto it = raw.find("constraints"); it != raw.end() && !it->is_null()) {
    if (!it->is_array()) {
      errors.push_back({FieldError::Kind::TypeMismatch, "constraints", "array of strings"});
    } else {
      for (const auto& tag : *it) {
        if (!tag.is_string()) {
          errors.push_back({FieldError::Kind::TypeMismatch, "constraints", "array of strings"});
          break;
        }
        req.constraints.push_back(tag.get<std::string>());
      }
    }
  }

  if (auto it = raw.find("rubric"); it == raw.end()) {
    errors.push_back({FieldError::Kind::MissingField, "rubric", ""});
  } else {
    req.rubric = parse_rubric(*it, "rubric", errors);
  }

  if (auto it = raw.find("urgency"); it != raw.end() && !it->is_null()) {
    auto urgency = it->is_string() ? parse_urgency(it->get<std::string>()) : std::nullopt;
    if (urgency) {
      req.urgency = *urgency;
    } else {
      errors.push_back({FieldError::Kind::InvalidValue, "urgency", "realtime|normal|low"});
    }
  }

  if (auto it = raw.find("callback_endpoint"); it != raw.end() && !it->is_null()) {
    if (!it->is_string()) {
      errors.push_back({FieldError::Kind::TypeMismatch, "callback_endpoint", "http(s) URL"});
    } else if (!is_http_url(it->get<std::string>())) {
      errors.push_back({FieldError::Kind::InvalidValue, "callback_endpoint", "http(s) URL"});
    } else {
      req.callback_endpoint = it->get<std::string>();
    }
  }

  if (!errors.empty()) return errors;
  return req;
}

json to_json(const HitlRequest& request) {
  json out = {{"request_id", request.request_id},
              {"agent_id", request.agent_id},
              {"proposed_action", to_json(request.proposed_action)},
              {"facts", facts_to_json(request.facts)},
              {"constraints", request.constraints},
              {"rubric", to_json(request.rubric)},
              {"urgency", std::string(to_string(request.urgency))},
              {"created_at", format_iso8601(request.created_at)}};
  if (!request.task_state.is_null()) out["task_state"] = request.task_state;
  if (request.confidence) out["confidence"] = *request.confidence;
  if (request.callback_endpoint) out["callback_endpoint"] = *request.callback_endpoint;
  return out;
}

HitlRequest request_from_json(const json& doc) {
  auto result = validate_request(doc);
  if (auto* errors = std::get_if<std::vector<FieldError>>(&result)) {
    std::string message = "stored request does not validate:";
    for (const auto& e : *errors) message += " " + to_json(e).dump();
    throw std::invalid_argument(message);
  }
  HitlRequest req = std::move(std::get<HitlRequest>(result));
  req.request_id = doc.at("request_id").get<std::string>();
  auto created = parse_iso8601(doc.at("created_at").get<std::string>());
  if (!created) throw std::invalid_argument("stored request has a malformed created_at");
  req.created_at = *created;
  return req;
}

}  // namespace hitl
