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

#include "hitl/signature.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "hash.hpp"

namespace hitl {
namespace {

json value_bucket(const json& value) {
  if (value.is_number()) {
    const double v = value.get<double>();
    if (v == 0.0) return "zero";
    const int magnitude = static_cast<int>(std::floor(std::log10(std::fabs(v))));
    return std::string(v < 0 ? "-e" : "e") + std::to_string(magnitude);
  }
  if (value.is_string() || value.is_boolean()) return value;
  return value.type_name();
}

}  // namespace

std::string action_signature(const HitlRequest& request, const SignatureOptions& options) {
  // nlohmann::json objects iterate in sorted key order, so field names come out canonical.
  json fields = json::array();
  json buckets = json::object();
  for (const auto& [name, value] : request.proposed_action.fields.items()) {
    fields.push_back(name);
    if (options.bucket_values) buckets[name] = value_bucket(value);
  }

  std::set<std::string> tags(request.constraints.begin(), request.constraints.end());

  json canonical = {{"agent", request.agent_id},
                    {"action", request.proposed_action.name},
                    {"fields", std::move(fields)},
                    {"tags", tags}};
  if (options.bucket_values) canonical["buckets"] = std::move(buckets);

  return request.proposed_action.name + "#" + detail::to_hex(detail::fnv1a64(canonical.dump()));
}

}  // namespace hitl
