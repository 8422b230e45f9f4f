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

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "hitl/types.hpp"

namespace hitl::service {

/// Supplies enterprise facts the agent did not send. Stands in for fetching
/// context from systems of record.
class FactProvider {
 public:
  virtual ~FactProvider() = default;
  virtual FactMap lookup(std::string_view agent_id, std::string_view action_name) const = 0;
};

/// Static table keyed by "<agent_id>/<action name>"; "*/<action name>"
/// applies to every agent. Exact keys win over the wildcard on conflicts.
///
///   {"billing-agent/pay_invoice": {"vendor_risk": "low"}, "*/pay_invoice": {...}}
class StaticFactProvider final : public FactProvider {
 public:
  StaticFactProvider() = default;
  /// Throws std::invalid_argument on non-scalar fact values.
  explicit StaticFactProvider(const json& document);
  static StaticFactProvider load_file(const std::filesystem::path& path);

  FactMap lookup(std::string_view agent_id, std::string_view action_name) const override;

 private:
  std::map<std::string, FactMap, std::less<>> table_;
};

/// Adds provider facts the request does not already carry. Submitted facts
/// always win.
void augment_facts(FactMap& facts, const FactMap& provided);

}  // namespace hitl::service
