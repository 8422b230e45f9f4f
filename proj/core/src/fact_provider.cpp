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

#include "hitl/fact_provider.hpp"

#include <fstream>
#include <stdexcept>

namespace hitl::service {

StaticFactProvider::StaticFactProvider(const json& document) {
  if (!document.is_object()) throw std::invalid_argument("fact provider file must be an object");
  for (const auto& [key, facts] : document.items()) {
    if (!facts.is_object()) throw std::invalid_argument("facts for '" + key + "' must be an object");
    FactMap& entry = table_[key];
    for (const auto& [name, value] : facts.items()) {
      auto scalar = scalar_from_json(value);
      if (!scalar) throw std::invalid_argument("fact '" + key + "." + name + "' is not a scalar");
      entry.emplace(name, std::move(*scalar));
    }
  }
}

StaticFactProvider StaticFactProvider::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read fact provider file " + path.string());
  return StaticFactProvider(json::parse(in));
}

FactMap StaticFactProvider::lookup(std::string_view agent_id,
                                   std::string_view action_name) const {
  FactMap out;
  if (auto it = table_.find(std::string(agent_id) + "/" + std::string(action_name));
      it != table_.end()) {
    out = it->second;
  }
  if (auto it = table_.find("*/" + std::string(action_name)); it != table_.end()) {
    for (const auto& [name, value] : it->second) out.emplace(name, value);
  }
  return out;
}

void augment_facts(FactMap& facts, const FactMap& provided) {
  for (const auto& [name, value] : provided) facts.emplace(name, value);
}

}  // namespace hitl::service
