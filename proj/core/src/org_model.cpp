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

#include "hitl/org_model.hpp"

#include <algorithm>

namespace hitl::org {
namespace {

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

[[noreturn]] void malformed(const std::string& what) {
  throw OrgLoadError(OrgLoadError::Kind::Malformed, what);
}

// Colours every node reachable through reporting edges; the first back edge
// found identifies a cycle.
std::optional<std::vector<std::string>> find_cycle(
    const std::map<std::string, std::string, std::less<>>& edges) {
  enum class Mark { Unvisited, InProgress, Done };
  std::map<std::string_view, Mark> marks;
  for (const auto& [from, _] : edges) {
    if (marks[from] != Mark::Unvisited) continue;
    std::vector<std::string_view> path;
    std::string_view node = from;
    while (true) {
      auto& mark = marks[node];
      if (mark == Mark::Done) break;
      if (mark == Mark::InProgress) {
        auto start = std::find(path.begin(), path.end(), node);
        std::vector<std::string> cycle(start, path.end());
        cycle.emplace_back(node);
        return cycle;
      }
      mark = Mark::InProgress;
      path.push_back(node);
      auto next = edges.find(node);
      if (next == edges.end()) break;
      node = next->second;
    }
    for (auto n : path) marks[n] = Mark::Done;
  }
  return std::nullopt;
}

}  // namespace

OrgLoadError::OrgLoadError(Kind kind, std::string detail, std::vector<std::string> cycle)
    : std::runtime_error(std::string(to_string(kind)) + ": " + detail),
      kind_(kind),
      detail_(std::move(detail)),
      cycle_(std::move(cycle)) {}

std::string_view to_string(OrgLoadError::Kind kind) {
  switch (kind) {
    case OrgLoadError::Kind::CyclicHierarchy: return "CyclicHierarchy";
    case OrgLoadError::Kind::UnknownUser: return "UnknownUser";
    case OrgLoadError::Kind::DuplicateUser: return "DuplicateUser";
    case OrgLoadError::Kind::Malformed: return "Malformed";
  }
  return "Malformed";
}

ResolveError::ResolveError(Kind kind, std::string detail)
    : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

std::string_view to_string(ResolveError::Kind kind) {
  switch (kind) {
    case ResolveError::Kind::RoleUnresolved: return "RoleUnresolved";
    case ResolveError::Kind::MissingContextKey: return "MissingContextKey";
    case ResolveError::Kind::NoManager: return "NoManager";
    case ResolveError::Kind::UnknownUser: return "UnknownUser";
  }
  return "RoleUnresolved";
}

const User* OrgModel::find_user(std::string_view user_id) const {
  auto it = users_.find(user_id);
  return it == users_.end() ? nullptr : &it->second;
}

std::optional<std::string> OrgModel::manager_of(std::string_view user_id) const {
  auto it = reporting_edges_.find(user_id);
  if (it == reporting_edges_.end()) return std::nullopt;
  return it->second;
}

json OrgModel::to_json() const {
  json users = json::array();
  for (const auto& [id, user] : users_) {
    json addresses = json::object();
    for (const auto& [kind, address] : user.channel_addresses) {
      addresses[std::string(hitl::to_string(kind))] = address;
    }
    users.push_back(
        {{"user_id", id}, {"display_name", user.display_name}, {"channel_addresses", addresses}});
  }
  json bindings = json::object();
  for (const auto& [role, members] : role_bindings_) bindings[role] = members;
  json edges = json::object();
  for (const auto& [from, to] : reporting_edges_) edges[from] = to;
  return {{"users", users}, {"roles", roles_}, {"role_bindings", bindings},
          {"reporting_edges", edges}};
}

OrgModel load_org_model(const json& document) {
  if (!document.is_object()) malformed("org model must be an object");
  OrgModel model;

  auto users = document.find("users");
  if (users == document.end() || !users->is_array()) malformed("users must be an array");
  for (const auto& entry : *users) {
    if (!entry.is_object() || !entry.contains("user_id") || !entry["user_id"].is_string()) {
      malformed("every user needs a string user_id");
    }
    User user;
    user.user_id = entry["user_id"].get<std::string>();
    if (user.user_id.empty()) malformed("user_id must be non-empty");
    user.display_name = entry.value("display_name", user.user_id);
    if (auto addrs = entry.find("channel_addresses"); addrs != entry.end()) {
      if (!addrs->is_object()) malformed("channel_addresses must be an object");
      for (const auto& [kind_name, address] : addrs->items()) {
        auto kind = parse_channel_kind(kind_name);
        if (!kind) malformed("unknown channel kind '" + kind_name + "'");
        if (!address.is_string()) malformed("channel address must be a string");
        user.channel_addresses[*kind] = address.get<std::string>();
      }
    }
    const std::string id = user.user_id;
    if (!model.users_.emplace(id, std::move(user)).second) {
      throw OrgLoadError(OrgLoadError::Kind::DuplicateUser, id);
    }
  }

  if (auto roles = document.find("roles"); roles != document.end()) {
    if (!roles->is_array()) malformed("roles must be an array");
    for (const auto& role : *roles) {
      if (!role.is_string() || role.get<std::string>().empty()) malformed("role names are strings");
      model.roles_.insert(role.get<std::string>());
    }
  }

  if (auto bindings = document.find("role_bindings"); bindings != document.end()) {
    if (!bindings->is_object()) malformed("role_bindings must be an object");
    for (const auto& [role, members] : bindings->items()) {
      if (!members.is_array()) malformed("role_bindings values must be arrays");
      auto& bound = model.role_bindings_[role];
      model.roles_.insert(role);
      for (const auto& member : members) {
        if (!member.is_string()) malformed("role members must be user ids");
        const auto id = member.get<std::string>();
        if (!model.users_.count(id)) throw OrgLoadError(OrgLoadError::Kind::UnknownUser, id);
        bound.insert(id);
      }
    }
  }

  if (auto edges = document.find("reporting_edges"); edges != document.end()) {
    if (!edges->is_object()) malformed("reporting_edges must be an object");
    for (const auto& [from, to] : edges->items()) {
      if (!to.is_string()) malformed("reporting edge targets must be user ids");
      const auto manager = to.get<std::string>();
      if (!model.users_.count(from)) throw OrgLoadError(OrgLoadError::Kind::UnknownUser, from);
      if (!model.users_.count(manager)) {
        throw OrgLoadError(OrgLoadError::Kind::UnknownUser, manager);
      }
      model.reporting_edges_.emplace(from, manager);
    }
  }

  if (auto cycle = find_cycle(model.reporting_edges_)) {
    throw OrgLoadError(OrgLoadError::Kind::CyclicHierarchy, join(*cycle, " -> "),
                       std::move(*cycle));
  }
  return model;
}

std::optional<RoleSpec> RoleSpec::parse(std::string_view text) {
  auto with_prefix = [&](std::string_view prefix, RoleKind kind) -> std::optional<RoleSpec> {
    if (text.substr(0, prefix.size()) != prefix) return std::nullopt;
    auto value = text.substr(prefix.size());
    if (value.empty()) return std::nullopt;
    return RoleSpec{kind, std::string(value)};
  };
  if (text.empty()) return std::nullopt;
  if (text.rfind("role:", 0) == 0) return with_prefix("role:", RoleKind::NamedRole);
  if (text.rfind("manager_of:", 0) == 0) return with_prefix("manager_of:", RoleKind::ManagerOf);
  if (text.rfind("user:", 0) == 0) return with_prefix("user:", RoleKind::UserLiteral);
  return RoleSpec{RoleKind::NamedRole, std::string(text)};
}

std::string RoleSpec::to_string() const {
  switch (kind) {
    case RoleKind::NamedRole: return "role:" + value;
    case RoleKind::ManagerOf: return "manager_of:" + value;
    case RoleKind::UserLiteral: return "user:" + value;
  }
  return value;
}

std::vector<User> resolve_participants(const RoleSpec& spec, const OrgModel& model,
                                       const ResolutionContext& context) {
  std::vector<User> out;
  switch (spec.kind) {
    case RoleKind::NamedRole: {
      auto it = model.role_bindings().find(spec.value);
      if (it != model.role_bindings().end()) {
        for (const auto& id : it->second) {
          if (const User* user = model.find_user(id)) out.push_back(*user);
        }
      }
      break;
    }
    case RoleKind::ManagerOf: {
      auto key = context.find(spec.value);
      if (key == context.end()) {
        throw ResolveError(ResolveError::Kind::MissingContextKey, spec.value);
      }
      if (!model.find_user(key->second)) {
        throw ResolveError(ResolveError::Kind::UnknownUser, key->second);
      }
      auto manager = model.manager_of(key->second);
      if (!manager) throw ResolveError(ResolveError::Kind::NoManager, key->second);
      out.push_back(*model.find_user(*manager));
      break;
    }
    case RoleKind::UserLiteral:
      if (const User* user = model.find_user(spec.value)) out.push_back(*user);
      break;
  }
  if (out.empty()) throw ResolveError(ResolveError::Kind::RoleUnresolved, spec.to_string());
  std::sort(out.begin(), out.end(),
            [](const User& a, const User& b) { return a.user_id < b.user_id; });
  return out;
}

std::vector<std::string> escalation_chain(std::string_view user_id, const OrgModel& model) {
  if (!model.find_user(user_id)) {
    throw ResolveError(ResolveError::Kind::UnknownUser, std::string(user_id));
  }
  std::vector<std::string> chain;
  auto next = model.manager_of(user_id);
  // Acyclicity is enforced at load, so this walk is bounded by |users|.
  while (next && chain.size() < model.users().size()) {
    chain.push_back(*next);
    next = model.manager_of(*next);
  }
  return chain;
}

}  // namespace hitl::org
