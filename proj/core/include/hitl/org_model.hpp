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

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hitl/types.hpp"

namespace hitl::org {

struct User {
  std::string user_id;
  std::string display_name;
  std::map<ChannelKind, std::string> channel_addresses;

  bool has_address(ChannelKind kind) const { return channel_addresses.count(kind) > 0; }

  friend bool operator==(const User&, const User&) = default;
};

/// Users, roles and a single-parent reporting forest. Immutable once loaded;
/// the only way to obtain one is load_org_model(), which enforces the
/// referential and acyclicity invariants.
class OrgModel {
 public:
  OrgModel() = default;

  const User* find_user(std::string_view user_id) const;
  const std::map<std::string, User, std::less<>>& users() const { return users_; }
  const std::set<std::string, std::less<>>& roles() const { return roles_; }
  const std::map<std::string, std::set<std::string>, std::less<>>& role_bindings() const {
    return role_bindings_;
  }
  const std::map<std::string, std::string, std::less<>>& reporting_edges() const {
    return reporting_edges_;
  }
  std::optional<std::string> manager_of(std::string_view user_id) const;

  json to_json() const;

 private:
  friend OrgModel load_org_model(const json& document);

  std::map<std::string, User, std::less<>> users_;
  std::set<std::string, std::less<>> roles_;
  std::map<std::string, std::set<std::string>, std::less<>> role_bindings_;
  std::map<std::string, std::string, std::less<>> reporting_edges_;
};

class OrgLoadError : public std::runtime_error {
 public:
  enum class Kind { CyclicHierarchy, UnknownUser, DuplicateUser, Malformed };

  OrgLoadError(Kind kind, std::string detail, std::vector<std::string> cycle = {});

  Kind kind() const { return kind_; }
  const std::string& detail() const { return detail_; }
  /// For CyclicHierarchy: one cycle, starting and ending at the same user.
  const std::vector<std::string>& cycle() const { return cycle_; }

 private:
  Kind kind_;
  std::string detail_;
  std::vector<std::string> cycle_;
};

std::string_view to_string(OrgLoadError::Kind kind);

/// Loads {users[], roles[]?, role_bindings{}, reporting_edges{}}.
/// Throws OrgLoadError.
OrgModel load_org_model(const json& document);

enum class RoleKind { NamedRole, ManagerOf, UserLiteral };

/// Who should handle a work item, expressed against the org model.
///
/// Text form: `role:<name>`, `manager_of:<context key>`, `user:<user_id>`;
/// a bare string with no prefix is a named role.
struct RoleSpec {
  RoleKind kind = RoleKind::NamedRole;
  std::string value;

  static std::optional<RoleSpec> parse(std::string_view text);
  std::string to_string() const;

  friend bool operator==(const RoleSpec&, const RoleSpec&) = default;
};

class ResolveError : public std::runtime_error {
 public:
  enum class Kind { RoleUnresolved, MissingContextKey, NoManager, UnknownUser };

  ResolveError(Kind kind, std::string detail);
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

std::string_view to_string(ResolveError::Kind kind);

using ResolutionContext = std::map<std::string, std::string, std::less<>>;

/// Resolves a role spec to concrete users, sorted by user_id.
///  - named role: every bound user (any one of them may respond)
///  - manager_of: the manager of the user named by context[value]
///  - user literal: that user
/// Throws ResolveError; never returns an empty list.
std::vector<User> resolve_participants(const RoleSpec& spec, const OrgModel& model,
                                       const ResolutionContext& context);

/// Managers above `user_id`, nearest first, ending at the root. Excludes the
/// user. Throws ResolveError(UnknownUser).
std::vector<std::string> escalation_chain(std::string_view user_id, const OrgModel& model);

}  // namespace hitl::org
