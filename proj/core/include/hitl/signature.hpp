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

#include <string>

#include "hitl/request.hpp"

namespace hitl {

struct SignatureOptions {
  /// When set, field values also contribute: numbers by order of magnitude,
  /// strings and booleans by value. Off by default so that "the same kind of
  /// action" groups regardless of amounts.
  bool bucket_values = false;
};

/// Canonical fingerprint used to group similar actions for autonomy
/// analytics. Covers agent_id, action name, the sorted set of field names and
/// the sorted, de-duplicated constraint tags. Independent of key order.
///
/// Format: `<action name>#<16 hex digits>`.
std::string action_signature(const HitlRequest& request, const SignatureOptions& options = {});

}  // namespace hitl
