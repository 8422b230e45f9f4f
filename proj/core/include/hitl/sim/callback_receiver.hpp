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

#include <chrono>
#include <condition_variable>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>

#include "hitl/types.hpp"

namespace hitl::sim {

/// Local HTTP endpoint that accepts decision callbacks (POST /callback).
/// Deliveries are deduplicated by idempotency_key.
class CallbackReceiver {
 public:
  struct Counts {
    int raw = 0;        // every POST seen, including rejected ones
    int effective = 0;  // first accepted delivery per idempotency key
  };

  CallbackReceiver();
  ~CallbackReceiver();

  CallbackReceiver(const CallbackReceiver&) = delete;
  CallbackReceiver& operator=(const CallbackReceiver&) = delete;

  /// Returns the bound port.
  int start(const std::string& bind_address = "127.0.0.1");
  void stop();
  std::string url() const;

  /// Answer the first `n` deliveries of every request with HTTP 500.
  void fail_first(int n);

  /// Blocks until an effective delivery for `request_id` arrives.
  std::optional<json> wait_for(const std::string& request_id, std::chrono::milliseconds timeout);
  /// Non-blocking variant.
  std::optional<json> received(const std::string& request_id) const;
  Counts counts(const std::string& request_id) const;

 private:
  int handle(const std::string& body);

  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::thread thread_;
  std::string host_;
  int port_ = 0;

  mutable std::mutex mu_;
  std::condition_variable cv_;
  int fail_first_ = 0;
  std::map<std::string, Counts> counts_;
  std::map<std::string, json> bodies_;
  std::set<std::string> seen_keys_;
};

}  // namespace hitl::sim
