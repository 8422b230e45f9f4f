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

#include <atomic>
#include <memory>
#include <string>
#include <thread>

#include "hitl/service.hpp"

namespace hitl::service {

/// Serves the HitlService REST surface over HTTP and runs the background
/// callback/expiry sweep.
class HttpFrontend {
 public:
  HttpFrontend(HitlService& service, std::string bind_address, int port);
  ~HttpFrontend();

  HttpFrontend(const HttpFrontend&) = delete;
  HttpFrontend& operator=(const HttpFrontend&) = delete;

  /// Binds and starts serving on background threads. Returns the bound port.
  /// Throws std::runtime_error if the address cannot be bound.
  int start();
  void stop();

  std::string base_url() const;
  int port() const { return port_; }

 private:
  struct Impl;

  HitlService& service_;
  std::string bind_address_;
  int port_;
  std::unique_ptr<Impl> impl_;
  std::thread listener_;
  std::thread sweeper_;
  std::atomic<bool> running_{false};
};

}  // namespace hitl::service
