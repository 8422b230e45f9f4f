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

#include "hitl/sim/callback_receiver.hpp"

#include <stdexcept>

#include <httplib.h>

namespace hitl::sim {

struct CallbackReceiver::Impl {
  httplib::Server server;
};

CallbackReceiver::CallbackReceiver() : impl_(std::make_unique<Impl>()) {
  impl_->server.Post("/callback", [this](const httplib::Request& req, httplib::Response& res) {
    res.status = handle(req.body);
    res.set_content(res.status == 200 ? R"({"ok":true})" : R"({"ok":false})",
                    "application/json");
  });
}

CallbackReceiver::~CallbackReceiver() { stop(); }

int CallbackReceiver::start(const std::string& bind_address) {
  host_ = bind_address;
  port_ = impl_->server.bind_to_any_port(bind_address);
  if (port_ < 0) throw std::runtime_error("callback receiver cannot bind " + bind_address);
  thread_ = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return port_;
}

void CallbackReceiver::stop() {
  if (!thread_.joinable()) return;
  impl_->server.stop();
  thread_.join();
}

std::string CallbackReceiver::url() const {
  return "http://" + host_ + ":" + std::to_string(port_) + "/callback";
}

void CallbackReceiver::fail_first(int n) {
  std::lock_guard lock(mu_);
  fail_first_ = n;
}

int CallbackReceiver::handle(const std::string& body) {
  auto doc = json::parse(body, nullptr, false);
  if (doc.is_discarded() || !doc.is_object() || !doc.contains("request_id") ||
      !doc["request_id"].is_string()) {
    return 400;
  }
  const auto id = doc["request_id"].get<std::string>();
  const auto key = doc.value("idempotency_key", std::string{});

  std::lock_guard lock(mu_);
  auto& c = counts_[id];
  ++c.raw;
  if (c.raw <= fail_first_) return 500;
  if (!key.empty() && !seen_keys_.insert(key).second) return 200;  // duplicate, already applied
  ++c.effective;
  bodies_[id] = std::move(doc);
  cv_.notify_all();
  return 200;
}

std::optional<json> CallbackReceiver::wait_for(const std::string& request_id,
                                               std::chrono::milliseconds timeout) {
  std::unique_lock lock(mu_);
  cv_.wait_for(lock, timeout, [&] { return bodies_.count(request_id) > 0; });
  auto it = bodies_.find(request_id);
  if (it == bodies_.end()) return std::nullopt;
  return std::optional<json>(std::in_place, it->second);
}

std::optional<json> CallbackReceiver::received(const std::string& request_id) const {
  std::lock_guard lock(mu_);
  auto it = bodies_.find(request_id);
  if (it == bodies_.end()) return std::nullopt;
  return std::optional<json>(std::in_place, it->second);
}

CallbackReceiver::Counts CallbackReceiver::counts(const std::string& request_id) const {
  std::lock_guard lock(mu_);
  auto it = counts_.find(request_id);
  return it == counts_.end() ? Counts{} : it->second;
}

}  // namespace hitl::sim
