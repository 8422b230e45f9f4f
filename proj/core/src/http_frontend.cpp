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

#include "hitl/http_frontend.hpp"

#include <charconv>
#include <stdexcept>

#include "hitl/autonomy.hpp"

#include <httplib.h>

namespace hitl::service {
namespace {

void reply(httplib::Response& res, const ApiResponse& api) {
  res.status = api.status;
  res.set_content(api.body.dump(), "application/json");
}

std::optional<json> parse_body(const httplib::Request& req, httplib::Response& res) {
  auto doc = json::parse(req.body, nullptr, false);
  if (doc.is_discarded()) {
    reply(res, {400, {{"error", "malformed_json"}, {"detail", "request body is not valid JSON"}}});
    return std::nullopt;
  }
  return doc;
}

std::optional<std::size_t> size_param(const httplib::Request& req, const char* key,
                                      std::size_t fallback) {
  if (!req.has_param(key)) return fallback;
  const auto text = req.get_param_value(key);
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

ApiResponse bad_param(const char* key) {
  return {400,
          {{"error", "bad_request"}, {"detail", std::string(key) + " must be a non-negative integer"}}};
}

}  // namespace

struct HttpFrontend::Impl {
  httplib::Server server;
};

HttpFrontend::HttpFrontend(HitlService& service, std::string bind_address, int port)
    : service_(service),
      bind_address_(std::move(bind_address)),
      port_(port),
      impl_(std::make_unique<Impl>()) {
  auto& srv = impl_->server;

  srv.Post("/api/hitl/request", [this](const httplib::Request& req, httplib::Response& res) {
    if (auto body = parse_body(req, res)) reply(res, service_.submit_request(*body));
  });
  srv.Get("/api/hitl/get-decision", [this](const httplib::Request& req, httplib::Response& res) {
    if (!req.has_param("request_id")) {
      reply(res, {400, {{"error", "bad_request"}, {"detail", "request_id is required"}}});
      return;
    }
    reply(res, service_.get_decision(req.get_param_value("request_id")));
  });
  srv.Post("/api/hitl/respond", [this](const httplib::Request& req, httplib::Response& res) {
    if (auto body = parse_body(req, res)) reply(res, service_.submit_response(*body));
  });
  srv.Get("/api/hitl/pending", [this](const httplib::Request& req, httplib::Response& res) {
    if (!req.has_param("user_id")) {
      reply(res, {400, {{"error", "bad_request"}, {"detail", "user_id is required"}}});
      return;
    }
    reply(res, service_.list_pending(req.get_param_value("user_id")));
  });
  srv.Post("/api/admin/reload-org", [this](const httplib::Request& req, httplib::Response& res) {
    if (auto body = parse_body(req, res)) reply(res, service_.reload_org_model(*body));
  });
  srv.Get("/api/hitl/descriptor", [this](const httplib::Request&, httplib::Response& res) {
    reply(res, {200, service_.export_a2a_descriptor()});
  });
  srv.Get("/api/hitl/audit", [this](const httplib::Request& req, httplib::Response& res) {
    if (req.has_param("request_id")) {
      const auto id = req.get_param_value("request_id");
      reply(res, service_.query_audit(std::string_view(id)));
      return;
    }
    const auto offset = size_param(req, "offset", 0);
    const auto limit = size_param(req, "limit", 100);
    if (!offset) return reply(res, bad_param("offset"));
    if (!limit) return reply(res, bad_param("limit"));
    reply(res, service_.query_audit(std::nullopt, *offset, *limit));
  });
  srv.Get("/api/hitl/suggestions", [this](const httplib::Request& req, httplib::Response& res) {
    const auto threshold = size_param(req, "threshold", audit::kDefaultAutonomyThreshold);
    if (!threshold) return reply(res, bad_param("threshold"));
    reply(res, service_.suggestions(*threshold));
  });

  srv.set_exception_handler([](const httplib::Request&, httplib::Response& res,
                               std::exception_ptr ep) {
    std::string detail = "internal error";
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      detail = e.what();
    } catch (...) {
    }
    reply(res, {500, {{"error", "internal"}, {"detail", detail}}});
  });
}

HttpFrontend::~HttpFrontend() { stop(); }

int HttpFrontend::start() {
  auto& srv = impl_->server;
  if (port_ == 0) {
    port_ = srv.bind_to_any_port(bind_address_);
    if (port_ < 0) throw std::runtime_error("cannot bind " + bind_address_);
  } else if (!srv.bind_to_port(bind_address_, port_)) {
    throw std::runtime_error("cannot bind " + bind_address_ + ":" + std::to_string(port_));
  }
  if (service_.config().public_base_url.empty()) service_.set_public_base_url(base_url());

  running_ = true;
  listener_ = std::thread([&srv] { srv.listen_after_bind(); });
  sweeper_ = std::thread([this] {
    while (running_) {
      service_.wait_for_work(service_.config().dispatch_interval);
      if (!running_) break;
      service_.dispatch_callbacks();
      service_.expire_overdue();
    }
  });
  srv.wait_until_ready();
  return port_;
}

void HttpFrontend::stop() {
  if (!running_.exchange(false)) return;
  impl_->server.stop();
  service_.stop_waiting();
  if (listener_.joinable()) listener_.join();
  if (sweeper_.joinable()) sweeper_.join();
}

std::string HttpFrontend::base_url() const {
  const std::string host = bind_address_ == "0.0.0.0" ? "127.0.0.1" : bind_address_;
  return "http://" + host + ":" + std::to_string(port_);
}

}  // namespace hitl::service
