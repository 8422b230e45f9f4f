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

#include "hitl/delivery.hpp"

#include <fstream>
#include <system_error>

namespace hitl::channel {

json to_json(const WorkItem& item) {
  json out = {{"request_id", item.request_id},
              {"agent_id", item.agent_id},
              {"proposed_action", item.proposed_action},
              {"facts", facts_to_json(item.facts)},
              {"reason", item.reason},
              {"urgency", std::string(to_string(item.urgency))},
              {"respond_endpoint", item.respond_endpoint},
              {"kind", item.notification ? "notification" : "decision"}};
  if (item.respond_by) out["respond_by"] = format_iso8601(*item.respond_by);
  return out;
}

std::string_view to_string(DeliveryStatus status) {
  switch (status) {
    case DeliveryStatus::Sent: return "sent";
    case DeliveryStatus::Failed: return "failed";
    case DeliveryStatus::FallbackUsed: return "fallback_used";
  }
  return "failed";
}

json to_json(const DeliveryRecord& record) {
  return {{"delivery_id", record.delivery_id},
          {"request_id", record.request_id},
          {"user_id", record.user_id},
          {"channel", std::string(to_string(record.channel))},
          {"address", record.address},
          {"status", std::string(to_string(record.status))},
          {"attempted_at", format_iso8601(record.attempted_at)},
          {"failures", record.failures}};
}

DeliveryRecord delivery_from_json(const json& doc) {
  DeliveryRecord out;
  out.delivery_id = doc.at("delivery_id").get<std::string>();
  out.request_id = doc.at("request_id").get<std::string>();
  out.user_id = doc.at("user_id").get<std::string>();
  out.channel =
      parse_channel_kind(doc.at("channel").get<std::string>()).value_or(ChannelKind::Dashboard);
  out.address = doc.at("address").get<std::string>();
  const auto status = doc.at("status").get<std::string>();
  out.status = status == "sent"            ? DeliveryStatus::Sent
               : status == "fallback_used" ? DeliveryStatus::FallbackUsed
                                           : DeliveryStatus::Failed;
  out.attempted_at =
      parse_iso8601(doc.at("attempted_at").get<std::string>()).value_or(Timestamp{});
  out.failures = doc.value("failures", std::vector<std::string>{});
  return out;
}

AdapterResult DashboardInbox::send(const WorkItem& item, const org::User& user,
                                   std::string_view, std::string_view delivery_id) {
  std::lock_guard lock(mu_);
  inboxes_[user.user_id].push_back(
      {std::string(delivery_id), item.request_id, item.notification});
  return {true, {}};
}

std::vector<DashboardInbox::Entry> DashboardInbox::entries(std::string_view user_id) const {
  std::lock_guard lock(mu_);
  auto it = inboxes_.find(user_id);
  return it == inboxes_.end() ? std::vector<Entry>{} : it->second;
}

WebhookAdapter::WebhookAdapter(std::shared_ptr<HttpTransport> transport,
                               std::chrono::milliseconds timeout, int retries)
    : transport_(std::move(transport)), timeout_(timeout), retries_(retries) {}

AdapterResult WebhookAdapter::send(const WorkItem& item, const org::User&,
                                   std::string_view address, std::string_view delivery_id) {
  json body = to_json(item);
  body["delivery_id"] = std::string(delivery_id);
  const std::string payload = body.dump();
  HttpResult last;
  for (int attempt = 0; attempt <= retries_; ++attempt) {
    last = transport_->post_json(address, payload, timeout_);
    if (last.ok()) return {true, {}};
  }
  if (last.status != 0) return {false, "http " + std::to_string(last.status)};
  return {false, last.error.empty() ? "no response" : last.error};
}

EmailStubAdapter::EmailStubAdapter(std::filesystem::path outbox) : outbox_(std::move(outbox)) {}

AdapterResult EmailStubAdapter::send(const WorkItem& item, const org::User& user,
                                     std::string_view address, std::string_view delivery_id) {
  std::error_code ec;
  std::filesystem::create_directories(outbox_, ec);
  if (ec) return {false, "outbox: " + ec.message()};

  const auto path = outbox_ / (std::string(delivery_id) + ".json");
  const auto tmp = outbox_ / (std::string(delivery_id) + ".json.tmp");
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) return {false, "cannot write " + tmp.string()};
    json message = {{"to", std::string(address)},
                    {"display_name", user.display_name},
                    {"subject", "Approval needed: " + item.proposed_action.value("name", "")},
                    {"delivery_id", std::string(delivery_id)},
                    {"work_item", to_json(item)}};
    out << message.dump(2) << '\n';
    if (!out.flush()) return {false, "short write to " + tmp.string()};
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) return {false, "rename: " + ec.message()};
  return {true, {}};
}

ChannelRouter::ChannelRouter() : dashboard_(std::make_shared<DashboardInbox>()) {
  adapters_[ChannelKind::Dashboard] = dashboard_;
}

void ChannelRouter::register_adapter(std::shared_ptr<ChannelAdapter> adapter) {
  const auto kind = adapter->kind();
  if (kind == ChannelKind::Dashboard) {
    if (auto inbox = std::dynamic_pointer_cast<DashboardInbox>(adapter)) dashboard_ = inbox;
  }
  adapters_[kind] = std::move(adapter);
}

DeliveryRecord ChannelRouter::deliver(const WorkItem& item, const org::User& user,
                                      std::span<const ChannelKind> channels,
                                      std::string delivery_id, Timestamp now) {
  DeliveryRecord record;
  record.delivery_id = std::move(delivery_id);
  record.request_id = item.request_id;
  record.user_id = user.user_id;
  record.attempted_at = now;
  record.status = DeliveryStatus::Failed;

  for (std::size_t i = 0; i < channels.size(); ++i) {
    const ChannelKind kind = channels[i];
    auto adapter = adapters_.find(kind);
    if (adapter == adapters_.end()) {
      record.failures.push_back(std::string(to_string(kind)) + ": channel not configured");
      continue;
    }
    std::string address;
    if (auto it = user.channel_addresses.find(kind); it != user.channel_addresses.end()) {
      address = it->second;
    } else if (kind == ChannelKind::Dashboard) {
      address = "inbox:" + user.user_id;
    }
    auto result = adapter->second->send(item, user, address, record.delivery_id);
    if (result.ok) {
      record.channel = kind;
      record.address = address;
      record.status = i == 0 ? DeliveryStatus::Sent : DeliveryStatus::FallbackUsed;
      return record;
    }
    record.failures.push_back(std::string(to_string(kind)) + ": " + result.error);
  }
  return record;
}

std::string make_delivery_id(std::string_view request_id, int round, std::string_view user_id) {
  std::string out = std::string(request_id) + "." + std::to_string(round) + "." +
                    std::string(user_id);
  for (char& c : out) {
    const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                      (c >= '0' && c <= '9') || c == '.' || c == '-' || c == '_';
    if (!keep) c = '_';
  }
  return out;
}

}  // namespace hitl::channel
