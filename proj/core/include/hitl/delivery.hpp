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
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hitl/http_transport.hpp"
#include "hitl/org_model.hpp"
#include "hitl/time.hpp"
#include "hitl/types.hpp"

namespace hitl::channel {

/// What a participant receives: enough context to decide, plus where to answer.
struct WorkItem {
  std::string request_id;
  std::string agent_id;
  json proposed_action;
  FactMap facts;
  std::string reason;
  Urgency urgency = Urgency::Normal;
  std::optional<Timestamp> respond_by;
  std::string respond_endpoint;
  /// notify_only deliveries carry no decision to make.
  bool notification = false;
};

json to_json(const WorkItem& item);

enum class DeliveryStatus { Sent, Failed, FallbackUsed };

std::string_view to_string(DeliveryStatus status);

struct DeliveryRecord {
  std::string delivery_id;
  std::string request_id;
  std::string user_id;
  ChannelKind channel = ChannelKind::Dashboard;
  std::string address;
  DeliveryStatus status = DeliveryStatus::Sent;
  Timestamp attempted_at{};
  /// "<channel>: <error>" for every channel tried before the one that worked.
  std::vector<std::string> failures;

  friend bool operator==(const DeliveryRecord&, const DeliveryRecord&) = default;
};

json to_json(const DeliveryRecord& record);
DeliveryRecord delivery_from_json(const json& doc);

struct AdapterResult {
  bool ok = false;
  std::string error;
};

class ChannelAdapter {
 public:
  virtual ~ChannelAdapter() = default;
  virtual ChannelKind kind() const = 0;
  virtual AdapterResult send(const WorkItem& item, const org::User& user,
                             std::string_view address, std::string_view delivery_id) = 0;
};

/// In-process inbox per user; the approver UI reads pending work through the
/// service, this keeps what was pushed to each inbox. Always succeeds.
class DashboardInbox final : public ChannelAdapter {
 public:
  struct Entry {
    std::string delivery_id;
    std::string request_id;
    bool notification = false;
  };

  ChannelKind kind() const override { return ChannelKind::Dashboard; }
  AdapterResult send(const WorkItem& item, const org::User& user, std::string_view address,
                     std::string_view delivery_id) override;

  std::vector<Entry> entries(std::string_view user_id) const;

 private:
  mutable std::mutex mu_;
  std::map<std::string, std::vector<Entry>, std::less<>> inboxes_;
};

/// POSTs the work item as JSON to the user's webhook address. A non-2xx reply
/// or a transport error counts as failure; `retries` extra attempts are made
/// before giving up on this channel.
class WebhookAdapter final : public ChannelAdapter {
 public:
  WebhookAdapter(std::shared_ptr<HttpTransport> transport, std::chrono::milliseconds timeout,
                 int retries = 1);

  ChannelKind kind() const override { return ChannelKind::Webhook; }
  AdapterResult send(const WorkItem& item, const org::User& user, std::string_view address,
                     std::string_view delivery_id) override;

 private:
  std::shared_ptr<HttpTransport> transport_;
  std::chrono::milliseconds timeout_;
  int retries_;
};

/// Writes `<delivery_id>.json` into an outbox directory in place of sending mail.
class EmailStubAdapter final : public ChannelAdapter {
 public:
  explicit EmailStubAdapter(std::filesystem::path outbox);

  ChannelKind kind() const override { return ChannelKind::EmailStub; }
  AdapterResult send(const WorkItem& item, const org::User& user, std::string_view address,
                     std::string_view delivery_id) override;

  const std::filesystem::path& outbox() const { return outbox_; }

 private:
  std::filesystem::path outbox_;
};

/// Tries channels in order until one accepts the item. Failures are recorded
/// in the returned DeliveryRecord, never thrown. With dashboard last in the
/// list (select_channel guarantees it) delivery cannot fail outright.
class ChannelRouter {
 public:
  ChannelRouter();

  /// Replaces any adapter of the same kind. The dashboard inbox is built in.
  void register_adapter(std::shared_ptr<ChannelAdapter> adapter);

  DeliveryRecord deliver(const WorkItem& item, const org::User& user,
                         std::span<const ChannelKind> channels, std::string delivery_id,
                         Timestamp now);

  DashboardInbox& dashboard() { return *dashboard_; }
  const DashboardInbox& dashboard() const { return *dashboard_; }

 private:
  std::shared_ptr<DashboardInbox> dashboard_;
  std::map<ChannelKind, std::shared_ptr<ChannelAdapter>> adapters_;
};

/// `<request_id>.<round>.<user_id>` with anything outside [A-Za-z0-9._-]
/// replaced by '_', so it is usable as a file name.
std::string make_delivery_id(std::string_view request_id, int round, std::string_view user_id);

}  // namespace hitl::channel
