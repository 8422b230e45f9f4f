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

#include "hitl/event_log.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

namespace hitl::audit {

std::string_view to_string(AuditEvent event) {
  switch (event) {
    case AuditEvent::Submitted: return "submitted";
    case AuditEvent::Evaluated: return "evaluated";
    case AuditEvent::Delivered: return "delivered";
    case AuditEvent::Responded: return "responded";
    case AuditEvent::Resolved: return "resolved";
    case AuditEvent::Expired: return "expired";
    case AuditEvent::CallbackAttempted: return "callback_attempted";
    case AuditEvent::CallbackDelivered: return "callback_delivered";
    case AuditEvent::CallbackParked: return "callback_parked";
    case AuditEvent::OrgReloaded: return "org_reloaded";
  }
  return "submitted";
}

std::optional<AuditEvent> parse_audit_event(std::string_view text) {
  static constexpr AuditEvent kAll[] = {
      AuditEvent::Submitted,         AuditEvent::Evaluated,         AuditEvent::Delivered,
      AuditEvent::Responded,         AuditEvent::Resolved,          AuditEvent::Expired,
      AuditEvent::CallbackAttempted, AuditEvent::CallbackDelivered, AuditEvent::CallbackParked,
      AuditEvent::OrgReloaded};
  for (auto event : kAll) {
    if (to_string(event) == text) return event;
  }
  return std::nullopt;
}

json to_json(const AuditRecord& record) {
  return {{"seq", record.seq},
          {"request_id", record.request_id},
          {"event", std::string(to_string(record.event))},
          {"payload", record.payload},
          {"ts", format_iso8601(record.ts)}};
}

AuditRecord record_from_json(const json& doc) {
  AuditRecord out;
  out.seq = doc.at("seq").get<std::uint64_t>();
  out.request_id = doc.at("request_id").get<std::string>();
  auto event = parse_audit_event(doc.at("event").get<std::string>());
  if (!event) throw StorageError("unknown audit event " + doc.at("event").dump());
  out.event = *event;
  out.payload = doc.at("payload");
  auto ts = parse_iso8601(doc.at("ts").get<std::string>());
  if (!ts) throw StorageError("malformed ts in audit record " + std::to_string(out.seq));
  out.ts = *ts;
  return out;
}

FileSink::FileSink(const std::filesystem::path& path, bool sync) : sync_(sync) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  fd_ = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0) {
    throw StorageError("cannot open event log " + path.string() + ": " + std::strerror(errno));
  }
}

FileSink::~FileSink() {
  if (fd_ >= 0) ::close(fd_);
}

void FileSink::write(std::string_view lines) {
  const char* data = lines.data();
  std::size_t left = lines.size();
  while (left > 0) {
    const ssize_t n = ::write(fd_, data, left);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw StorageError(std::string("event log write failed: ") + std::strerror(errno));
    }
    data += n;
    left -= static_cast<std::size_t>(n);
  }
  if (sync_ && ::fdatasync(fd_) != 0) {
    throw StorageError(std::string("event log sync failed: ") + std::strerror(errno));
  }
}

EventLog::EventLog(std::unique_ptr<LogSink> sink, std::vector<AuditRecord> existing)
    : sink_(std::move(sink)) {
  for (auto& record : existing) {
    if (record.seq != next_seq_) {
      throw StorageError("event log sequence gap at seq " + std::to_string(record.seq));
    }
    ++next_seq_;
    if (!record.request_id.empty()) by_request_[record.request_id].push_back(records_.size());
    records_.push_back(std::move(record));
  }
}

std::vector<AuditRecord> EventLog::read_file(const std::filesystem::path& path) {
  std::vector<AuditRecord> out;
  std::ifstream in(path, std::ios::binary);
  if (!in) return out;
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto end = text.find('\n', pos);
    if (end == std::string::npos) break;  // torn tail
    const auto line = std::string_view(text).substr(pos, end - pos);
    pos = end + 1;
    if (line.empty()) continue;
    try {
      out.push_back(record_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw StorageError("corrupt event log record after seq " +
                         std::to_string(out.empty() ? 0 : out.back().seq) + ": " + e.what());
    }
  }
  return out;
}

std::unique_ptr<EventLog> EventLog::open_file(const std::filesystem::path& path, bool sync) {
  std::error_code ec;
  if (std::filesystem::exists(path, ec)) {
    // Drop a torn final line so the next append starts on a fresh line.
    std::ifstream in(path, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    if (!text.empty() && text.back() != '\n') {
      const auto last_newline = text.rfind('\n');
      const auto keep = last_newline == std::string::npos ? 0 : last_newline + 1;
      std::filesystem::resize_file(path, keep, ec);
      if (ec) throw StorageError("cannot truncate torn event log tail: " + ec.message());
    }
  }
  auto existing = read_file(path);
  return std::make_unique<EventLog>(std::make_unique<FileSink>(path, sync), std::move(existing));
}

std::unique_ptr<EventLog> EventLog::in_memory() {
  return std::make_unique<EventLog>(std::make_unique<MemorySink>());
}

std::vector<AuditRecord> EventLog::append(std::vector<AuditRecord> batch) {
  std::lock_guard lock(mu_);
  std::string lines;
  std::uint64_t seq = next_seq_;
  for (auto& record : batch) {
    record.seq = seq++;
    lines += to_json(record).dump();
    lines += '\n';
  }
  sink_->write(lines);
  next_seq_ = seq;
  for (const auto& record : batch) {
    if (!record.request_id.empty()) by_request_[record.request_id].push_back(records_.size());
    records_.push_back(record);
  }
  return batch;
}

AuditRecord EventLog::append(AuditRecord record) {
  std::vector<AuditRecord> batch;
  batch.push_back(std::move(record));
  return std::move(append(std::move(batch)).front());
}

std::vector<AuditRecord> EventLog::records() const {
  std::lock_guard lock(mu_);
  return records_;
}

std::vector<AuditRecord> EventLog::for_request(std::string_view request_id) const {
  std::lock_guard lock(mu_);
  std::vector<AuditRecord> out;
  auto it = by_request_.find(request_id);
  if (it == by_request_.end()) return out;
  out.reserve(it->second.size());
  for (auto index : it->second) out.push_back(records_[index]);
  return out;
}

std::vector<AuditRecord> EventLog::page(std::size_t offset, std::size_t limit) const {
  std::lock_guard lock(mu_);
  std::vector<AuditRecord> out;
  for (std::size_t i = offset; i < records_.size() && out.size() < limit; ++i) {
    out.push_back(records_[i]);
  }
  return out;
}

std::size_t EventLog::size() const {
  std::lock_guard lock(mu_);
  return records_.size();
}

}  // namespace hitl::audit
