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

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hitl/time.hpp"
#include "hitl/types.hpp"

namespace hitl::audit {

enum class AuditEvent {
  Submitted,
  Evaluated,
  Delivered,
  Responded,
  Resolved,
  Expired,
  CallbackAttempted,
  CallbackDelivered,
  CallbackParked,
  OrgReloaded,
};

std::string_view to_string(AuditEvent event);
std::optional<AuditEvent> parse_audit_event(std::string_view text);

/// One lifecycle event. Records are immutable once appended; the log is both
/// the audit trail and the service's store.
struct AuditRecord {
  std::uint64_t seq = 0;
  std::string request_id;  // empty for service-wide events (org_reloaded)
  AuditEvent event = AuditEvent::Submitted;
  json payload = json::object();
  Timestamp ts{};

  friend bool operator==(const AuditRecord&, const AuditRecord&) = default;
};

/// Line format: {"seq":..,"request_id":..,"event":..,"payload":..,"ts":..}
json to_json(const AuditRecord& record);
AuditRecord record_from_json(const json& doc);

class StorageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Where serialized records go. write() must either persist the whole chunk
/// or throw StorageError.
class LogSink {
 public:
  virtual ~LogSink() = default;
  virtual void write(std::string_view lines) = 0;
};

/// Append-only newline-delimited JSON file.
class FileSink final : public LogSink {
 public:
  FileSink(const std::filesystem::path& path, bool sync);
  ~FileSink() override;
  FileSink(const FileSink&) = delete;
  FileSink& operator=(const FileSink&) = delete;

  void write(std::string_view lines) override;

 private:
  int fd_ = -1;
  bool sync_;
};

class MemorySink final : public LogSink {
 public:
  void write(std::string_view lines) override { data_.append(lines); }
  const std::string& data() const { return data_; }

 private:
  std::string data_;
};

/// Sequenced, append-only record store with an in-memory copy for queries.
/// Thread-safe. Sequence numbers start at 1 and increase by one per record.
class EventLog {
 public:
  explicit EventLog(std::unique_ptr<LogSink> sink, std::vector<AuditRecord> existing = {});

  /// Opens (creating if needed) an NDJSON file and loads what it holds. A torn
  /// final line left by a crash is dropped; corruption elsewhere throws
  /// StorageError.
  static std::unique_ptr<EventLog> open_file(const std::filesystem::path& path, bool sync = true);
  static std::unique_ptr<EventLog> in_memory();

  /// Reads records from an NDJSON file without opening it for writing.
  static std::vector<AuditRecord> read_file(const std::filesystem::path& path);

  /// Assigns consecutive sequence numbers and timestamps-as-given, persists
  /// the whole batch in one write, and only then makes it visible. Returns the
  /// records as stored. Throws StorageError; on failure nothing is appended.
  std::vector<AuditRecord> append(std::vector<AuditRecord> batch);
  AuditRecord append(AuditRecord record);

  std::vector<AuditRecord> records() const;
  std::vector<AuditRecord> for_request(std::string_view request_id) const;
  std::vector<AuditRecord> page(std::size_t offset, std::size_t limit) const;
  std::size_t size() const;

 private:
  mutable std::mutex mu_;
  std::unique_ptr<LogSink> sink_;
  std::vector<AuditRecord> records_;
  std::map<std::string, std::vector<std::size_t>, std::less<>> by_request_;
  std::uint64_t next_seq_ = 1;
};

}  // namespace hitl::audit
