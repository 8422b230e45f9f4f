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

#include "hitl/service.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "hitl/autonomy.hpp"
#include "hitl/routing.hpp"
#include "hitl/signature.hpp"

namespace hitl::service {
namespace {

using audit::AuditEvent;
using audit::AuditRecord;

ApiResponse error_response(int status, std::string code, std::string detail = {},
                           json extra = json::object()) {
  json body = {{"error", std::move(code)}};
  if (!detail.empty()) body["detail"] = std::move(detail);
  for (auto& [key, value] : extra.items()) body[key] = value;
  return {status, std::move(body)};
}

ApiResponse storage_failure(const audit::StorageError& e) {
  return error_response(503, "storage_unavailable", e.what());
}

int urgency_rank(Urgency urgency) {
  switch (urgency) {
    case Urgency::Realtime: return 2;
    case Urgency::Normal: return 1;
    case Urgency::Low: return 0;
  }
  return 1;
}

org::ResolutionContext resolution_context(const HitlRequest& request) {
  org::ResolutionContext context;
  for (const auto& [name, value] : request.facts) {
    if (const auto* text = std::get_if<std::string>(&value)) context.emplace(name, *text);
  }
  context.emplace("agent_id", request.agent_id);
  return context;
}

json names(const std::vector<org::User>& users) {
  json out = json::array();
  for (const auto& user : users) out.push_back(user.user_id);
  return out;
}

}  // namespace

HitlService::HitlService(ServiceConfig config, org::OrgModel org,
                         std::unique_ptr<audit::EventLog> log, ServiceDependencies deps)
    : config_(std::move(config)),
      deps_(std::move(deps)),
      log_(std::move(log)),
      org_(std::make_shared<const org::OrgModel>(std::move(org))),
      public_base_url_(config_.public_base_url) {
  if (!deps_.clock) deps_.clock = std::make_shared<SystemClock>();
  if (!deps_.transport) deps_.transport = std::make_shared<DefaultHttpTransport>();

  for (ChannelKind kind : config_.channels) {
    if (kind == ChannelKind::Webhook) {
      router_.register_adapter(std::make_shared<channel::WebhookAdapter>(
          deps_.transport, config_.webhook_timeout, config_.webhook_retries));
    } else if (kind == ChannelKind::EmailStub) {
      router_.register_adapter(std::make_shared<channel::EmailStubAdapter>(config_.email_outbox));
    }
  }

  const auto records = log_->records();
  auto states = replay(records);
  std::uint64_t max_id = 0;
  for (auto& [id, state] : states) {
    unsigned long long n = 0;
    if (std::sscanf(id.c_str(), "hitl-%llu", &n) == 1) max_id = std::max<std::uint64_t>(max_id, n);
    auto entry = std::make_shared<Entry>();
    entry->state = std::move(state);
    index_.emplace(id, std::move(entry));
  }
  next_id_ = max_id + 1;
}

HitlService::~HitlService() { stop_waiting(); }

std::unique_ptr<HitlService> HitlService::open(const ServiceConfig& config,
                                               ServiceDependencies deps) {
  org::OrgModel org = org::load_org_model(json{{"users", json::array()}});
  if (config.org_model_path) {
    std::ifstream in(*config.org_model_path);
    if (!in) throw ConfigError("cannot read org model " + config.org_model_path->string());
    org = org::load_org_model(json::parse(in));
  }
  if (config.fact_provider_path && !deps.fact_provider) {
    deps.fact_provider = std::make_shared<StaticFactProvider>(
        StaticFactProvider::load_file(*config.fact_provider_path));
  }
  auto log = audit::EventLog::open_file(config.storage_path, config.sync_writes);
  return std::make_unique<HitlService>(config, std::move(org), std::move(log), std::move(deps));
}

std::string HitlService::next_request_id() {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "hitl-%08llu", static_cast<unsigned long long>(next_id_++));
  return buf;
}

std::shared_ptr<HitlService::Entry> HitlService::find_entry(std::string_view request_id) const {
  std::shared_lock lock(index_mu_);
  auto it = index_.find(request_id);
  return it == index_.end() ? nullptr : it->second;
}

std::vector<std::shared_ptr<HitlService::Entry>> HitlService::all_entries() const {
  std::shared_lock lock(index_mu_);
  std::vector<std::shared_ptr<Entry>> out;
  out.reserve(index_.size());
  for (const auto& [_, entry] : index_) out.push_back(entry);
  return out;
}

AuditRecord HitlService::make_record(std::string_view request_id, AuditEvent event,
                                     json payload) const {
  AuditRecord record;
  record.request_id = std::string(request_id);
  record.event = event;
  record.payload = std::move(payload);
  record.ts = deps_.clock->now();
  return record;
}

void HitlService::commit(Entry& entry, std::vector<AuditRecord> batch) {
  if (batch.empty()) return;
  bool callback_queued = false;
  for (const auto& stored : log_->append(std::move(batch))) {
    if (stored.event == AuditEvent::Submitted) {
      entry.state = state_from_submitted(stored);
    } else {
      apply_event(entry.state, stored);
    }
    if (stored.payload.contains("callback")) callback_queued = true;
  }
  if (callback_queued) {
    {
      std::lock_guard lock(work_mu_);
      work_pending_ = true;
    }
    work_cv_.notify_all();
  }
}

std::string HitlService::respond_endpoint() const {
  std::lock_guard lock(base_url_mu_);
  return public_base_url_ + "/api/hitl/respond";
}

void HitlService::set_public_base_url(std::string url) {
  std::lock_guard lock(base_url_mu_);
  public_base_url_ = std::move(url);
}

std::optional<json> HitlService::callback_for(const RequestState& state, Status terminal,
                                              const std::optional<Resolution>& resolution) const {
  if (!state.request.callback_endpoint) return std::nullopt;
  return json{{"endpoint", *state.request.callback_endpoint},
              {"idempotency_key", idempotency_key(state.request.request_id, terminal, resolution)},
              {"next_attempt_at", format_iso8601(deps_.clock->now())}};
}

std::vector<AuditRecord> HitlService::deliver_round(const RequestState& state,
                                                    const std::vector<org::User>& users,
                                                    int round, bool notification) {
  channel::WorkItem item;
  item.request_id = state.request.request_id;
  item.agent_id = state.request.agent_id;
  item.proposed_action = to_json(state.request.proposed_action);
  item.facts = state.request.facts;
  item.reason = state.disposition ? state.disposition->reason : "";
  item.urgency = state.request.urgency;
  item.respond_by = state.deadline;
  item.respond_endpoint = respond_endpoint();
  item.notification = notification;

  std::vector<AuditRecord> records;
  for (const auto& user : users) {
    const auto channels = channel::select_channel(state.request.urgency, user, config_.routing);
    auto record = router_.deliver(item, user, channels,
                                  channel::make_delivery_id(item.request_id, round, user.user_id),
                                  deps_.clock->now());
    records.push_back(make_record(item.request_id, AuditEvent::Delivered,
                                  {{"delivery", channel::to_json(record)}, {"round", round}}));
  }
  return records;
}

ApiResponse HitlService::submit_request(const json& body) {
  auto validated = validate_request(body);
  if (auto* errors = std::get_if<std::vector<FieldError>>(&validated)) {
    json list = json::array();
    for (const auto& e : *errors) list.push_back(to_json(e));
    return error_response(400, "validation_failed", {}, {{"errors", list}});
  }
  HitlRequest request = std::move(std::get<HitlRequest>(validated));
  if (deps_.fact_provider) {
    augment_facts(request.facts,
                  deps_.fact_provider->lookup(request.agent_id, request.proposed_action.name));
  }
  request.request_id = next_request_id();
  request.created_at = deps_.clock->now();

  const Disposition disposition =
      evaluate_rubric(request.facts, request.confidence, request.rubric);
  const DispositionKind ungated =
      ungated_disposition(request.facts, request.confidence, request.rubric);

  // Participant resolution only matters when someone must be told.
  std::vector<org::User> participants;
  std::optional<org::ResolveError> resolve_error;
  std::string role_spec_text;
  if (creates_work_item(disposition.kind)) {
    role_spec_text = disposition.role_hint.value_or(config_.default_role);
    auto spec = org::RoleSpec::parse(role_spec_text);
    try {
      if (!spec) {
        throw org::ResolveError(org::ResolveError::Kind::RoleUnresolved, role_spec_text);
      }
      participants = org::resolve_participants(*spec, *org_model(), resolution_context(request));
    } catch (const org::ResolveError& e) {
      resolve_error = e;
    }
  }

  const std::string id = request.request_id;
  auto entry = std::make_shared<Entry>();
  std::unique_lock entry_lock(entry->mu);

  json submitted = {{"request", to_json(request)}, {"signature", action_signature(request)}};
  json evaluated = {{"disposition", to_json(disposition)},
                    {"ungated", std::string(to_string(ungated))},
                    {"participants", names(participants)}};
  if (!role_spec_text.empty()) evaluated["role_spec"] = role_spec_text;
  if (resolve_error) {
    evaluated["role_error"] = {{"kind", std::string(org::to_string(resolve_error->kind()))},
                               {"detail", resolve_error->what()}};
  }

  const bool gated = disposition.kind == DispositionKind::RequireHuman;
  const bool awaiting = gated && !resolve_error;

  // Deliveries and the callback payload only need what evaluation produced,
  // so the whole submission is written as one batch.
  RequestState provisional;
  provisional.request = request;
  provisional.disposition = disposition;
  if (awaiting) {
    evaluated["status"] = "awaiting_human";
    if (config_.awaiting_timeout) {
      provisional.deadline = deps_.clock->now() + *config_.awaiting_timeout;
      evaluated["deadline"] = format_iso8601(*provisional.deadline);
    }
  } else {
    evaluated["status"] = "received";
  }

  std::vector<AuditRecord> batch;
  batch.push_back(make_record(id, AuditEvent::Submitted, std::move(submitted)));
  batch.push_back(make_record(id, AuditEvent::Evaluated, std::move(evaluated)));
  if (awaiting) {
    for (auto& record : deliver_round(provisional, participants, 0, false)) {
      batch.push_back(std::move(record));
    }
  } else {
    Resolution resolution;
    resolution.decided_by = DecidedBy::Automated;
    resolution.decided_at = deps_.clock->now();
    switch (disposition.kind) {
      case DispositionKind::AutoApprove:
        resolution.outcome = Outcome::Approve;
        break;
      case DispositionKind::AutoReject:
        resolution.outcome = Outcome::Reject;
        break;
      case DispositionKind::NotifyOnly:
        resolution.outcome = Outcome::Approve;
        resolution.comment = "notify_only";
        for (auto& record : deliver_round(provisional, participants, 0, true)) {
          batch.push_back(std::move(record));
        }
        break;
      case DispositionKind::RequireHuman:
        resolution.outcome = Outcome::Reject;
        resolution.comment = "role_unresolved";
        break;
    }
    json resolved = {{"status", "auto_resolved"}, {"resolution", to_json(resolution)}};
    if (auto cb = callback_for(provisional, Status::AutoResolved, resolution)) {
      resolved["callback"] = std::move(*cb);
    }
    batch.push_back(make_record(id, AuditEvent::Resolved, std::move(resolved)));
  }

  try {
    commit(*entry, std::move(batch));
  } catch (const audit::StorageError& e) {
    return storage_failure(e);
  }
  {
    std::unique_lock index_lock(index_mu_);
    index_.emplace(id, entry);
  }

  const RequestState& state = entry->state;
  json out = {{"request_id", id},
              {"status", std::string(to_string(state.status))},
              {"disposition_reason", disposition.reason},
              {"disposition", to_json(disposition)}};
  if (state.resolution) {
    out["resolution"] = to_json(*state.resolution);
    out["decided_by"] = std::string(to_string(state.resolution->decided_by));
  }
  if (!state.participants.empty()) out["participants"] = state.participants;
  if (!is_terminal(state.status)) out["retry_after_ms"] = config_.retry_after.count();

  if (gated && resolve_error) {
    out["error"] = "RoleUnresolved";
    out["detail"] = resolve_error->what();
    return {422, std::move(out)};
  }
  return {200, std::move(out)};
}

ApiResponse HitlService::get_decision(std::string_view request_id) const {
  auto entry = find_entry(request_id);
  if (!entry) return error_response(404, "not_found", "unknown request_id");
  std::lock_guard lock(entry->mu);
  return {200, decision_body(entry->state, config_.retry_after)};
}

ApiResponse HitlService::submit_response(const json& body) {
  if (!body.is_object()) return error_response(400, "bad_request", "body must be an object");
  for (const char* field : {"request_id", "user_id", "outcome"}) {
    if (!body.contains(field) || !body[field].is_string() || body[field].get<std::string>().empty()) {
      return error_response(400, "bad_request", std::string(field) + " must be a non-empty string");
    }
  }
  const auto request_id = body["request_id"].get<std::string>();
  const auto user_id = body["user_id"].get<std::string>();

  auto entry = find_entry(request_id);
  if (!entry) return error_response(404, "not_found", "unknown request_id");

  const auto outcome = parse_outcome(body["outcome"].get<std::string>());
  if (!outcome) {
    return error_response(400, "bad_request", "outcome must be approve|reject|modify|defer");
  }

  FactMap enrichment;
  if (auto it = body.find("enrichment"); it != body.end() && !it->is_null()) {
    if (!it->is_object()) return error_response(400, "bad_request", "enrichment must be an object");
    for (const auto& [name, value] : it->items()) {
      auto scalar = scalar_from_json(value);
      if (name.empty() || !scalar) {
        return error_response(400, "bad_request", "enrichment values must be scalars");
      }
      enrichment.emplace(name, std::move(*scalar));
    }
  }
  std::optional<json> modified_action;
  if (auto it = body.find("modified_action"); it != body.end() && !it->is_null()) {
    if (!it->is_object()) {
      return error_response(400, "bad_request", "modified_action must be an object");
    }
    modified_action = *it;
  }
  if (*outcome == Outcome::Modify && !modified_action) {
    return error_response(422, "modified_action_required", "modify needs modified_action");
  }
  std::optional<std::string> comment;
  if (auto it = body.find("comment"); it != body.end() && it->is_string()) {
    comment = it->get<std::string>();
  }

  std::lock_guard lock(entry->mu);
  RequestState& state = entry->state;
  if (std::find(state.participants.begin(), state.participants.end(), user_id) ==
      state.participants.end()) {
    return error_response(403, "not_a_participant", user_id + " cannot respond to " + request_id);
  }
  if (state.status != Status::AwaitingHuman) {
    json extra = {{"status", std::string(to_string(state.status))}};
    if (state.resolution) extra["resolution"] = to_json(*state.resolution);
    return error_response(409, "already_resolved", {}, std::move(extra));
  }

  json responded = {{"user_id", user_id}, {"outcome", std::string(to_string(*outcome))}};
  if (comment) responded["comment"] = *comment;
  if (!enrichment.empty()) responded["enrichment"] = facts_to_json(enrichment);
  if (modified_action) responded["modified_action"] = *modified_action;

  try {
    if (*outcome == Outcome::Defer) {
      std::vector<AuditRecord> batch;
      if (state.defer_count >= config_.max_defers) {
        responded["requeued"] = false;
        batch.push_back(make_record(request_id, AuditEvent::Responded, std::move(responded)));
        json expired = {{"reason", "max_defers"}};
        if (auto cb = callback_for(state, Status::Expired, std::nullopt)) {
          expired["callback"] = std::move(*cb);
        }
        batch.push_back(make_record(request_id, AuditEvent::Expired, std::move(expired)));
        commit(*entry, std::move(batch));
      } else {
        responded["requeued"] = true;
        responded["defer_count"] = state.defer_count + 1;
        if (config_.awaiting_timeout) {
          responded["deadline"] = format_iso8601(deps_.clock->now() + *config_.awaiting_timeout);
        }
        batch.push_back(make_record(request_id, AuditEvent::Responded, std::move(responded)));
        commit(*entry, std::move(batch));

        std::vector<org::User> users;
        const auto model = org_model();
        for (const auto& id : state.participants) {
          if (const auto* user = model->find_user(id)) {
            users.push_back(*user);
          } else {
            users.push_back(org::User{id, id, {}});  // removed by a reload; inbox still works
          }
        }
        commit(*entry, deliver_round(state, users, state.defer_count, false));
      }
    } else {
      Resolution resolution;
      resolution.outcome = *outcome;
      resolution.modified_action = modified_action;
      resolution.enrichment = enrichment;
      resolution.decided_by = DecidedBy::Human;
      resolution.user_id = user_id;
      resolution.decided_at = deps_.clock->now();
      resolution.comment = comment;

      json resolved = {{"status", "resolved"}, {"resolution", to_json(resolution)}};
      if (auto cb = callback_for(state, Status::Resolved, resolution)) {
        resolved["callback"] = std::move(*cb);
      }
      std::vector<AuditRecord> batch;
      batch.push_back(make_record(request_id, AuditEvent::Responded, std::move(responded)));
      batch.push_back(make_record(request_id, AuditEvent::Resolved, std::move(resolved)));
      commit(*entry, std::move(batch));
    }
  } catch (const audit::StorageError& e) {
    return storage_failure(e);
  }

  json out = {{"request_id", request_id},
              {"status", std::string(to_string(state.status))},
              {"defer_count", state.defer_count}};
  if (state.resolution) out["resolution"] = to_json(*state.resolution);
  return {200, std::move(out)};
}

ApiResponse HitlService::list_pending(std::string_view user_id) const {
  if (!org_model()->find_user(user_id)) return error_response(404, "unknown_user");

  struct Item {
    int rank;
    Timestamp created_at;
    std::string request_id;
    json summary;
  };
  std::vector<Item> items;
  for (const auto& entry : all_entries()) {
    std::lock_guard lock(entry->mu);
    const RequestState& s = entry->state;
    if (s.status != Status::AwaitingHuman) continue;
    if (std::find(s.participants.begin(), s.participants.end(), user_id) == s.participants.end()) {
      continue;
    }
    json summary = {{"request_id", s.request.request_id},
                    {"agent_id", s.request.agent_id},
                    {"proposed_action", to_json(s.request.proposed_action)},
                    {"facts", facts_to_json(s.request.facts)},
                    {"reason", s.disposition ? s.disposition->reason : ""},
                    {"urgency", std::string(to_string(s.request.urgency))},
                    {"defer_count", s.defer_count},
                    {"created_at", format_iso8601(s.request.created_at)}};
    if (s.request.confidence) summary["confidence"] = *s.request.confidence;
    if (s.deadline) summary["respond_by"] = format_iso8601(*s.deadline);
    items.push_back({urgency_rank(s.request.urgency), s.request.created_at, s.request.request_id,
                     std::move(summary)});
  }
  std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    if (a.rank != b.rank) return a.rank > b.rank;
    if (a.created_at != b.created_at) return a.created_at < b.created_at;
    return a.request_id < b.request_id;
  });
  json list = json::array();
  for (auto& item : items) list.push_back(std::move(item.summary));
  return {200, {{"user_id", std::string(user_id)}, {"items", std::move(list)}}};
}

ApiResponse HitlService::reload_org_model(const json& document) {
  org::OrgModel model;
  try {
    model = org::load_org_model(document);
  } catch (const org::OrgLoadError& e) {
    json extra = json::object();
    if (!e.cycle().empty()) extra["cycle"] = e.cycle();
    return error_response(400, std::string(org::to_string(e.kind())), e.detail(), extra);
  }

  std::lock_guard lock(org_mu_);
  try {
    log_->append(make_record("", AuditEvent::OrgReloaded,
                             {{"users", model.users().size()},
                              {"roles", model.roles()},
                              {"document", model.to_json()}}));
  } catch (const audit::StorageError& e) {
    return storage_failure(e);
  }
  const auto users = model.users().size();
  org_ = std::make_shared<const org::OrgModel>(std::move(model));
  return {200, {{"status", "ok"}, {"users", users}}};
}

json HitlService::export_a2a_descriptor() const {
  json comparators = json::array();
  for (auto c : {Comparator::Lt, Comparator::Le, Comparator::Gt, Comparator::Ge, Comparator::Eq,
                 Comparator::Ne, Comparator::InSet, Comparator::MatchesPattern}) {
    comparators.push_back(std::string(to_string(c)));
  }
  json dispositions = json::array();
  for (auto d : {DispositionKind::AutoApprove, DispositionKind::AutoReject,
                 DispositionKind::RequireHuman, DispositionKind::NotifyOnly}) {
    dispositions.push_back(std::string(to_string(d)));
  }
  json channels = json::array();
  for (auto kind : config_.channels) channels.push_back(std::string(to_string(kind)));

  return {
      {"WHEN",
       {{"description", "Rubric evaluated per request; the first matching rule decides."},
        {"rule_schema",
         {{"fields", {"fact", "comparator", "operand", "disposition", "role_hint"}},
          {"comparators", comparators},
          {"dispositions", dispositions}}},
        {"default_disposition", std::string(to_string(DispositionKind::RequireHuman))},
        {"missing_fact", std::string(to_string(DispositionKind::RequireHuman))},
        {"reserved_facts", {std::string(kConfidenceFact)}}}},
      {"WHO",
       {{"description", "Role spec resolved against the organization model at runtime."},
        {"role_spec_kinds", {"named_role", "manager_of", "user_literal"}},
        {"role_spec_syntax", {"role:<name>", "manager_of:<context key>", "user:<user_id>"}},
        {"default_role", config_.default_role},
        {"roles", org_model()->roles()}}},
      {"WHAT",
       {{"description", "Approve/Reject/Modify/Defer | Enrich context | Notification"},
        {"vocabulary", {"approve", "reject", "modify", "defer", "enrich", "notify"}},
        {"outcomes", {"approve", "reject", "modify", "defer"}}}},
      {"WHERE",
       {{"description", "Delivery channels, chosen per urgency with dashboard as fallback."},
        {"channels", channels},
        {"routing_policy", config_.routing.to_json()}}},
  };
}

ApiResponse HitlService::query_audit(std::optional<std::string_view> request_id,
                                     std::size_t offset, std::size_t limit) const {
  json records = json::array();
  if (request_id) {
    for (const auto& record : log_->for_request(*request_id)) records.push_back(to_json(record));
    return {200, {{"request_id", std::string(*request_id)}, {"records", std::move(records)}}};
  }
  const auto total = log_->size();
  for (const auto& record : log_->page(offset, limit)) records.push_back(to_json(record));
  json body = {{"records", std::move(records)},
               {"offset", offset},
               {"limit", limit},
               {"total", total}};
  if (offset + limit < total) body["next_offset"] = offset + limit;
  return {200, std::move(body)};
}

ApiResponse HitlService::suggestions(std::size_t threshold) const {
  if (threshold == 0) return error_response(400, "bad_request", "threshold must be >= 1");
  const auto records = log_->records();
  json list = json::array();
  for (const auto& s : audit::analyze_autonomy(records, threshold)) list.push_back(to_json(s));
  return {200, {{"threshold", threshold}, {"suggestions", std::move(list)}}};
}

std::size_t HitlService::dispatch_callbacks() {
  std::lock_guard dispatch_lock(dispatch_mu_);
  const Timestamp now = deps_.clock->now();

  struct Due {
    std::shared_ptr<Entry> entry;
    CallbackTask task;
    std::string body;
  };
  std::vector<Due> due;
  for (const auto& entry : all_entries()) {
    std::lock_guard lock(entry->mu);
    const auto& cb = entry->state.callback;
    if (!cb || cb->delivered || cb->parked || cb->next_attempt_at > now) continue;
    due.push_back({entry, *cb, callback_body(entry->state).dump()});
  }

  std::size_t delivered = 0;
  for (auto& item : due) {
    const HttpResult result =
        deps_.transport->post_json(item.task.endpoint, item.body, config_.callback.timeout);

    std::lock_guard lock(item.entry->mu);
    const auto& current = item.entry->state.callback;
    if (!current || current->attempts != item.task.attempts || current->delivered) continue;

    const int attempt = item.task.attempts + 1;
    const std::string& id = item.task.request_id;
    json attempted = {{"attempt", attempt}, {"ok", result.ok()}, {"http_status", result.status}};
    if (!result.error.empty()) attempted["error"] = result.error;

    std::vector<AuditRecord> batch;
    if (result.ok()) {
      batch.push_back(make_record(id, AuditEvent::CallbackAttempted, std::move(attempted)));
      batch.push_back(make_record(id, AuditEvent::CallbackDelivered, {{"attempts", attempt}}));
    } else if (attempt >= config_.callback.max_attempts) {
      batch.push_back(make_record(id, AuditEvent::CallbackAttempted, std::move(attempted)));
      batch.push_back(make_record(id, AuditEvent::CallbackParked, {{"attempts", attempt}}));
    } else {
      const double scale = std::pow(config_.callback.factor, attempt - 1);
      const auto delay = std::chrono::milliseconds{static_cast<std::int64_t>(
          std::llround(static_cast<double>(config_.callback.base_delay.count()) * scale))};
      attempted["next_attempt_at"] = format_iso8601(deps_.clock->now() + delay);
      batch.push_back(make_record(id, AuditEvent::CallbackAttempted, std::move(attempted)));
    }
    try {
      commit(*item.entry, std::move(batch));
    } catch (const audit::StorageError&) {
      continue;  // the attempt is retried on the next sweep
    }
    if (result.ok()) ++delivered;
  }
  return delivered;
}

std::size_t HitlService::expire_overdue() {
  const Timestamp now = deps_.clock->now();
  std::size_t expired = 0;
  for (const auto& entry : all_entries()) {
    std::lock_guard lock(entry->mu);
    const RequestState& s = entry->state;
    if (s.status != Status::AwaitingHuman || !s.deadline || *s.deadline > now) continue;
    json payload = {{"reason", "deadline"}};
    if (auto cb = callback_for(s, Status::Expired, std::nullopt)) payload["callback"] = *cb;
    try {
      commit(*entry, {make_record(s.request.request_id, AuditEvent::Expired, std::move(payload))});
      ++expired;
    } catch (const audit::StorageError&) {
    }
  }
  return expired;
}

void HitlService::wait_for_work(std::chrono::milliseconds timeout) {
  std::unique_lock lock(work_mu_);
  work_cv_.wait_for(lock, timeout, [this] { return work_pending_ || stop_waiting_; });
  work_pending_ = false;
}

void HitlService::stop_waiting() {
  {
    std::lock_guard lock(work_mu_);
    stop_waiting_ = true;
  }
  work_cv_.notify_all();
}

std::optional<RequestState> HitlService::snapshot(std::string_view request_id) const {
  auto entry = find_entry(request_id);
  if (!entry) return std::nullopt;
  std::lock_guard lock(entry->mu);
  return entry->state;
}

std::vector<RequestState> HitlService::snapshot_all() const {
  std::vector<RequestState> out;
  for (const auto& entry : all_entries()) {
    std::lock_guard lock(entry->mu);
    out.push_back(entry->state);
  }
  return out;
}

std::shared_ptr<const org::OrgModel> HitlService::org_model() const {
  std::lock_guard lock(org_mu_);
  return org_;
}

}  // namespace hitl::service
