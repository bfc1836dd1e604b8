// Copyright 2026 the Multiverse authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "multiverse/audit.hpp"

#include <fstream>

#include "multiverse/frame_io.hpp"
#include "multiverse/util.hpp"

namespace multiverse {
namespace {

using nlohmann::json;

json opt_string(const std::optional<std::string>& v) {
  return v ? json(*v) : json(nullptr);
}

std::optional<std::string> get_opt_string(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (v.is_null()) return std::nullopt;
  return v.get<std::string>();
}

}  // namespace

std::string_view to_string(AuditAction a) {
  switch (a) {
    case AuditAction::AccessRemote: return "access-remote";
    case AuditAction::ReadCached: return "read-cached";
    case AuditAction::ThirdPartyRead: return "third-party-read";
    case AuditAction::Establish: return "establish";
    case AuditAction::Revoke: return "revoke";
    case AuditAction::ImplementTemplate: return "implement-template";
    case AuditAction::Sweep: return "sweep";
  }
  return "unknown";
}

std::optional<AuditAction> audit_action_from_string(std::string_view name) {
  for (AuditAction a :
       {AuditAction::AccessRemote, AuditAction::ReadCached,
        AuditAction::ThirdPartyRead, AuditAction::Establish, AuditAction::Revoke,
        AuditAction::ImplementTemplate, AuditAction::Sweep}) {
    if (to_string(a) == name) return a;
  }
  return std::nullopt;
}

nlohmann::json audit_record_to_json(const AuditRecord& r, bool include_hash) {
  json j{{"action", std::string(to_string(r.action))},
         {"actor", r.actor},
         {"frameVersion", r.frame_version},
         {"outcome", json{{"ok", r.ok}, {"reason", r.reason}}},
         {"prevHash", hex_encode(r.prev_hash)},
         {"purpose", opt_string(r.purpose)},
         {"query", opt_string(r.query)},
         {"resourceId", opt_string(r.resource_id)},
         {"seq", r.seq},
         {"timestamp", r.timestamp},
         {"tunnel", opt_string(r.tunnel)},
         {"world", opt_string(r.world)}};
  if (r.report) {
    j["report"] = *r.report;
  } else {
    j["report"] = nullptr;
  }
  if (include_hash) j["hash"] = hex_encode(r.hash);
  return j;
}

AuditRecord audit_record_from_json(const nlohmann::json& j) {
  AuditRecord r;
  auto action_name = j.at("action").get<std::string>();
  auto action = audit_action_from_string(action_name);
  if (!action) throw ParseError(0, "unknown audit action '" + action_name + "'");
  r.action = *action;
  r.actor = j.at("actor").get<std::string>();
  r.frame_version = j.at("frameVersion").get<std::uint64_t>();
  r.ok = j.at("outcome").at("ok").get<bool>();
  r.reason = j.at("outcome").at("reason").get<std::string>();
  r.seq = j.at("seq").get<std::uint64_t>();
  r.timestamp = j.at("timestamp").get<Timestamp>();
  r.world = get_opt_string(j, "world");
  r.tunnel = get_opt_string(j, "tunnel");
  r.purpose = get_opt_string(j, "purpose");
  r.query = get_opt_string(j, "query");
  r.resource_id = get_opt_string(j, "resourceId");
  if (!j.at("report").is_null())
    r.report = j.at("report").get<ValidationReport>();

  auto read_hash = [&](const char* key) {
    auto bytes = hex_decode(j.at(key).get<std::string>());
    if (bytes.size() != 32)
      throw ParseError(0, std::string("bad digest length for '") + key + "'");
    Hash256 out{};
    std::copy(bytes.begin(), bytes.end(), out.begin());
    return out;
  };
  r.prev_hash = read_hash("prevHash");
  r.hash = read_hash("hash");
  return r;
}

Hash256 audit_record_hash(const AuditRecord& r) {
  return sha256(audit_record_to_json(r, /*include_hash=*/false).dump());
}

AuditLog::AuditLog(std::filesystem::path sink) : sink_(std::move(sink)) {
  if (std::filesystem::exists(*sink_)) records_ = load_file(*sink_);
}

const AuditRecord& AuditLog::append(const AuditEvent& event) {
  std::scoped_lock lock(mu_);
  AuditRecord r;
  r.seq = records_.size();
  r.timestamp = event.timestamp;
  r.actor = event.actor;
  r.action = event.action;
  r.world = event.world;
  r.tunnel = event.tunnel;
  r.purpose = event.purpose;
  r.query = event.query;
  r.resource_id = event.resource_id;
  r.ok = event.ok;
  r.reason = event.reason;
  r.report = event.report;
  r.frame_version = event.frame_version;
  r.prev_hash = records_.empty() ? Hash256{} : records_.back().hash;
  r.hash = audit_record_hash(r);

  if (sink_) {
    std::ofstream out(*sink_, std::ios::binary | std::ios::app);
    if (!out)
      throw Error(Errc::StorageFailure,
                  "cannot open audit log '" + sink_->string() + "'");
    out << audit_record_to_json(r, /*include_hash=*/true).dump() << '\n';
    out.flush();
    if (!out)
      throw Error(Errc::StorageFailure,
                  "short write to audit log '" + sink_->string() + "'");
  }
  records_.push_back(std::move(r));
  return records_.back();
}

std::size_t AuditLog::size() const {
  std::scoped_lock lock(mu_);
  return records_.size();
}

std::vector<AuditRecord> AuditLog::records() const {
  std::scoped_lock lock(mu_);
  return records_;
}

std::vector<AuditRecord> AuditLog::tail(std::size_t n) const {
  std::scoped_lock lock(mu_);
  if (n >= records_.size()) return records_;
  return std::vector<AuditRecord>(records_.end() - static_cast<std::ptrdiff_t>(n),
                                  records_.end());
}

AuditLog::VerifyResult AuditLog::verify(const std::vector<AuditRecord>& records) {
  VerifyResult result;
  Hash256 prev{};
  for (std::size_t i = 0; i < records.size(); ++i) {
    const AuditRecord& r = records[i];
    if (r.seq != i || r.prev_hash != prev || audit_record_hash(r) != r.hash) {
      result.ok = false;
      result.first_bad = i;
      result.checked = i;
      return result;
    }
    prev = r.hash;
    ++result.checked;
  }
  return result;
}

AuditLog::VerifyResult AuditLog::verify_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(Errc::StorageFailure, "cannot open audit log '" + path.string() + "'");
  VerifyResult result;
  Hash256 prev{};
  std::string line;
  std::size_t index = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    AuditRecord r;
    try {
      r = audit_record_from_json(json::parse(line));
    } catch (const std::exception&) {
      result.ok = false;
      result.first_bad = index;
      result.checked = index;
      return result;
    }
    if (r.seq != index || r.prev_hash != prev || audit_record_hash(r) != r.hash) {
      result.ok = false;
      result.first_bad = index;
      result.checked = index;
      return result;
    }
    prev = r.hash;
    ++index;
    ++result.checked;
  }
  return result;
}

std::vector<AuditRecord> AuditLog::load_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(Errc::StorageFailure, "cannot open audit log '" + path.string() + "'");
  std::vector<AuditRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      out.push_back(audit_record_from_json(json::parse(line)));
    } catch (const std::exception& e) {
      throw ParseError(line_no, std::string("bad audit record: ") + e.what());
    }
  }
  return out;
}

}  // namespace multiverse
