// Copyright 2026 the Multiverse authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "multiverse/model.hpp"
#include "multiverse/tunnel_engine.hpp"

namespace multiverse {

enum class AuditAction : std::uint8_t {
  AccessRemote,
  ReadCached,
  ThirdPartyRead,
  Establish,
  Revoke,
  ImplementTemplate,
  Sweep,
};

std::string_view to_string(AuditAction a);
std::optional<AuditAction> audit_action_from_string(std::string_view name);

using Hash256 = std::array<std::uint8_t, 32>;

// One tamper-evident log entry. `hash` is SHA-256 over the record's
// canonical JSON (sorted keys, compact, `hash` field excluded); `prev_hash`
// chains to the preceding record, all zeros for the first.
struct AuditRecord {
  std::uint64_t seq = 0;
  Timestamp timestamp = 0;
  AgentId actor;
  AuditAction action = AuditAction::AccessRemote;
  std::optional<std::string> world;
  std::optional<std::string> tunnel;
  std::optional<std::string> purpose;
  std::optional<std::string> query;
  std::optional<std::string> resource_id;
  bool ok = false;
  std::string reason;  // empty when ok
  std::optional<ValidationReport> report;
  std::uint64_t frame_version = 0;
  Hash256 prev_hash{};
  Hash256 hash{};
};

// Everything an engine operation knows about itself before the log assigns
// seq and hashes.
struct AuditEvent {
  Timestamp timestamp = 0;
  AgentId actor;
  AuditAction action = AuditAction::AccessRemote;
  std::optional<std::string> world;
  std::optional<std::string> tunnel;
  std::optional<std::string> purpose;
  std::optional<std::string> query;
  std::optional<std::string> resource_id;
  bool ok = false;
  std::string reason;
  std::optional<ValidationReport> report;
  std::uint64_t frame_version = 0;
};

nlohmann::json audit_record_to_json(const AuditRecord& r, bool include_hash);
AuditRecord audit_record_from_json(const nlohmann::json& j);

// Append-only hash-chained log, optionally persisted as NDJSON (one compact
// JSON record per line). Constructing with a path loads any existing
// records, so a reopened log continues its chain.
class AuditLog {
 public:
  AuditLog() = default;
  explicit AuditLog(std::filesystem::path sink);

  const AuditRecord& append(const AuditEvent& event);

  std::size_t size() const;
  std::vector<AuditRecord> records() const;
  std::vector<AuditRecord> tail(std::size_t n) const;

  struct VerifyResult {
    bool ok = true;
    // Index of the first record whose hash, chain link or sequence number
    // does not verify; unset when ok.
    std::optional<std::size_t> first_bad;
    std::size_t checked = 0;
  };

  static VerifyResult verify(const std::vector<AuditRecord>& records);
  // Verifies an NDJSON file line by line; an unparseable line counts as the
  // first bad record.
  static VerifyResult verify_file(const std::filesystem::path& path);
  static std::vector<AuditRecord> load_file(const std::filesystem::path& path);

 private:
  mutable std::mutex mu_;
  std::vector<AuditRecord> records_;
  std::optional<std::filesystem::path> sink_;
};

// Computes the canonical hash of a record (its JSON without `hash`).
Hash256 audit_record_hash(const AuditRecord& r);

}  // namespace multiverse
