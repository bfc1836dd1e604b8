// Copyright 2026 the Multiverse authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "multiverse/errors.hpp"

namespace multiverse {

// Seconds since the Unix epoch. All engine entry points take an explicit
// clock reading so callers (and tests) control time.
using Timestamp = std::int64_t;

// Identifiers are opaque strings. Worlds, agents and templates share one
// lexical rule: non-empty, and free of the tunnel metacharacters ':', '(',
// ')' so a formatted tunnel is unambiguous. Spaces are allowed ("Senior
// Analyst" is a legal role).
using WorldId = std::string;
using AgentId = std::string;
using TemplateId = std::string;

bool valid_identifier(std::string_view id);
// Throws Error(InvalidIdentifier) naming `what` when the rule is broken.
void require_identifier(std::string_view id, std::string_view what);

// ---------------------------------------------------------------------------
// Privileges

enum class Privilege : std::uint8_t {
  ResourceRead,
  ResourceWrite,
  ResourceDelete,
  ResourceTemplate,
  WorldEdit,
  WorldRelocate,
  WorldCreate,
};

inline constexpr Privilege kAllPrivileges[] = {
    Privilege::ResourceRead,   Privilege::ResourceWrite,
    Privilege::ResourceDelete, Privilege::ResourceTemplate,
    Privilege::WorldEdit,      Privilege::WorldRelocate,
    Privilege::WorldCreate,
};

std::string_view to_string(Privilege p);
std::optional<Privilege> privilege_from_string(std::string_view name);
std::set<Privilege> all_privileges();

// Registry mapping access-point queries to the privilege they demand:
// read -> resource.read, write -> resource.write, delete -> resource.delete.
// Unknown queries get nullopt.
std::optional<Privilege> privilege_for_query_name(std::string_view query);

// The reserved role every world's owners hold implicitly. It carries every
// privilege and every registered purpose, and templates may not declare it.
inline constexpr std::string_view kOwnerRole = "Owner";

// ---------------------------------------------------------------------------
// Constraints

enum class ConstraintSide : std::uint8_t { Source, Target };
enum class ConstraintKind : std::uint8_t { Implements, Relt, Relid };

std::string_view to_string(ConstraintSide side);
std::string_view to_string(ConstraintKind kind);

// A predicate a relationship must satisfy both when it is established and
// every time a tunnel built on it is re-validated.
//
//   implements(t)    the side world actively implements template t
//                    (directly or through a subclass)
//   relt(name, t)    the side world holds a relationship named `name` whose
//                    counterpart actively implements t
//   relid(name, id)  the side world holds a relationship named `name` whose
//                    counterpart is exactly world `id`
struct Constraint {
  ConstraintKind kind = ConstraintKind::Implements;
  ConstraintSide side = ConstraintSide::Source;
  TemplateId template_ref;  // Implements, Relt
  std::string rel_name;     // Relt, Relid
  WorldId world_ref;        // Relid

  static Constraint implements(ConstraintSide side, TemplateId t);
  static Constraint relt(ConstraintSide side, std::string name, TemplateId t);
  static Constraint relid(ConstraintSide side, std::string name, WorldId id);

  // Shape invariants (which fields must be set for the kind); throws
  // Error(InvalidTemplate) on violation.
  void validate() const;

  // "source.implements(T)" form, used in denial details and audit records.
  std::string describe() const;

  bool operator==(const Constraint&) const = default;
};

// ---------------------------------------------------------------------------
// Template parts

// A published query surface on data held by the implementing world.
struct DataAccessPointSpec {
  std::string query;          // "read" | "write" | "delete"
  std::string required_role;  // role the first tunnel segment must carry
  std::set<std::string> allowed_purposes;
  // Lifetime granted to copies imported through this access point. The
  // source world chooses it at definition time; one day if left alone.
  std::int64_t ttl_seconds = 86400;

  bool operator==(const DataAccessPointSpec&) const = default;
};

// A role the implementing world is willing to grant to counterpart worlds.
struct RelSpecIn {
  std::string role;
  std::vector<Constraint> constraints;
  std::set<Privilege> privileges;
  std::set<std::string> purposes;

  bool operator==(const RelSpecIn&) const = default;
};

// A relationship the implementing world may initiate toward counterparts.
// `roles` names who inside the source world may establish it; Owner is
// always included after normalization.
struct RelSpecOut {
  std::string name;
  // Role granted to the source inside the target world; defaults to `name`.
  std::string counterpart_role;
  std::vector<Constraint> constraints;
  std::set<std::string> roles;

  bool operator==(const RelSpecOut&) const = default;
};

struct Template {
  TemplateId id;  // "<definedIn>/<name>", assigned at definition
  std::string name;
  std::optional<TemplateId> parent;  // single inheritance
  WorldId defined_in;
  std::vector<DataAccessPointSpec> access_points;
  std::vector<RelSpecIn> incoming;
  std::vector<RelSpecOut> outgoing;

  bool operator==(const Template&) const = default;
};

// ---------------------------------------------------------------------------
// Role tunnels

// One hop of delegated standing: `role(world)`.
struct TunnelSegment {
  std::string role;
  WorldId world;

  bool operator==(const TunnelSegment&) const = default;
};

// A chain of segments from the data-holding world down to an agent's own
// world; the last segment is always Owner(<agent world>). The codec lives in
// tunnel_codec.hpp.
struct RoleTunnel {
  std::vector<TunnelSegment> segments;

  // Structural invariants: at least one segment, identifier-clean parts,
  // Owner terminal. Throws Error(InvalidTunnel).
  void validate() const;

  const TunnelSegment& terminal() const { return segments.back(); }

  bool operator==(const RoleTunnel&) const = default;
};

// ---------------------------------------------------------------------------
// Worlds, bindings, resources, relationships

// A template adopted by a world. Local bindings (template defined in this
// world) carry no capacity and never expire. Remote bindings remember the
// tunnel that justified the import and an absolute expiry instant.
//
// `expired` is a sticky tombstone set when a capacity re-check fails. It is
// shared across frame snapshots on purpose: discovering a revocation during
// validation must poison the binding everywhere at once, without mutating
// frame state.
struct TemplateBinding {
  TemplateId template_id;
  Timestamp bound_at = 0;
  std::optional<RoleTunnel> capacity;
  std::optional<Timestamp> expires_at;
  std::shared_ptr<std::atomic<bool>> expired =
      std::make_shared<std::atomic<bool>>(false);

  bool local() const { return !capacity.has_value(); }
  bool marked_expired() const { return expired && expired->load(); }
  void mark_expired() const {
    if (expired) expired->store(true);
  }
  // Usable now: not tombstoned and not past its expiry instant.
  bool active(Timestamp now) const {
    if (marked_expired()) return false;
    return !expires_at || now < *expires_at;
  }
};

// A relationship proposal parked until a target owner approves it.
struct PendingRelationship {
  WorldId source;
  std::string out_name;
  std::string role;  // counterpart role to grant once approved
  AgentId requested_by;
  Timestamp requested_at = 0;

  bool operator==(const PendingRelationship&) const = default;
};

struct World {
  WorldId id;
  std::string name;
  std::set<AgentId> owners;
  // Containing world; empty for top-level worlds (and agent worlds).
  std::optional<WorldId> location;
  std::vector<TemplateBinding> bindings;
  Timestamp created_at = 0;
  // When set, non-owner relationship proposals queue in `pending` until an
  // owner approves them.
  bool require_approval = false;
  std::vector<PendingRelationship> pending;
};

// Opaque payload stored in a world. Copies imported from another world carry
// the capacity tunnel that justified the import, the absolute instant the
// copy lapses, and where it came from; locally published resources leave all
// three empty.
struct StoredResource {
  std::string resource_id;
  std::vector<std::uint8_t> data;
  std::optional<RoleTunnel> capacity;
  std::optional<Timestamp> expires_at;
  std::optional<WorldId> origin_world;

  bool remote() const { return capacity.has_value(); }
};

// A live edge: `source` holds role `role` inside `target`, formed through
// the source template's outgoing spec `out_name`. The tuple
// (source, target, out_name, role) is unique while the edge lives.
struct RelationshipInstance {
  WorldId source;
  WorldId target;
  std::string out_name;
  std::string role;
  AgentId established_by;
  Timestamp established_at = 0;

  bool operator==(const RelationshipInstance&) const = default;
};

}  // namespace multiverse
