// Copyright 2026 the Multiverse authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "multiverse/audit.hpp"
#include "multiverse/frame_store.hpp"
#include "multiverse/model.hpp"
#include "multiverse/tunnel_engine.hpp"

namespace multiverse {

// Template as submitted for definition; the engine assigns the id and the
// defining world.
struct TemplateDraft {
  std::string name;
  // Parent reference: exact template id, or a name unique across the frame.
  std::optional<std::string> parent;
  std::vector<DataAccessPointSpec> access_points;
  std::vector<RelSpecIn> incoming;
  std::vector<RelSpecOut> outgoing;
};

struct AccessRequest {
  AgentId agent;
  RoleTunnel tunnel;
  std::string query = "read";
  std::string resource_id;
  std::string purpose;
  AccessRisk risk;
  std::uint64_t rng_seed = 0;
  // Required for query "write".
  std::optional<std::vector<std::uint8_t>> payload;
};

// Resolves a template reference: exact id first, then unique name across the
// frame. Throws UnknownTemplate (no match) or ResolveError (ambiguous name).
TemplateId resolve_template_ref(const Frame& frame, const std::string& ref);

// The deployment facade: owns the frame store and the audit log, enforces
// permissions on every mutation, and guarantees one audit record per
// governed operation (including denials). Operations are serialized; reads
// through snapshot() are wait-free against them.
//
// Every entry point takes the caller's clock reading `now`; the engine never
// consults a wall clock.
class Engine {
 public:
  Engine() = default;
  explicit Engine(Frame initial) : store_(std::move(initial)) {}
  Engine(Frame initial, std::filesystem::path audit_sink)
      : store_(std::move(initial)), audit_(std::move(audit_sink)) {}
  explicit Engine(std::filesystem::path audit_sink) : audit_(std::move(audit_sink)) {}

  FrameSnapshot snapshot() const { return store_.snapshot(); }
  AuditLog& audit_log() { return audit_; }
  const AuditLog& audit_log() const { return audit_; }

  // --- directory ------------------------------------------------------

  // Creates the agent and its own world (same id). The world is top-level
  // and owned by the agent.
  WorldId register_agent(const AgentId& agent, const std::string& display_name,
                         Timestamp now);

  // Creates a world owned by `actor`. With a location, the actor needs
  // world.create there.
  WorldId create_world(const AgentId& actor, const WorldId& id,
                       const std::string& display_name,
                       const std::optional<WorldId>& location, Timestamp now);

  // Moves a world to a new location (or to top level). Needs world.relocate
  // on the world; refuses containment cycles.
  void relocate_world(const AgentId& actor, const WorldId& world,
                      const std::optional<WorldId>& new_location, Timestamp now);

  // Deletes a world: its resources go away, relationships touching it are
  // dropped, contained worlds are promoted to its location. Agent worlds
  // cannot be deleted. Needs world.edit.
  void delete_world(const AgentId& actor, const WorldId& world, Timestamp now);

  // Owners may co-opt further owners (world.edit).
  void add_owner(const AgentId& actor, const WorldId& world,
                 const AgentId& new_owner, Timestamp now);

  // Toggles the approval gate for incoming relationships (world.edit).
  void set_require_approval(const AgentId& actor, const WorldId& world,
                            bool require, Timestamp now);

  // Registers a purpose code; duplicates are ignored.
  void register_purpose(const std::string& purpose);

  // Publishes (or replaces) a local resource. Needs resource.write.
  void put_resource(const AgentId& actor, const WorldId& world,
                    const std::string& resource_id,
                    std::vector<std::uint8_t> data, Timestamp now);

  // --- templates ------------------------------------------------------

  // Defines a template in `world` (id becomes "<world>/<name>"). Needs
  // world.edit there. Constraint and parent references must resolve.
  TemplateId define_template(const AgentId& actor, const WorldId& world,
                             const TemplateDraft& draft, Timestamp now);

  // Binds a template to a world. Local templates bind freely (given
  // world.edit); a remote template additionally needs a capacity tunnel
  // starting at its defining world whose grant carries resource.template,
  // plus a TTL. Re-implementing replaces the binding (and clears a sticky
  // expiry). Audited as implement-template.
  void implement_template(const AgentId& actor, const WorldId& world,
                          const std::string& template_ref,
                          const std::optional<RoleTunnel>& via,
                          std::optional<std::int64_t> ttl_seconds, Timestamp now,
                          AccessRisk risk = {}, std::uint64_t rng_seed = 0);

  // --- relationships --------------------------------------------------

  // Establishes source -[out_name]-> target, granting the out-spec's
  // counterpart role. The actor must hold one of the out-spec's establisher
  // roles in the source world; both sides' constraints must pass. When the
  // target requires approval and the actor does not own it, the proposal is
  // queued and PendingApproval is thrown. Audited as establish.
  RelationshipInstance establish_relationship(const AgentId& actor,
                                              const WorldId& source,
                                              const WorldId& target,
                                              const std::string& out_name,
                                              Timestamp now);

  // Target-owner approval of a queued proposal; re-validates everything at
  // approval time. Audited as establish.
  RelationshipInstance approve_relationship(const AgentId& actor,
                                            const WorldId& target,
                                            const WorldId& source,
                                            const std::string& out_name,
                                            Timestamp now);

  // Drops a live instance. The actor must own (or hold world.edit in) either
  // endpoint. `role` disambiguates when several instances share out_name.
  // Audited as revoke.
  void revoke_relationship(const AgentId& actor, const WorldId& source,
                           const WorldId& target, const std::string& out_name,
                           const std::optional<std::string>& role, Timestamp now);

  // --- access paths (all audited) --------------------------------------

  // Cross-world access through a tunnel: validates the tunnel for the
  // agent, checks the granted privilege and purpose, matches the target
  // world's access point, then performs the query. A read imports a cached
  // copy (capacity = the tunnel, TTL chosen by the access point) into the
  // agent's world and returns it.
  StoredResource access_remote(const AccessRequest& request, Timestamp now);

  // Reads from the agent's own world. A remote copy past its TTL is evicted
  // (TTLExpired); one whose capacity tunnel no longer validates is evicted
  // (CapacityRevoked).
  StoredResource read_cached(const AgentId& agent, const std::string& resource_id,
                             AccessRisk risk, std::uint64_t rng_seed, Timestamp now);

  // Reads a resource in someone else's world. The reader needs
  // resource.read there; for a remote copy, every capacity segment is
  // re-checked against the reader's own standing (CapacityUnsatisfied on
  // failure). Never evicts.
  StoredResource third_party_read(const AgentId& reader, const WorldId& world,
                                  const std::string& resource_id, AccessRisk risk,
                                  std::uint64_t rng_seed, Timestamp now);

  // Evicts every remote resource in `world` whose TTL has lapsed. Needs
  // world.edit. One audit record per eviction. Returns the evicted ids.
  std::vector<std::string> sweep_expired(const AgentId& actor, const WorldId& world,
                                         Timestamp now);

  // --- read-only passthroughs ------------------------------------------

  ValidationReport validate_access(const RoleTunnel& tunnel,
                                   const std::optional<AgentId>& as_agent,
                                   AccessRisk risk, std::uint64_t rng_seed,
                                   Timestamp now) const;

  std::vector<RoleTunnel> discover(const AgentId& agent, const WorldId& target,
                                   int max_depth) const;

 private:
  template <typename Fn>
  auto audited(AuditEvent event, Fn&& fn);

  FrameStore store_;
  AuditLog audit_;
  std::recursive_mutex op_mu_;
};

}  // namespace multiverse
