// Copyright 2026 the Multiverse authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "multiverse/engine.hpp"

#include <algorithm>

#include "multiverse/relationship.hpp"
#include "multiverse/templates.hpp"
#include "multiverse/tunnel_codec.hpp"

namespace multiverse {
namespace {

void require_agent(const Frame& frame, const AgentId& agent) {
  frame.agent_world(agent);
}

bool owns(const Frame& frame, const AgentId& agent, const WorldId& world) {
  return frame.world_at(world).owners.count(agent) > 0;
}

void require_world_privilege(const Frame& frame, const AgentId& actor,
                             const WorldId& world, Privilege p, Timestamp now) {
  if (!agent_has_privilege(frame, actor, world, p, now))
    throw Error(Errc::PermissionDenied,
                "agent '" + actor + "' lacks " + std::string(to_string(p)) +
                    " in world '" + world + "'");
}

// Everything establish/approve agree on before an instance may form.
struct EstablishPlan {
  RelSpecOut out;
  RelSpecIn in;
  std::string role;  // counterpart role granted in the target
};

EstablishPlan plan_establish(const Frame& frame, const AgentId& establisher,
                             const WorldId& source, const WorldId& target,
                             const std::string& out_name, Timestamp now) {
  const World& src = frame.world_at(source);
  const World& tgt = frame.world_at(target);
  require_agent(frame, establisher);

  SpecLookup<RelSpecOut> out = find_outgoing(frame, src, out_name, now);
  if (out.state == LookupState::Absent)
    throw Error(Errc::UnknownSpec, "world '" + source +
                                       "' declares no outgoing relationship '" +
                                       out_name + "'");
  if (out.state == LookupState::Declared)
    throw Error(Errc::ExpiredTemplate,
                "template '" + out.declaring_template + "' declaring '" + out_name +
                    "' in '" + source + "' has expired");

  const std::string& role = out.spec.counterpart_role;
  SpecLookup<RelSpecIn> in = find_incoming(frame, tgt, role, now);
  if (in.state == LookupState::Absent)
    throw Error(Errc::UnknownSpec, "world '" + target +
                                       "' declares no incoming role '" + role + "'");
  if (in.state == LookupState::Declared)
    throw Error(Errc::ExpiredTemplate,
                "template '" + in.declaring_template + "' declaring role '" + role +
                    "' in '" + target + "' has expired");

  // The establisher acts from inside the source world.
  const WorldId& home = frame.agent_world(establisher);
  bool entitled = false;
  for (const RoleAssertion& a : roles_of(frame, home, source, now)) {
    if (out.spec.roles.count(a.role)) {
      entitled = true;
      break;
    }
  }
  if (!entitled)
    throw Error(Errc::PermissionDenied,
                "agent '" + establisher + "' holds none of the roles entitled to establish '" +
                    out_name + "' from '" + source + "'");

  for (const std::vector<Constraint>* side :
       {&out.spec.constraints, &in.spec.constraints}) {
    for (const Constraint& c : *side) {
      if (!evaluate_constraint(frame, c, source, target, now))
        throw Error(Errc::ConstraintViolated,
                    "constraint " + c.describe() + " rejects '" + source +
                        "' -> '" + target + "'");
    }
  }

  if (frame.find_relationship(source, target, out_name, role))
    throw Error(Errc::DuplicateRelationship,
                "relationship '" + out_name + "' from '" + source + "' to '" +
                    target + "' already exists");

  return {out.spec, in.spec, role};
}

}  // namespace

TemplateId resolve_template_ref(const Frame& frame, const std::string& ref) {
  if (frame.find_template(ref)) return ref;
  std::vector<TemplateId> by_name;
  for (const auto& [id, t] : frame.templates) {
    if (t.name == ref) by_name.push_back(id);
  }
  if (by_name.empty())
    throw Error(Errc::UnknownTemplate, "no template matches '" + ref + "'");
  if (by_name.size() > 1)
    throw Error(Errc::ResolveError,
                "template name '" + ref + "' is ambiguous (" +
                    std::to_string(by_name.size()) + " definitions)");
  return by_name.front();
}

template <typename Fn>
auto Engine::audited(AuditEvent event, Fn&& fn) {
  try {
    auto result = fn(event);
    event.ok = true;
    event.frame_version = store_.version();
    audit_.append(event);
    return result;
  } catch (const Error& e) {
    event.ok = false;
    event.reason = e.what();
    event.frame_version = store_.version();
    audit_.append(event);
    throw;
  }
}

WorldId Engine::register_agent(const AgentId& agent, const std::string& display_name,
                               Timestamp now) {
  std::scoped_lock lock(op_mu_);
  require_identifier(agent, "agent id");
  return store_.mutate([&](Frame& f) {
    if (f.agents.count(agent))
      throw Error(Errc::DuplicateAgent, "agent '" + agent + "' already registered");
    if (f.worlds.count(agent))
      throw Error(Errc::DuplicateWorld,
                  "world '" + agent + "' already exists; cannot claim it as an agent world");
    World w;
    w.id = agent;
    w.name = display_name.empty() ? agent : display_name;
    w.owners = {agent};
    w.created_at = now;
    f.worlds.emplace(agent, std::move(w));
    f.agents.emplace(agent, agent);
    return agent;
  });
}

WorldId Engine::create_world(const AgentId& actor, const WorldId& id,
                             const std::string& display_name,
                             const std::optional<WorldId>& location, Timestamp now) {
  std::scoped_lock lock(op_mu_);
  require_identifier(id, "world id");
  return store_.mutate([&](Frame& f) {
    require_agent(f, actor);
    if (f.worlds.count(id))
      throw Error(Errc::DuplicateWorld, "world '" + id + "' already exists");
    if (location) {
      f.world_at(*location);
      require_world_privilege(f, actor, *location, Privilege::WorldCreate, now);
    }
    World w;
    w.id = id;
    w.name = display_name.empty() ? id : display_name;
    w.owners = {actor};
    w.location = location;
    w.created_at = now;
    f.worlds.emplace(id, std::move(w));
    return id;
  });
}

void Engine::relocate_world(const AgentId& actor, const WorldId& world,
                            const std::optional<WorldId>& new_location,
                            Timestamp now) {
  std::scoped_lock lock(op_mu_);
  store_.mutate([&](Frame& f) {
    require_agent(f, actor);
    World& w = f.world_at(world);
    require_world_privilege(f, actor, world, Privilege::WorldRelocate, now);
    if (new_location) {
      if (*new_location == world)
        throw Error(Errc::CycleDetected, "world cannot contain itself");
      f.world_at(*new_location);
      // Placing a world under one of its own descendants would loop.
      if (f.contains(world, *new_location))
        throw Error(Errc::CycleDetected,
                    "relocating '" + world + "' into '" + *new_location +
                        "' would create a containment cycle");
    }
    w.location = new_location;
  });
}

void Engine::delete_world(const AgentId& actor, const WorldId& world, Timestamp now) {
  std::scoped_lock lock(op_mu_);
  store_.mutate([&](Frame& f) {
    require_agent(f, actor);
    const World& w = f.world_at(world);
    require_world_privilege(f, actor, world, Privilege::WorldEdit, now);
    if (f.agent_of_world(world))
      throw Error(Errc::PermissionDenied,
                  "world '" + world + "' is an agent world and cannot be deleted");
    std::optional<WorldId> promote_to = w.location;
    for (auto& [id, other] : f.worlds) {
      if (other.location == world) other.location = promote_to;
    }
    f.resources.erase(world);
    std::erase_if(f.relationships, [&](const RelationshipInstance& r) {
      return r.source == world || r.target == world;
    });
    for (auto& [id, other] : f.worlds) {
      std::erase_if(other.pending, [&](const PendingRelationship& p) {
        return p.source == world;
      });
    }
    f.worlds.erase(world);
  });
}

void Engine::add_owner(const AgentId& actor, const WorldId& world,
                       const AgentId& new_owner, Timestamp now) {
  std::scoped_lock lock(op_mu_);
  store_.mutate([&](Frame& f) {
    require_agent(f, actor);
    require_agent(f, new_owner);
    World& w = f.world_at(world);
    require_world_privilege(f, actor, world, Privilege::WorldEdit, now);
    w.owners.insert(new_owner);
  });
}

void Engine::set_require_approval(const AgentId& actor, const WorldId& world,
                                  bool require, Timestamp now) {
  std::scoped_lock lock(op_mu_);
  store_.mutate([&](Frame& f) {
    require_agent(f, actor);
    World& w = f.world_at(world);
    require_world_privilege(f, actor, world, Privilege::WorldEdit, now);
    w.require_approval = require;
  });
}

void Engine::register_purpose(const std::string& purpose) {
  std::scoped_lock lock(op_mu_);
  require_identifier(purpose, "purpose");
  store_.mutate([&](Frame& f) {
    if (!f.purpose_registered(purpose)) f.purposes.push_back(purpose);
  });
}

void Engine::put_resource(const AgentId& actor, const WorldId& world,
                          const std::string& resource_id,
                          std::vector<std::uint8_t> data, Timestamp now) {
  std::scoped_lock lock(op_mu_);
  require_identifier(resource_id, "resource id");
  store_.mutate([&](Frame& f) {
    require_agent(f, actor);
    f.world_at(world);
    require_world_privilege(f, actor, world, Privilege::ResourceWrite, now);
    StoredResource r;
    r.resource_id = resource_id;
    r.data = std::move(data);
    f.resources[world][resource_id] = std::move(r);
  });
}

TemplateId Engine::define_template(const AgentId& actor, const WorldId& world,
                                   const TemplateDraft& draft, Timestamp now) {
  std::scoped_lock lock(op_mu_);
  return store_.mutate([&](Frame& f) {
    require_agent(f, actor);
    f.world_at(world);
    require_world_privilege(f, actor, world, Privilege::WorldEdit, now);

    Template t;
    t.name = draft.name;
    t.id = make_template_id(world, draft.name);
    t.defined_in = world;
    if (f.templates.count(t.id))
      throw Error(Errc::DuplicateTemplate, "template '" + t.id + "' already exists");
    if (draft.parent) t.parent = resolve_template_ref(f, *draft.parent);
    t.access_points = draft.access_points;
    t.incoming = draft.incoming;
    t.outgoing = draft.outgoing;

    // Normalize outgoing specs in stored form.
    for (RelSpecOut& o : t.outgoing) {
      if (o.counterpart_role.empty()) o.counterpart_role = o.name;
      o.roles.insert(std::string(kOwnerRole));
    }
    // Canonicalize constraint template references to ids (a template may
    // reference itself by name).
    auto canon = [&](Constraint& c) {
      if (c.kind == ConstraintKind::Relid) return;
      if (c.template_ref == t.id || c.template_ref == t.name) {
        c.template_ref = t.id;
        return;
      }
      c.template_ref = resolve_template_ref(f, c.template_ref);
    };
    for (RelSpecIn& in : t.incoming)
      for (Constraint& c : in.constraints) canon(c);
    for (RelSpecOut& o : t.outgoing)
      for (Constraint& c : o.constraints) canon(c);

    validate_template(t);
    if (t.parent) {
      f.template_at(*t.parent);
      // Reject inheritance loops before they enter the frame.
      f.templates.emplace(t.id, t);
      try {
        template_chain(f, t.id);
      } catch (...) {
        f.templates.erase(t.id);
        throw;
      }
      f.templates.erase(t.id);
    }
    f.templates.emplace(t.id, std::move(t));
    return make_template_id(world, draft.name);
  });
}

void Engine::implement_template(const AgentId& actor, const WorldId& world,
                                const std::string& template_ref,
                                const std::optional<RoleTunnel>& via,
                                std::optional<std::int64_t> ttl_seconds,
                                Timestamp now, AccessRisk risk,
                                std::uint64_t rng_seed) {
  std::scoped_lock lock(op_mu_);
  AuditEvent ev;
  ev.timestamp = now;
  ev.actor = actor;
  ev.action = AuditAction::ImplementTemplate;
  ev.world = world;
  audited(ev, [&](AuditEvent& event) {
    FrameSnapshot snap = store_.snapshot();
    require_agent(*snap, actor);
    snap->world_at(world);
    require_world_privilege(*snap, actor, world, Privilege::WorldEdit, now);

    TemplateId tid = resolve_template_ref(*snap, template_ref);
    const Template& t = snap->template_at(tid);
    event.query = tid;

    TemplateBinding binding;
    binding.template_id = tid;
    binding.bound_at = now;

    if (t.defined_in != world) {
      if (!via)
        throw Error(Errc::InvalidTunnel,
                    "implementing remote template '" + tid +
                        "' requires a capacity tunnel");
      if (!ttl_seconds)
        throw Error(Errc::InvalidTemplate,
                    "implementing remote template '" + tid + "' requires a ttl");
      if (*ttl_seconds <= 0)
        throw Error(Errc::InvalidTemplate, "template ttl must be positive");
      event.tunnel = format_tunnel(*via);
      if (via->segments.front().world != t.defined_in)
        throw Error(Errc::InvalidTunnel,
                    "capacity tunnel must start at '" + t.defined_in +
                        "', the defining world of '" + tid + "'");
      ValidationReport report = validate_tunnel(
          *snap, *via, risk, rng_seed, now, ValidateOptions{actor, std::nullopt, 8});
      event.report = report;
      if (!report.valid)
        throw Error(Errc::TunnelInvalid,
                    report.failure ? report.failure->reason : "tunnel invalid");
      Grant grant = effective_grant(*snap, *via, now);
      if (!grant.privileges.count(Privilege::ResourceTemplate))
        throw Error(Errc::PermissionDenied,
                    "capacity tunnel does not grant resource.template in '" +
                        t.defined_in + "'");
      binding.capacity = via;
      binding.expires_at = now + *ttl_seconds;
    }

    // Roles must stay unambiguous across the world's active bindings.
    Template incoming_view = resolve_template(*snap, tid);
    const World& w = snap->world_at(world);
    for (const TemplateBinding& other : w.bindings) {
      if (other.template_id == tid || !other.active(now)) continue;
      if (!snap->find_template(other.template_id)) continue;
      Template existing = resolve_template(*snap, other.template_id);
      for (const RelSpecIn& mine : incoming_view.incoming) {
        for (const RelSpecIn& theirs : existing.incoming) {
          if (mine.role == theirs.role)
            throw Error(Errc::InvalidTemplate,
                        "role '" + mine.role + "' is already provided by template '" +
                            other.template_id + "' in '" + world + "'");
        }
      }
    }

    store_.mutate([&](Frame& f) {
      World& target = f.world_at(world);
      for (TemplateBinding& b : target.bindings) {
        if (b.template_id == tid) {
          b = binding;
          return;
        }
      }
      target.bindings.push_back(binding);
    });
    return 0;
  });
}

RelationshipInstance Engine::establish_relationship(const AgentId& actor,
                                                    const WorldId& source,
                                                    const WorldId& target,
                                                    const std::string& out_name,
                                                    Timestamp now) {
  std::scoped_lock lock(op_mu_);
  AuditEvent ev;
  ev.timestamp = now;
  ev.actor = actor;
  ev.action = AuditAction::Establish;
  ev.world = target;
  ev.query = out_name;
  return audited(ev, [&](AuditEvent&) {
    FrameSnapshot snap = store_.snapshot();
    EstablishPlan plan = plan_establish(*snap, actor, source, target, out_name, now);

    const World& tgt = snap->world_at(target);
    if (tgt.require_approval && !owns(*snap, actor, target)) {
      store_.mutate([&](Frame& f) {
        World& w = f.world_at(target);
        for (const PendingRelationship& p : w.pending) {
          if (p.source == source && p.out_name == out_name)
            throw Error(Errc::PendingApproval,
                        "proposal '" + out_name + "' from '" + source +
                            "' is already awaiting approval");
        }
        w.pending.push_back({source, out_name, plan.role, actor, now});
      });
      throw Error(Errc::PendingApproval,
                  "world '" + target + "' requires owner approval for '" + out_name +
                      "' from '" + source + "'");
    }

    RelationshipInstance inst{source, target, out_name, plan.role, actor, now};
    store_.mutate([&](Frame& f) { f.relationships.push_back(inst); });
    return inst;
  });
}

RelationshipInstance Engine::approve_relationship(const AgentId& actor,
                                                  const WorldId& target,
                                                  const WorldId& source,
                                                  const std::string& out_name,
                                                  Timestamp now) {
  std::scoped_lock lock(op_mu_);
  AuditEvent ev;
  ev.timestamp = now;
  ev.actor = actor;
  ev.action = AuditAction::Establish;
  ev.world = target;
  ev.query = out_name;
  return audited(ev, [&](AuditEvent&) {
    FrameSnapshot snap = store_.snapshot();
    require_agent(*snap, actor);
    const World& tgt = snap->world_at(target);
    require_world_privilege(*snap, actor, target, Privilege::WorldEdit, now);

    const PendingRelationship* found = nullptr;
    for (const PendingRelationship& p : tgt.pending) {
      if (p.source == source && p.out_name == out_name) {
        found = &p;
        break;
      }
    }
    if (!found)
      throw Error(Errc::UnknownInstance,
                  "no pending proposal '" + out_name + "' from '" + source +
                      "' in '" + target + "'");
    PendingRelationship pending = *found;

    auto drop_pending = [&](Frame& f) {
      World& w = f.world_at(target);
      std::erase_if(w.pending, [&](const PendingRelationship& p) {
        return p.source == source && p.out_name == out_name;
      });
    };

    // Conditions may have drifted since the proposal; re-check for the
    // original requester. A proposal that no longer validates is dropped.
    EstablishPlan plan;
    try {
      plan = plan_establish(*snap, pending.requested_by, source, target, out_name, now);
    } catch (const Error&) {
      store_.mutate(drop_pending);
      throw;
    }

    RelationshipInstance inst{source, target, out_name, plan.role,
                              pending.requested_by, now};
    store_.mutate([&](Frame& f) {
      drop_pending(f);
      f.relationships.push_back(inst);
    });
    return inst;
  });
}

void Engine::revoke_relationship(const AgentId& actor, const WorldId& source,
                                 const WorldId& target, const std::string& out_name,
                                 const std::optional<std::string>& role,
                                 Timestamp now) {
  std::scoped_lock lock(op_mu_);
  AuditEvent ev;
  ev.timestamp = now;
  ev.actor = actor;
  ev.action = AuditAction::Revoke;
  ev.world = target;
  ev.query = out_name;
  audited(ev, [&](AuditEvent&) {
    FrameSnapshot snap = store_.snapshot();
    require_agent(*snap, actor);
    snap->world_at(source);
    snap->world_at(target);

    std::vector<RelationshipInstance> matches;
    for (const RelationshipInstance& r : snap->relationships) {
      if (r.source == source && r.target == target && r.out_name == out_name &&
          (!role || r.role == *role))
        matches.push_back(r);
    }
    if (matches.empty())
      throw Error(Errc::UnknownInstance,
                  "no relationship '" + out_name + "' from '" + source + "' to '" +
                      target + "'");
    if (matches.size() > 1)
      throw Error(Errc::ResolveError,
                  "multiple instances of '" + out_name +
                      "' match; specify the role to revoke");
    RelationshipInstance victim = matches.front();

    bool permitted =
        agent_has_privilege(*snap, actor, source, Privilege::WorldEdit, now) ||
        agent_has_privilege(*snap, actor, target, Privilege::WorldEdit, now);
    if (!permitted)
      throw Error(Errc::PermissionDenied,
                  "agent '" + actor + "' may not revoke '" + out_name +
                      "' between '" + source + "' and '" + target + "'");

    store_.mutate([&](Frame& f) {
      std::erase_if(f.relationships, [&](const RelationshipInstance& r) {
        return r.source == victim.source && r.target == victim.target &&
               r.out_name == victim.out_name && r.role == victim.role;
      });
    });
    return 0;
  });
}

StoredResource Engine::access_remote(const AccessRequest& request, Timestamp now) {
  std::scoped_lock lock(op_mu_);
  AuditEvent ev;
  ev.timestamp = now;
  ev.actor = request.agent;
  ev.action = AuditAction::AccessRemote;
  ev.purpose = request.purpose;
  ev.query = request.query;
  ev.resource_id = request.resource_id;
  return audited(ev, [&](AuditEvent& event) {
    request.risk.validate();
    request.tunnel.validate();
    event.tunnel = format_tunnel(request.tunnel);

    FrameSnapshot snap = store_.snapshot();
    require_agent(*snap, request.agent);
    if (!snap->purpose_registered(request.purpose))
      throw Error(Errc::UnknownPurpose,
                  "purpose '" + request.purpose + "' is not registered");

    const WorldId& host = request.tunnel.segments.front().world;
    snap->world_at(host);
    event.world = host;
    const StoredResource* res = snap->find_resource(host, request.resource_id);
    if (!res)
      throw Error(Errc::UnknownResource, "world '" + host + "' holds no resource '" +
                                             request.resource_id + "'");

    ValidationReport report =
        validate_tunnel(*snap, request.tunnel, request.risk, request.rng_seed, now,
                        ValidateOptions{request.agent, std::nullopt, 8});
    event.report = report;
    if (!report.valid)
      throw Error(Errc::TunnelInvalid,
                  report.failure ? report.failure->reason : "tunnel invalid");

    Grant grant = effective_grant(*snap, request.tunnel, now);
    std::optional<Privilege> needed = privilege_for_query_name(request.query);
    if (!needed)
      throw Error(Errc::NoSuchAccessPoint,
                  "query '" + request.query + "' is not registered");
    if (!grant.privileges.count(*needed))
      throw Error(Errc::PrivilegeDenied,
                  "tunnel grants no " + std::string(to_string(*needed)) + " in '" +
                      host + "'");
    if (!grant.purposes.count(request.purpose))
      throw Error(Errc::PurposeNotPermitted,
                  "role '" + request.tunnel.segments.front().role +
                      "' does not admit purpose '" + request.purpose + "'");

    const std::string& entry_role = request.tunnel.segments.front().role;
    SpecLookup<DataAccessPointSpec> dap =
        find_access_point(*snap, snap->world_at(host), request.query, entry_role, now);
    if (dap.state == LookupState::Absent)
      throw Error(Errc::NoSuchAccessPoint,
                  "world '" + host + "' exposes no '" + request.query +
                      "' access point for role '" + entry_role + "'");
    if (dap.state == LookupState::Declared)
      throw Error(Errc::ExpiredTemplate,
                  "template '" + dap.declaring_template +
                      "' exposing the access point in '" + host + "' has expired");
    if (!dap.spec.allowed_purposes.count(request.purpose))
      throw Error(Errc::PurposeNotPermitted,
                  "access point does not admit purpose '" + request.purpose + "'");

    const WorldId& home = snap->agent_world(request.agent);
    if (request.query == "read") {
      StoredResource copy = *res;
      if (host != home) {
        copy.capacity = request.tunnel;
        copy.expires_at = now + dap.spec.ttl_seconds;
        copy.origin_world = host;
        store_.mutate([&](Frame& f) {
          f.resources[home][copy.resource_id] = copy;
        });
      }
      return copy;
    }
    if (request.query == "write") {
      if (!request.payload)
        throw Error(Errc::ParseError, "write access requires a payload");
      StoredResource updated = *res;
      updated.data = *request.payload;
      store_.mutate([&](Frame& f) {
        f.resources[host][request.resource_id].data = *request.payload;
      });
      return updated;
    }
    // delete
    StoredResource removed = *res;
    store_.mutate([&](Frame& f) {
      auto it = f.resources.find(host);
      if (it != f.resources.end()) it->second.erase(request.resource_id);
    });
    return removed;
  });
}

StoredResource Engine::read_cached(const AgentId& agent,
                                   const std::string& resource_id, AccessRisk risk,
                                   std::uint64_t rng_seed, Timestamp now) {
  std::scoped_lock lock(op_mu_);
  AuditEvent ev;
  ev.timestamp = now;
  ev.actor = agent;
  ev.action = AuditAction::ReadCached;
  ev.resource_id = resource_id;
  return audited(ev, [&](AuditEvent& event) {
    risk.validate();
    FrameSnapshot snap = store_.snapshot();
    const WorldId& home = snap->agent_world(agent);
    event.world = home;
    const StoredResource* res = snap->find_resource(home, resource_id);
    if (!res)
      throw Error(Errc::UnknownResource,
                  "world '" + home + "' holds no resource '" + resource_id + "'");
    if (!res->remote()) return *res;  // locally published, owner reads freely

    event.tunnel = format_tunnel(*res->capacity);
    auto evict = [&] {
      store_.mutate([&](Frame& f) {
        auto it = f.resources.find(home);
        if (it != f.resources.end()) it->second.erase(resource_id);
      });
    };

    if (res->expires_at && now >= *res->expires_at) {
      evict();
      throw Error(Errc::TTLExpired, "cached copy of '" + resource_id +
                                        "' lapsed; evicted from '" + home + "'");
    }

    ValidationReport report =
        validate_tunnel(*snap, *res->capacity, risk, rng_seed, now,
                        ValidateOptions{agent, std::nullopt, 8});
    event.report = report;
    if (!report.valid) {
      evict();
      throw Error(Errc::CapacityRevoked,
                  "capacity no longer holds for '" + resource_id + "': " +
                      (report.failure ? report.failure->reason : "tunnel invalid"));
    }
    return *res;
  });
}

StoredResource Engine::third_party_read(const AgentId& reader, const WorldId& world,
                                        const std::string& resource_id,
                                        AccessRisk risk, std::uint64_t rng_seed,
                                        Timestamp now) {
  std::scoped_lock lock(op_mu_);
  AuditEvent ev;
  ev.timestamp = now;
  ev.actor = reader;
  ev.action = AuditAction::ThirdPartyRead;
  ev.world = world;
  ev.resource_id = resource_id;
  return audited(ev, [&](AuditEvent& event) {
    risk.validate();
    FrameSnapshot snap = store_.snapshot();
    require_agent(*snap, reader);
    snap->world_at(world);
    const StoredResource* res = snap->find_resource(world, resource_id);
    if (!res)
      throw Error(Errc::UnknownResource,
                  "world '" + world + "' holds no resource '" + resource_id + "'");
    if (!agent_has_privilege(*snap, reader, world, Privilege::ResourceRead, now))
      throw Error(Errc::PermissionDenied,
                  "agent '" + reader + "' lacks resource.read in '" + world + "'");
    if (!res->remote()) return *res;

    event.tunnel = format_tunnel(*res->capacity);
    // Never evict from here: that is the owner's (or sweep's) duty.
    if (res->expires_at && now >= *res->expires_at)
      throw Error(Errc::CapacityUnsatisfied,
                  "cached copy of '" + resource_id + "' has lapsed");

    ValidationReport report =
        validate_tunnel(*snap, *res->capacity, risk, rng_seed, now,
                        ValidateOptions{std::nullopt, reader, 8});
    event.report = report;
    if (!report.valid)
      throw Error(Errc::CapacityUnsatisfied,
                  "reader '" + reader + "' does not satisfy the capacity of '" +
                      resource_id + "': " +
                      (report.failure ? report.failure->reason : "tunnel invalid"));
    return *res;
  });
}

std::vector<std::string> Engine::sweep_expired(const AgentId& actor,
                                               const WorldId& world, Timestamp now) {
  std::scoped_lock lock(op_mu_);
  // Denials audit once; each eviction audits individually.
  try {
    FrameSnapshot snap = store_.snapshot();
    require_agent(*snap, actor);
    snap->world_at(world);
    require_world_privilege(*snap, actor, world, Privilege::WorldEdit, now);
  } catch (const Error& e) {
    AuditEvent ev;
    ev.timestamp = now;
    ev.actor = actor;
    ev.action = AuditAction::Sweep;
    ev.world = world;
    ev.ok = false;
    ev.reason = e.what();
    ev.frame_version = store_.version();
    audit_.append(ev);
    throw;
  }

  std::vector<std::string> evicted = store_.mutate([&](Frame& f) {
    std::vector<std::string> ids;
    auto it = f.resources.find(world);
    if (it == f.resources.end()) return ids;
    std::erase_if(it->second, [&](const auto& entry) {
      const StoredResource& r = entry.second;
      bool lapsed = r.remote() && r.expires_at && now >= *r.expires_at;
      if (lapsed) ids.push_back(entry.first);
      return lapsed;
    });
    return ids;
  });

  for (const std::string& id : evicted) {
    AuditEvent ev;
    ev.timestamp = now;
    ev.actor = actor;
    ev.action = AuditAction::Sweep;
    ev.world = world;
    ev.resource_id = id;
    ev.ok = true;
    ev.frame_version = store_.version();
    audit_.append(ev);
  }
  return evicted;
}

ValidationReport Engine::validate_access(const RoleTunnel& tunnel,
                                         const std::optional<AgentId>& as_agent,
                                         AccessRisk risk, std::uint64_t rng_seed,
                                         Timestamp now) const {
  FrameSnapshot snap = store_.snapshot();
  return validate_tunnel(*snap, tunnel, risk, rng_seed, now,
                         ValidateOptions{as_agent, std::nullopt, 8});
}

std::vector<RoleTunnel> Engine::discover(const AgentId& agent, const WorldId& target,
                                         int max_depth) const {
  FrameSnapshot snap = store_.snapshot();
  return discover_tunnels(*snap, agent, target, max_depth);
}

}  // namespace multiverse
