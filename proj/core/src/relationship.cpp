// Copyright 2026 the Multiverse authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "multiverse/relationship.hpp"

#include <algorithm>
#include <map>

#include "multiverse/templates.hpp"

namespace multiverse {
namespace {

bool implements_active(const Frame& frame, const World& w,
                       const TemplateId& ancestor, Timestamp now) {
  for (const TemplateBinding& b : w.bindings) {
    if (!b.active(now)) continue;
    if (!frame.find_template(b.template_id)) continue;
    if (template_extends(frame, b.template_id, ancestor)) return true;
  }
  return false;
}

// Relationships named `name` seen from `world`: incoming instances grant the
// role `name` to a counterpart source; outgoing instances were established
// through an out-spec called `name` toward a counterpart target. Direction
// does not matter to relt/relid, only the counterpart identity.
std::vector<WorldId> counterparts_by_name(const Frame& frame, const WorldId& world,
                                          const std::string& name) {
  std::vector<WorldId> out;
  for (const RelationshipInstance& r : frame.relationships) {
    if (r.target == world && r.role == name) out.push_back(r.source);
    if (r.source == world && r.out_name == name) out.push_back(r.target);
  }
  return out;
}

int basis_rank(RoleBasis b) {
  switch (b) {
    case RoleBasis::Owner: return 2;
    case RoleBasis::Relationship: return 1;
    case RoleBasis::ContainmentInherited: return 0;
  }
  return -1;
}

}  // namespace

std::string_view to_string(RoleBasis basis) {
  switch (basis) {
    case RoleBasis::Owner: return "owner";
    case RoleBasis::Relationship: return "relationship";
    case RoleBasis::ContainmentInherited: return "containment";
  }
  return "unknown";
}

bool evaluate_constraint(const Frame& frame, const Constraint& c,
                         const WorldId& source, const WorldId& target,
                         Timestamp now) {
  c.validate();
  frame.world_at(source);
  frame.world_at(target);
  const WorldId& side = c.side == ConstraintSide::Source ? source : target;
  const World& w = frame.world_at(side);

  switch (c.kind) {
    case ConstraintKind::Implements:
      frame.template_at(c.template_ref);
      return implements_active(frame, w, c.template_ref, now);

    case ConstraintKind::Relt: {
      frame.template_at(c.template_ref);
      for (const WorldId& other : counterparts_by_name(frame, side, c.rel_name)) {
        const World* ow = frame.find_world(other);
        if (ow && implements_active(frame, *ow, c.template_ref, now)) return true;
      }
      return false;
    }

    case ConstraintKind::Relid:
      for (const WorldId& other : counterparts_by_name(frame, side, c.rel_name)) {
        if (other == c.world_ref) return true;
      }
      return false;
  }
  return false;
}

bool shares_active_template(const Frame& frame, const WorldId& a,
                            const WorldId& b, Timestamp now) {
  const World& wa = frame.world_at(a);
  const World& wb = frame.world_at(b);
  for (const TemplateBinding& ba : wa.bindings) {
    if (!ba.active(now)) continue;
    for (const TemplateBinding& bb : wb.bindings) {
      if (bb.active(now) && bb.template_id == ba.template_id) return true;
    }
  }
  return false;
}

std::vector<RoleAssertion> roles_of(const Frame& frame, const WorldId& subject,
                                    const WorldId& in_world, Timestamp now) {
  frame.world_at(subject);

  // role -> basis, strongest kept.
  std::map<std::string, RoleBasis> merged;
  auto add = [&merged](const std::string& role, RoleBasis basis) {
    auto [it, inserted] = merged.try_emplace(role, basis);
    if (!inserted && basis_rank(basis) > basis_rank(it->second))
      it->second = basis;
  };

  // Walk the containment chain upward. Roles held at chain[i] flow down to
  // in_world only while every consecutive pair below shares an active
  // template.
  std::vector<WorldId> chain = frame.containment_chain(in_world);
  for (std::size_t i = 0; i < chain.size(); ++i) {
    if (i > 0 && !shares_active_template(frame, chain[i - 1], chain[i], now))
      break;
    const World& w = frame.world_at(chain[i]);

    bool owner = subject == chain[i];
    if (!owner) {
      if (std::optional<AgentId> agent = frame.agent_of_world(subject)) {
        owner = w.owners.count(*agent) > 0;
      }
    }
    if (owner)
      add(std::string(kOwnerRole),
          i == 0 ? RoleBasis::Owner : RoleBasis::ContainmentInherited);

    for (const RelationshipInstance& r : frame.relationships) {
      if (r.source == subject && r.target == chain[i])
        add(r.role,
            i == 0 ? RoleBasis::Relationship : RoleBasis::ContainmentInherited);
    }
  }

  std::vector<RoleAssertion> out;
  out.reserve(merged.size());
  for (const auto& [role, basis] : merged)
    out.push_back({subject, in_world, role, basis});
  return out;
}

bool has_role(const Frame& frame, const WorldId& subject,
              const WorldId& in_world, const std::string& role, Timestamp now) {
  for (const RoleAssertion& a : roles_of(frame, subject, in_world, now)) {
    if (a.role == role) return true;
  }
  return false;
}

std::set<Privilege> privileges_of_agent(const Frame& frame, const AgentId& agent,
                                        const WorldId& world, Timestamp now) {
  const WorldId& home = frame.agent_world(agent);
  const World& w = frame.world_at(world);
  std::set<Privilege> out;
  for (const RoleAssertion& a : roles_of(frame, home, world, now)) {
    if (a.role == kOwnerRole) return all_privileges();
    SpecLookup<RelSpecIn> lookup = find_incoming(frame, w, a.role, now);
    if (lookup.state == LookupState::Found)
      out.insert(lookup.spec.privileges.begin(), lookup.spec.privileges.end());
  }
  return out;
}

bool agent_has_privilege(const Frame& frame, const AgentId& agent,
                         const WorldId& world, Privilege p, Timestamp now) {
  return privileges_of_agent(frame, agent, world, now).count(p) > 0;
}

}  // namespace multiverse
