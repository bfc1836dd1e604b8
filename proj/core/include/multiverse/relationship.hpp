// Copyright 2026 the Multiverse authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <set>
#include <string>
#include <vector>

#include "multiverse/frame.hpp"
#include "multiverse/model.hpp"

namespace multiverse {

// Why a subject holds a role in a world.
enum class RoleBasis : std::uint8_t {
  Owner,                 // subject is the world itself or one of its owners
  Relationship,          // a live instance grants it directly
  ContainmentInherited,  // flows down from the containing world
};

std::string_view to_string(RoleBasis basis);

struct RoleAssertion {
  WorldId subject;
  WorldId in_world;
  std::string role;
  RoleBasis basis;

  bool operator==(const RoleAssertion&) const = default;
};

// Evaluates one Constraint against a prospective or existing relationship
// (source, target) at time `now`. Only active template bindings count:
// an expired implementation satisfies nothing. Throws UnknownWorld when
// source/target are missing and UnknownTemplate when a referenced template
// does not exist; an unknown relid world is simply false.
bool evaluate_constraint(const Frame& frame, const Constraint& c,
                         const WorldId& source, const WorldId& target,
                         Timestamp now);

// Every role `subject` holds inside `in_world`:
//  - Owner, when subject is in_world itself or the subject world's agent is
//    among in_world's owners;
//  - roles granted by live relationship instances (source=subject,
//    target=in_world);
//  - roles inherited from the containing world, provided in_world and its
//    container both actively bind at least one common template. Inheritance
//    chains upward but stops at the first link that shares nothing.
// Duplicate role names keep the strongest basis (Owner > Relationship >
// ContainmentInherited). Throws UnknownWorld.
std::vector<RoleAssertion> roles_of(const Frame& frame, const WorldId& subject,
                                    const WorldId& in_world, Timestamp now);

bool has_role(const Frame& frame, const WorldId& subject,
              const WorldId& in_world, const std::string& role, Timestamp now);

// True when the worlds both hold an active binding of one common template;
// the gate for containment inheritance.
bool shares_active_template(const Frame& frame, const WorldId& a,
                            const WorldId& b, Timestamp now);

// Privileges an agent can exercise inside a world: the union over the
// agent's world's role assertions there. Owner yields all seven privileges;
// other roles yield the privileges of their declaring rel_i spec in that
// world (roles whose declaration cannot be resolved contribute nothing).
std::set<Privilege> privileges_of_agent(const Frame& frame, const AgentId& agent,
                                        const WorldId& world, Timestamp now);

bool agent_has_privilege(const Frame& frame, const AgentId& agent,
                         const WorldId& world, Privilege p, Timestamp now);

}  // namespace multiverse
