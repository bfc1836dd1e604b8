// Copyright 2026 the Multiverse authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "multiverse/frame.hpp"
#include "multiverse/model.hpp"

namespace multiverse {

// Template ids are "<definedIn>/<name>".
TemplateId make_template_id(const WorldId& defined_in, const std::string& name);

// The template followed by its ancestors, leaf first. Throws UnknownTemplate
// for a dangling parent link and CycleDetected for an inheritance loop.
std::vector<TemplateId> template_chain(const Frame& frame, const TemplateId& id);

// True when `id`'s chain contains `ancestor` (a template implements all of
// its ancestors).
bool template_extends(const Frame& frame, const TemplateId& id,
                      const TemplateId& ancestor);

// Flattens single inheritance into one effective template. A child entry
// overrides the parent entry with the same key (incoming: role, outgoing:
// name, access point: query + required role); everything else is inherited.
// Outgoing specs come back normalized: counterpart_role defaults to the spec
// name and `roles` always includes Owner.
Template resolve_template(const Frame& frame, const TemplateId& id);

// Structural checks applied before a template enters the frame: identifier
// rules, constraint shapes, no reserved-role declarations, no duplicate keys,
// known access-point queries, positive TTLs. Throws Error(InvalidTemplate).
void validate_template(const Template& t);

enum class LookupState { Absent, Declared, Found };

// Result of searching a world's bindings for a spec. Found means an active
// binding's resolved template declares it. Declared means only expired
// bindings declare it (callers turn this into ExpiredTemplate: an expired
// template answers false for all its relationships and access points until
// re-imported).
template <typename Spec>
struct SpecLookup {
  LookupState state = LookupState::Absent;
  Spec spec{};
  const TemplateBinding* binding = nullptr;  // declaring binding when Found
  TemplateId declaring_template;
};

SpecLookup<RelSpecIn> find_incoming(const Frame& frame, const World& world,
                                    const std::string& role, Timestamp now);
SpecLookup<RelSpecOut> find_outgoing(const Frame& frame, const World& world,
                                     const std::string& name, Timestamp now);
SpecLookup<DataAccessPointSpec> find_access_point(const Frame& frame,
                                                  const World& world,
                                                  const std::string& query,
                                                  const std::string& required_role,
                                                  Timestamp now);

// Re-checks a remote binding: TTL first, then the capacity tunnel through
// `capacity_valid`. A failure marks the binding expired (sticky, across all
// snapshots sharing it). Local bindings always pass. Returns whether the
// binding is usable. Throws UnknownBinding when the world has no binding of
// this template.
bool check_binding(const Frame& frame, const WorldId& world,
                   const TemplateId& template_id, Timestamp now,
                   const std::function<bool(const RoleTunnel&)>& capacity_valid);

}  // namespace multiverse
