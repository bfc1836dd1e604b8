// Copyright 2026 the Multiverse authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "multiverse/templates.hpp"

#include <algorithm>
#include <set>
#include <utility>

namespace multiverse {
namespace {

RelSpecOut normalized(RelSpecOut spec) {
  if (spec.counterpart_role.empty()) spec.counterpart_role = spec.name;
  spec.roles.insert(std::string(kOwnerRole));
  return spec;
}

// Appends `entry` to `out`, replacing an earlier entry with the same key.
template <typename Spec, typename KeyFn>
void merge_entry(std::vector<Spec>& out, Spec entry, const KeyFn& key) {
  for (Spec& existing : out) {
    if (key(existing) == key(entry)) {
      existing = std::move(entry);
      return;
    }
  }
  out.push_back(std::move(entry));
}

}  // namespace

TemplateId make_template_id(const WorldId& defined_in, const std::string& name) {
  return defined_in + "/" + name;
}

std::vector<TemplateId> template_chain(const Frame& frame, const TemplateId& id) {
  std::vector<TemplateId> chain;
  const Template* t = &frame.template_at(id);
  chain.push_back(t->id);
  while (t->parent) {
    const Template* up = frame.find_template(*t->parent);
    if (!up)
      throw Error(Errc::UnknownTemplate,
                  "template '" + t->id + "' extends missing template '" +
                      *t->parent + "'");
    if (std::find(chain.begin(), chain.end(), up->id) != chain.end())
      throw Error(Errc::CycleDetected,
                  "template inheritance cycle through '" + up->id + "'");
    chain.push_back(up->id);
    t = up;
  }
  return chain;
}

bool template_extends(const Frame& frame, const TemplateId& id,
                      const TemplateId& ancestor) {
  for (const TemplateId& t : template_chain(frame, id)) {
    if (t == ancestor) return true;
  }
  return false;
}

Template resolve_template(const Frame& frame, const TemplateId& id) {
  std::vector<TemplateId> chain = template_chain(frame, id);
  Template out = frame.template_at(id);
  out.access_points.clear();
  out.incoming.clear();
  out.outgoing.clear();
  // Root first so children override.
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    const Template& layer = frame.template_at(*it);
    for (const DataAccessPointSpec& dap : layer.access_points) {
      merge_entry(out.access_points, dap, [](const DataAccessPointSpec& d) {
        return std::make_pair(d.query, d.required_role);
      });
    }
    for (const RelSpecIn& in : layer.incoming) {
      merge_entry(out.incoming, in, [](const RelSpecIn& s) { return s.role; });
    }
    for (const RelSpecOut& o : layer.outgoing) {
      merge_entry(out.outgoing, normalized(o),
                  [](const RelSpecOut& s) { return s.name; });
    }
  }
  return out;
}

void validate_template(const Template& t) {
  require_identifier(t.name, "template name");
  if (t.id != make_template_id(t.defined_in, t.name))
    throw Error(Errc::InvalidTemplate,
                "template id '" + t.id + "' does not match definition world");

  std::set<std::pair<std::string, std::string>> dap_keys;
  for (const DataAccessPointSpec& dap : t.access_points) {
    if (!privilege_for_query_name(dap.query))
      throw Error(Errc::InvalidTemplate,
                  "access point query '" + dap.query + "' is not registered");
    require_identifier(dap.required_role, "access point role");
    if (dap.ttl_seconds <= 0)
      throw Error(Errc::InvalidTemplate, "access point TTL must be positive");
    if (!dap_keys.insert({dap.query, dap.required_role}).second)
      throw Error(Errc::InvalidTemplate,
                  "duplicate access point for query '" + dap.query +
                      "' and role '" + dap.required_role + "'");
  }

  std::set<std::string> roles;
  for (const RelSpecIn& in : t.incoming) {
    require_identifier(in.role, "incoming role");
    if (in.role == kOwnerRole)
      throw Error(Errc::InvalidTemplate,
                  "the Owner role is reserved and cannot be declared");
    if (!roles.insert(in.role).second)
      throw Error(Errc::InvalidTemplate,
                  "duplicate incoming role '" + in.role + "'");
    for (const Constraint& c : in.constraints) c.validate();
  }

  std::set<std::string> names;
  for (const RelSpecOut& o : t.outgoing) {
    require_identifier(o.name, "outgoing relationship name");
    if (!names.insert(o.name).second)
      throw Error(Errc::InvalidTemplate,
                  "duplicate outgoing relationship '" + o.name + "'");
    if (!o.counterpart_role.empty())
      require_identifier(o.counterpart_role, "counterpart role");
    std::string counterpart =
        o.counterpart_role.empty() ? o.name : o.counterpart_role;
    if (counterpart == kOwnerRole)
      throw Error(Errc::InvalidTemplate,
                  "the Owner role is reserved and cannot be granted");
    for (const Constraint& c : o.constraints) c.validate();
    for (const std::string& r : o.roles) require_identifier(r, "establisher role");
  }
}

namespace {

// Shared scan: prefer a match in an active binding; remember whether any
// expired binding declares the key.
template <typename Spec, typename Extract>
SpecLookup<Spec> scan_bindings(const Frame& frame, const World& world,
                               Timestamp now, const Extract& extract) {
  SpecLookup<Spec> result;
  for (const TemplateBinding& b : world.bindings) {
    if (!frame.find_template(b.template_id)) continue;  // dangling definition
    Template resolved = resolve_template(frame, b.template_id);
    const Spec* found = extract(resolved);
    if (!found) continue;
    if (b.active(now)) {
      result.state = LookupState::Found;
      result.spec = *found;
      result.binding = &b;
      result.declaring_template = b.template_id;
      return result;
    }
    if (result.state == LookupState::Absent) {
      result.state = LookupState::Declared;
      result.binding = &b;
      result.declaring_template = b.template_id;
    }
  }
  return result;
}

}  // namespace

SpecLookup<RelSpecIn> find_incoming(const Frame& frame, const World& world,
                                    const std::string& role, Timestamp now) {
  return scan_bindings<RelSpecIn>(
      frame, world, now, [&](const Template& t) -> const RelSpecIn* {
        for (const RelSpecIn& in : t.incoming)
          if (in.role == role) return &in;
        return nullptr;
      });
}

SpecLookup<RelSpecOut> find_outgoing(const Frame& frame, const World& world,
                                     const std::string& name, Timestamp now) {
  auto result = scan_bindings<RelSpecOut>(
      frame, world, now, [&](const Template& t) -> const RelSpecOut* {
        for (const RelSpecOut& o : t.outgoing)
          if (o.name == name) return &o;
        return nullptr;
      });
  if (result.state == LookupState::Found) result.spec = normalized(result.spec);
  return result;
}

SpecLookup<DataAccessPointSpec> find_access_point(const Frame& frame,
                                                  const World& world,
                                                  const std::string& query,
                                                  const std::string& required_role,
                                                  Timestamp now) {
  return scan_bindings<DataAccessPointSpec>(
      frame, world, now, [&](const Template& t) -> const DataAccessPointSpec* {
        for (const DataAccessPointSpec& dap : t.access_points)
          if (dap.query == query && dap.required_role == required_role)
            return &dap;
        return nullptr;
      });
}

bool check_binding(const Frame& frame, const WorldId& world,
                   const TemplateId& template_id, Timestamp now,
                   const std::function<bool(const RoleTunnel&)>& capacity_valid) {
  const World& w = frame.world_at(world);
  const TemplateBinding* binding = nullptr;
  for (const TemplateBinding& b : w.bindings) {
    if (b.template_id == template_id) {
      binding = &b;
      break;
    }
  }
  if (!binding)
    throw Error(Errc::UnknownBinding, "world '" + world +
                                          "' does not implement template '" +
                                          template_id + "'");
  if (binding->marked_expired()) return false;
  if (binding->local()) return true;
  if (binding->expires_at && now >= *binding->expires_at) {
    binding->mark_expired();
    return false;
  }
  if (!capacity_valid(*binding->capacity)) {
    binding->mark_expired();
    return false;
  }
  return true;
}

}  // namespace multiverse
