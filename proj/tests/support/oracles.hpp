// Copyright 2026 the Multiverse authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

// Brute-force reference evaluators for role derivation and constraint
// checking. These re-derive the contracts from first principles with plain
// loops so the production implementations have something independent to
// disagree with.

#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "multiverse/frame.hpp"
#include "multiverse/model.hpp"

namespace multiverse::oracle {

inline std::vector<WorldId> containment(const Frame& f, const WorldId& w) {
  std::vector<WorldId> chain;
  std::set<WorldId> seen;
  std::optional<WorldId> cur = w;
  while (cur) {
    if (!seen.insert(*cur).second)
      throw Error(Errc::CycleDetected, "oracle: containment loop at " + *cur);
    const World* ww = f.find_world(*cur);
    if (!ww) throw Error(Errc::UnknownWorld, "oracle: dangling location " + *cur);
    chain.push_back(*cur);
    cur = ww->location;
  }
  return chain;
}

inline bool binding_active(const TemplateBinding& b, Timestamp now) {
  if (b.marked_expired()) return false;
  if (b.expires_at && now >= *b.expires_at) return false;
  return true;
}

inline std::set<TemplateId> active_templates(const Frame& f, const WorldId& w,
                                             Timestamp now) {
  std::set<TemplateId> out;
  const World* ww = f.find_world(w);
  if (!ww) return out;
  for (const TemplateBinding& b : ww->bindings) {
    if (binding_active(b, now)) out.insert(b.template_id);
  }
  return out;
}

inline bool share_template(const Frame& f, const WorldId& a, const WorldId& b,
                           Timestamp now) {
  std::set<TemplateId> ta = active_templates(f, a, now);
  for (const TemplateId& t : active_templates(f, b, now)) {
    if (ta.count(t)) return true;
  }
  return false;
}

// Role names subject holds in in_world (bases are not distinguished here).
inline std::set<std::string> roles(const Frame& f, const WorldId& subject,
                                   const WorldId& in_world, Timestamp now) {
  if (!f.find_world(subject))
    throw Error(Errc::UnknownWorld, "oracle: unknown subject " + subject);
  std::set<std::string> out;
  std::vector<WorldId> chain = containment(f, in_world);
  for (std::size_t i = 0; i < chain.size(); ++i) {
    if (i > 0 && !share_template(f, chain[i - 1], chain[i], now)) break;
    const World& w = *f.find_world(chain[i]);

    bool owner = subject == chain[i];
    for (const auto& [agent, home] : f.agents) {
      if (home == subject && w.owners.count(agent)) owner = true;
    }
    if (owner) out.insert(std::string(kOwnerRole));

    for (const RelationshipInstance& r : f.relationships) {
      if (r.source == subject && r.target == chain[i]) out.insert(r.role);
    }
  }
  return out;
}

inline bool extends(const Frame& f, const TemplateId& leaf,
                    const TemplateId& ancestor) {
  std::set<TemplateId> seen;
  std::optional<TemplateId> cur = leaf;
  while (cur) {
    if (!seen.insert(*cur).second) return false;
    if (*cur == ancestor) return true;
    const Template* t = f.find_template(*cur);
    if (!t) return false;
    cur = t->parent;
  }
  return false;
}

inline bool implements(const Frame& f, const WorldId& w, const TemplateId& ancestor,
                       Timestamp now) {
  const World* ww = f.find_world(w);
  if (!ww) return false;
  for (const TemplateBinding& b : ww->bindings) {
    if (!binding_active(b, now)) continue;
    if (!f.find_template(b.template_id)) continue;
    if (extends(f, b.template_id, ancestor)) return true;
  }
  return false;
}

inline std::vector<WorldId> counterparts(const Frame& f, const WorldId& w,
                                         const std::string& name) {
  std::vector<WorldId> out;
  for (const RelationshipInstance& r : f.relationships) {
    if (r.target == w && r.role == name) out.push_back(r.source);
    if (r.source == w && r.out_name == name) out.push_back(r.target);
  }
  return out;
}

inline bool constraint(const Frame& f, const Constraint& c, const WorldId& source,
                       const WorldId& target, Timestamp now) {
  c.validate();
  if (!f.find_world(source))
    throw Error(Errc::UnknownWorld, "oracle: unknown source " + source);
  if (!f.find_world(target))
    throw Error(Errc::UnknownWorld, "oracle: unknown target " + target);
  const WorldId& side = c.side == ConstraintSide::Source ? source : target;

  switch (c.kind) {
    case ConstraintKind::Implements:
      if (!f.find_template(c.template_ref))
        throw Error(Errc::UnknownTemplate, "oracle: unknown ref " + c.template_ref);
      return implements(f, side, c.template_ref, now);
    case ConstraintKind::Relt: {
      if (!f.find_template(c.template_ref))
        throw Error(Errc::UnknownTemplate, "oracle: unknown ref " + c.template_ref);
      for (const WorldId& other : counterparts(f, side, c.rel_name)) {
        if (f.find_world(other) && implements(f, other, c.template_ref, now))
          return true;
      }
      return false;
    }
    case ConstraintKind::Relid:
      for (const WorldId& other : counterparts(f, side, c.rel_name)) {
        if (other == c.world_ref) return true;
      }
      return false;
  }
  return false;
}

}  // namespace multiverse::oracle
