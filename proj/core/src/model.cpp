// Copyright 2026 the Multiverse authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "multiverse/model.hpp"

namespace multiverse {

bool valid_identifier(std::string_view id) {
  if (id.empty()) return false;
  for (char c : id) {
    if (c == ':' || c == '(' || c == ')') return false;
    if (c == '\n' || c == '\r' || c == '\t') return false;
  }
  // Identifiers render inside tunnel strings; surrounding whitespace would
  // make parse(format(t)) lossy.
  if (id.front() == ' ' || id.back() == ' ') return false;
  return true;
}

void require_identifier(std::string_view id, std::string_view what) {
  if (!valid_identifier(id)) {
    throw Error(Errc::InvalidIdentifier,
                std::string(what) + " '" + std::string(id) + "' is not a valid identifier");
  }
}

std::string_view to_string(Privilege p) {
  switch (p) {
    case Privilege::ResourceRead: return "resource.read";
    case Privilege::ResourceWrite: return "resource.write";
    case Privilege::ResourceDelete: return "resource.delete";
    case Privilege::ResourceTemplate: return "resource.template";
    case Privilege::WorldEdit: return "world.edit";
    case Privilege::WorldRelocate: return "world.relocate";
    case Privilege::WorldCreate: return "world.create";
  }
  return "unknown";
}

std::optional<Privilege> privilege_from_string(std::string_view name) {
  for (Privilege p : kAllPrivileges) {
    if (to_string(p) == name) return p;
  }
  return std::nullopt;
}

std::set<Privilege> all_privileges() {
  return {std::begin(kAllPrivileges), std::end(kAllPrivileges)};
}

std::optional<Privilege> privilege_for_query_name(std::string_view query) {
  if (query == "read") return Privilege::ResourceRead;
  if (query == "write") return Privilege::ResourceWrite;
  if (query == "delete") return Privilege::ResourceDelete;
  return std::nullopt;
}

std::string_view to_string(ConstraintSide side) {
  return side == ConstraintSide::Source ? "source" : "target";
}

std::string_view to_string(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::Implements: return "implements";
    case ConstraintKind::Relt: return "relt";
    case ConstraintKind::Relid: return "relid";
  }
  return "unknown";
}

Constraint Constraint::implements(ConstraintSide side, TemplateId t) {
  Constraint c;
  c.kind = ConstraintKind::Implements;
  c.side = side;
  c.template_ref = std::move(t);
  return c;
}

Constraint Constraint::relt(ConstraintSide side, std::string name, TemplateId t) {
  Constraint c;
  c.kind = ConstraintKind::Relt;
  c.side = side;
  c.rel_name = std::move(name);
  c.template_ref = std::move(t);
  return c;
}

Constraint Constraint::relid(ConstraintSide side, std::string name, WorldId id) {
  Constraint c;
  c.kind = ConstraintKind::Relid;
  c.side = side;
  c.rel_name = std::move(name);
  c.world_ref = std::move(id);
  return c;
}

void Constraint::validate() const {
  switch (kind) {
    case ConstraintKind::Implements:
      if (template_ref.empty() || !rel_name.empty() || !world_ref.empty())
        throw Error(Errc::InvalidTemplate, "malformed implements constraint");
      return;
    case ConstraintKind::Relt:
      if (template_ref.empty() || rel_name.empty() || !world_ref.empty())
        throw Error(Errc::InvalidTemplate, "malformed relt constraint");
      return;
    case ConstraintKind::Relid:
      if (!template_ref.empty() || rel_name.empty() || world_ref.empty())
        throw Error(Errc::InvalidTemplate, "malformed relid constraint");
      return;
  }
  throw Error(Errc::InvalidTemplate, "unknown constraint kind");
}

std::string Constraint::describe() const {
  std::string out(to_string(side));
  out += '.';
  out += to_string(kind);
  out += '(';
  switch (kind) {
    case ConstraintKind::Implements:
      out += template_ref;
      break;
    case ConstraintKind::Relt:
      out += rel_name;
      out += ", ";
      out += template_ref;
      break;
    case ConstraintKind::Relid:
      out += rel_name;
      out += ", ";
      out += world_ref;
      break;
  }
  out += ')';
  return out;
}

void RoleTunnel::validate() const {
  if (segments.empty())
    throw Error(Errc::InvalidTunnel, "tunnel has no segments");
  for (const TunnelSegment& s : segments) {
    if (!valid_identifier(s.role) || !valid_identifier(s.world))
      throw Error(Errc::InvalidTunnel,
                  "segment '" + s.role + "(" + s.world + ")' is malformed");
  }
  if (segments.back().role != kOwnerRole)
    throw Error(Errc::InvalidTunnel,
                "terminal segment must carry the Owner role, got '" +
                    segments.back().role + "'");
}

}  // namespace multiverse
