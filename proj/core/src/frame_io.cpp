// Copyright 2026 the Multiverse authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "multiverse/frame_io.hpp"

#include <fstream>
#include <sstream>

#include "multiverse/tunnel_codec.hpp"
#include "multiverse/util.hpp"

namespace multiverse {
namespace {

using nlohmann::json;

json opt_string(const std::optional<std::string>& v) {
  return v ? json(*v) : json(nullptr);
}

json opt_tunnel(const std::optional<RoleTunnel>& v) {
  return v ? json(format_tunnel(*v)) : json(nullptr);
}

json opt_time(const std::optional<Timestamp>& v) {
  return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> get_opt(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<T>();
}

std::optional<RoleTunnel> get_opt_tunnel(const json& j, const char* key) {
  auto text = get_opt<std::string>(j, key);
  if (!text) return std::nullopt;
  return parse_tunnel(*text);
}

json privileges_to_json(const std::set<Privilege>& privileges) {
  json out = json::array();
  for (Privilege p : privileges) out.push_back(std::string(to_string(p)));
  return out;
}

std::set<Privilege> privileges_from_json(const json& j) {
  std::set<Privilege> out;
  for (const auto& entry : j) {
    auto name = entry.get<std::string>();
    auto p = privilege_from_string(name);
    if (!p) throw ParseError(0, "unknown privilege '" + name + "'");
    out.insert(*p);
  }
  return out;
}

}  // namespace

void to_json(json& j, const Constraint& c) {
  j = json{{"kind", std::string(to_string(c.kind))},
           {"side", std::string(to_string(c.side))}};
  switch (c.kind) {
    case ConstraintKind::Implements:
      j["template"] = c.template_ref;
      break;
    case ConstraintKind::Relt:
      j["name"] = c.rel_name;
      j["template"] = c.template_ref;
      break;
    case ConstraintKind::Relid:
      j["name"] = c.rel_name;
      j["world"] = c.world_ref;
      break;
  }
}

void from_json(const json& j, Constraint& c) {
  auto side_name = j.at("side").get<std::string>();
  if (side_name == "source") {
    c.side = ConstraintSide::Source;
  } else if (side_name == "target") {
    c.side = ConstraintSide::Target;
  } else {
    throw ParseError(0, "unknown constraint side '" + side_name + "'");
  }
  auto kind_name = j.at("kind").get<std::string>();
  if (kind_name == "implements") {
    c = Constraint::implements(c.side, j.at("template").get<std::string>());
  } else if (kind_name == "relt") {
    c = Constraint::relt(c.side, j.at("name").get<std::string>(),
                         j.at("template").get<std::string>());
  } else if (kind_name == "relid") {
    c = Constraint::relid(c.side, j.at("name").get<std::string>(),
                          j.at("world").get<std::string>());
  } else {
    throw ParseError(0, "unknown constraint kind '" + kind_name + "'");
  }
}

void to_json(json& j, const DataAccessPointSpec& d) {
  j = json{{"allowedPurposes", d.allowed_purposes},
           {"query", d.query},
           {"requiredRole", d.required_role},
           {"ttlSeconds", d.ttl_seconds}};
}

void from_json(const json& j, DataAccessPointSpec& d) {
  d.query = j.at("query").get<std::string>();
  d.required_role = j.at("requiredRole").get<std::string>();
  d.allowed_purposes = j.at("allowedPurposes").get<std::set<std::string>>();
  d.ttl_seconds = j.at("ttlSeconds").get<std::int64_t>();
}

void to_json(json& j, const RelSpecIn& s) {
  j = json{{"constraints", s.constraints},
           {"privileges", privileges_to_json(s.privileges)},
           {"purposes", s.purposes},
           {"role", s.role}};
}

void from_json(const json& j, RelSpecIn& s) {
  s.role = j.at("role").get<std::string>();
  s.constraints = j.at("constraints").get<std::vector<Constraint>>();
  s.privileges = privileges_from_json(j.at("privileges"));
  s.purposes = j.at("purposes").get<std::set<std::string>>();
}

void to_json(json& j, const RelSpecOut& s) {
  j = json{{"constraints", s.constraints},
           {"counterpartRole", s.counterpart_role},
           {"name", s.name},
           {"roles", s.roles}};
}

void from_json(const json& j, RelSpecOut& s) {
  s.name = j.at("name").get<std::string>();
  s.counterpart_role = j.at("counterpartRole").get<std::string>();
  s.constraints = j.at("constraints").get<std::vector<Constraint>>();
  s.roles = j.at("roles").get<std::set<std::string>>();
}

void to_json(json& j, const Template& t) {
  j = json{{"accessPoints", t.access_points},
           {"definedIn", t.defined_in},
           {"id", t.id},
           {"incoming", t.incoming},
           {"name", t.name},
           {"outgoing", t.outgoing},
           {"parent", opt_string(t.parent)}};
}

void from_json(const json& j, Template& t) {
  t.id = j.at("id").get<std::string>();
  t.name = j.at("name").get<std::string>();
  t.defined_in = j.at("definedIn").get<std::string>();
  t.parent = get_opt<std::string>(j, "parent");
  t.access_points = j.at("accessPoints").get<std::vector<DataAccessPointSpec>>();
  t.incoming = j.at("incoming").get<std::vector<RelSpecIn>>();
  t.outgoing = j.at("outgoing").get<std::vector<RelSpecOut>>();
}

void to_json(json& j, const TemplateBinding& b) {
  j = json{{"boundAt", b.bound_at},
           {"capacity", opt_tunnel(b.capacity)},
           {"expired", b.marked_expired()},
           {"expiresAt", opt_time(b.expires_at)},
           {"templateId", b.template_id}};
}

void from_json(const json& j, TemplateBinding& b) {
  b.template_id = j.at("templateId").get<std::string>();
  b.bound_at = j.at("boundAt").get<Timestamp>();
  b.capacity = get_opt_tunnel(j, "capacity");
  b.expires_at = get_opt<Timestamp>(j, "expiresAt");
  b.expired = std::make_shared<std::atomic<bool>>(j.at("expired").get<bool>());
}

void to_json(json& j, const PendingRelationship& p) {
  j = json{{"outName", p.out_name},
           {"requestedAt", p.requested_at},
           {"requestedBy", p.requested_by},
           {"role", p.role},
           {"source", p.source}};
}

void from_json(const json& j, PendingRelationship& p) {
  p.source = j.at("source").get<std::string>();
  p.out_name = j.at("outName").get<std::string>();
  p.role = j.at("role").get<std::string>();
  p.requested_by = j.at("requestedBy").get<std::string>();
  p.requested_at = j.at("requestedAt").get<Timestamp>();
}

void to_json(json& j, const World& w) {
  j = json{{"bindings", w.bindings},
           {"createdAt", w.created_at},
           {"id", w.id},
           {"location", opt_string(w.location)},
           {"name", w.name},
           {"owners", w.owners},
           {"pending", w.pending},
           {"requireApproval", w.require_approval}};
}

void from_json(const json& j, World& w) {
  w.id = j.at("id").get<std::string>();
  w.name = j.at("name").get<std::string>();
  w.owners = j.at("owners").get<std::set<std::string>>();
  w.location = get_opt<std::string>(j, "location");
  w.bindings = j.at("bindings").get<std::vector<TemplateBinding>>();
  w.created_at = j.at("createdAt").get<Timestamp>();
  w.require_approval = j.at("requireApproval").get<bool>();
  w.pending = j.at("pending").get<std::vector<PendingRelationship>>();
}

void to_json(json& j, const StoredResource& r) {
  j = json{{"capacity", opt_tunnel(r.capacity)},
           {"data", base64_encode(r.data)},
           {"expiresAt", opt_time(r.expires_at)},
           {"originWorld", opt_string(r.origin_world)},
           {"resourceId", r.resource_id}};
}

void from_json(const json& j, StoredResource& r) {
  r.resource_id = j.at("resourceId").get<std::string>();
  r.data = base64_decode(j.at("data").get<std::string>());
  r.capacity = get_opt_tunnel(j, "capacity");
  r.expires_at = get_opt<Timestamp>(j, "expiresAt");
  r.origin_world = get_opt<std::string>(j, "originWorld");
}

void to_json(json& j, const RelationshipInstance& r) {
  j = json{{"establishedAt", r.established_at},
           {"establishedBy", r.established_by},
           {"outName", r.out_name},
           {"role", r.role},
           {"source", r.source},
           {"target", r.target}};
}

void from_json(const json& j, RelationshipInstance& r) {
  r.source = j.at("source").get<std::string>();
  r.target = j.at("target").get<std::string>();
  r.out_name = j.at("outName").get<std::string>();
  r.role = j.at("role").get<std::string>();
  r.established_by = j.at("establishedBy").get<std::string>();
  r.established_at = j.at("establishedAt").get<Timestamp>();
}

void to_json(json& j, const CheckRecord& c) {
  j = json{{"level", c.level},
           {"passed", c.passed ? json(*c.passed) : json(nullptr)},
           {"performed", c.performed},
           {"subject", c.subject}};
}

void from_json(const json& j, CheckRecord& c) {
  c.level = j.at("level").get<int>();
  c.subject = j.at("subject").get<std::string>();
  c.performed = j.at("performed").get<bool>();
  auto passed = j.at("passed");
  c.passed = passed.is_null() ? std::nullopt : std::optional<bool>(passed.get<bool>());
}

void to_json(json& j, const ValidationReport& r) {
  j = json{{"checks", r.checks},
           {"frameVersion", r.frame_version},
           {"rngSeed", r.rng_seed},
           {"tunnel", format_tunnel(r.tunnel)},
           {"valid", r.valid}};
  if (r.failure) {
    j["failure"] = json{{"reason", r.failure->reason},
                        {"segment", r.failure->segment}};
  } else {
    j["failure"] = nullptr;
  }
}

void from_json(const json& j, ValidationReport& r) {
  r.tunnel = parse_tunnel(j.at("tunnel").get<std::string>());
  r.valid = j.at("valid").get<bool>();
  r.checks = j.at("checks").get<std::vector<CheckRecord>>();
  r.rng_seed = j.at("rngSeed").get<std::uint64_t>();
  r.frame_version = j.at("frameVersion").get<std::uint64_t>();
  const auto& failure = j.at("failure");
  if (failure.is_null()) {
    r.failure = std::nullopt;
  } else {
    r.failure = ValidationFailure{failure.at("segment").get<int>(),
                                  failure.at("reason").get<std::string>()};
  }
}

nlohmann::json frame_to_json(const Frame& frame) {
  json worlds = json::object();
  for (const auto& [id, w] : frame.worlds) worlds[id] = w;
  json templates = json::object();
  for (const auto& [id, t] : frame.templates) templates[id] = t;
  json resources = json::object();
  for (const auto& [world, by_id] : frame.resources) {
    json bucket = json::object();
    for (const auto& [rid, res] : by_id) bucket[rid] = res;
    resources[world] = std::move(bucket);
  }
  return json{{"agents", frame.agents},
              {"purposes", frame.purposes},
              {"relationships", frame.relationships},
              {"resources", resources},
              {"templates", templates},
              {"version", frame.version},
              {"worlds", worlds}};
}

Frame frame_from_json(const nlohmann::json& j) {
  try {
    Frame frame;
    frame.version = j.at("version").get<std::uint64_t>();
    for (const auto& [id, wj] : j.at("worlds").items()) {
      World w = wj.get<World>();
      if (w.id != id)
        throw ParseError(0, "world key '" + id + "' does not match id '" + w.id + "'");
      frame.worlds.emplace(id, std::move(w));
    }
    for (const auto& [id, tj] : j.at("templates").items()) {
      Template t = tj.get<Template>();
      if (t.id != id)
        throw ParseError(0, "template key '" + id + "' does not match id '" + t.id + "'");
      frame.templates.emplace(id, std::move(t));
    }
    frame.relationships =
        j.at("relationships").get<std::vector<RelationshipInstance>>();
    for (const auto& [world, bucket] : j.at("resources").items()) {
      auto& slot = frame.resources[world];
      for (const auto& [rid, rj] : bucket.items()) {
        StoredResource r = rj.get<StoredResource>();
        if (r.resource_id != rid)
          throw ParseError(0, "resource key '" + rid + "' does not match id '" +
                                  r.resource_id + "'");
        slot.emplace(rid, std::move(r));
      }
    }
    frame.agents = j.at("agents").get<std::map<std::string, std::string>>();
    frame.purposes = j.at("purposes").get<std::vector<std::string>>();
    return frame;
  } catch (const json::exception& e) {
    throw ParseError(0, std::string("malformed frame document: ") + e.what());
  }
}

std::string canonical_dump(const nlohmann::json& j) {
  return j.dump(2) + "\n";
}

void save_frame(const Frame& frame, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw Error(Errc::StorageFailure, "cannot open '" + path.string() + "' for writing");
  out << canonical_dump(frame_to_json(frame));
  out.flush();
  if (!out)
    throw Error(Errc::StorageFailure, "short write to '" + path.string() + "'");
}

Frame load_frame(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(Errc::StorageFailure, "cannot open '" + path.string() + "' for reading");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(0, std::string("invalid JSON in '") + path.string() + "': " + e.what());
  }
  return frame_from_json(j);
}

}  // namespace multiverse
