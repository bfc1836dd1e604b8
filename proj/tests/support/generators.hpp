// Copyright 2026 the Multiverse authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

// Seeded random frames and tunnels for property tests. Frames are built
// directly (no engine) so evaluation code is exercised on states the engine
// would and would not produce. Two domain restrictions keep the reference
// evaluators comparable: template parents always point at an existing,
// earlier template (no dangling parent, no inheritance cycle), and world
// locations always point at an earlier world (no containment cycle).

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "multiverse/frame.hpp"
#include "multiverse/model.hpp"
#include "multiverse/tunnel_codec.hpp"

namespace multiverse::testgen {

inline constexpr Timestamp kNow = 1700000000;

class Rand {
 public:
  explicit Rand(std::uint64_t seed) : rng_(seed) {}

  std::size_t index(std::size_t n) {  // [0, n)
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
  }
  int range(int lo, int hi) {  // [lo, hi]
    return std::uniform_int_distribution<int>(lo, hi)(rng_);
  }
  bool chance(double p) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < p;
  }
  template <typename T>
  const T& pick(const std::vector<T>& pool) {
    return pool[index(pool.size())];
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline const std::vector<std::string>& role_pool() {
  static const std::vector<std::string> pool = {
      "Doctor", "Member", "Advisor", "Analyst", "Senior Analyst"};
  return pool;
}

inline const std::vector<std::string>& out_name_pool() {
  static const std::vector<std::string> pool = {"Treat", "Refer", "Share"};
  return pool;
}

inline const std::vector<std::string>& purpose_pool() {
  static const std::vector<std::string> pool = {"Diagnostics", "Research"};
  return pool;
}

// An identifier that may contain interior spaces and punctuation but honors
// the lexical rule (no ':', '(', ')', control chars, edge spaces).
inline std::string random_identifier(Rand& r) {
  static const std::string body =
      "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789"
      "._-@+= ";
  static const std::string edge =
      "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";
  int len = r.range(1, 12);
  std::string out;
  out.push_back(edge[r.index(edge.size())]);
  for (int i = 1; i < len - 1; ++i) out.push_back(body[r.index(body.size())]);
  if (len > 1) out.push_back(edge[r.index(edge.size())]);
  return out;
}

inline RoleTunnel random_tunnel(Rand& r) {
  RoleTunnel t;
  int hops = r.range(0, 4);
  for (int i = 0; i < hops; ++i)
    t.segments.push_back({random_identifier(r), random_identifier(r)});
  t.segments.push_back({std::string(kOwnerRole), random_identifier(r)});
  return t;
}

inline Constraint random_constraint(Rand& r, const std::vector<TemplateId>& tids,
                                    const std::vector<WorldId>& wids) {
  ConstraintSide side =
      r.chance(0.5) ? ConstraintSide::Source : ConstraintSide::Target;
  // One dangling template ref in ten keeps the UnknownTemplate path honest.
  auto tref = [&]() -> TemplateId {
    if (tids.empty() || r.chance(0.1)) return "nowhere/Ghost";
    return r.pick(tids);
  };
  std::string rel =
      r.chance(0.5) ? r.pick(out_name_pool()) : r.pick(role_pool());
  switch (r.index(3)) {
    case 0: return Constraint::implements(side, tref());
    case 1: return Constraint::relt(side, rel, tref());
    default: {
      WorldId w = r.chance(0.1) ? "w-missing" : r.pick(wids);
      return Constraint::relid(side, rel, w);
    }
  }
}

struct GeneratedFrame {
  Frame frame;
  std::vector<WorldId> world_ids;
  std::vector<TemplateId> template_ids;
  std::vector<AgentId> agent_ids;
};

// Bounded random state: at most 8 worlds, 3 templates, 12 relationship
// instances. Bindings mix local, live remote, lapsed remote and tombstoned
// remote so activity windows matter.
inline GeneratedFrame random_frame(std::uint64_t seed) {
  Rand r(seed);
  GeneratedFrame g;
  Frame& f = g.frame;

  int n_worlds = r.range(2, 8);
  int n_agents = r.range(1, std::min(3, n_worlds));
  for (int i = 0; i < n_worlds; ++i) {
    World w;
    w.id = "w" + std::to_string(i);
    w.name = w.id;
    w.created_at = kNow - 1000;
    if (i < n_agents) {
      f.agents[w.id] = w.id;
      w.owners.insert(w.id);
    } else {
      w.owners.insert("w" + std::to_string(r.range(0, n_agents - 1)));
      if (r.chance(0.3)) w.owners.insert("w" + std::to_string(r.range(0, n_agents - 1)));
      if (r.chance(0.5)) w.location = g.world_ids[r.index(g.world_ids.size())];
    }
    g.world_ids.push_back(w.id);
    f.worlds[w.id] = std::move(w);
  }
  for (int i = 0; i < n_agents; ++i) g.agent_ids.push_back("w" + std::to_string(i));

  int n_templates = r.range(0, 3);
  for (int i = 0; i < n_templates; ++i) {
    Template t;
    t.name = "T" + std::to_string(i);
    t.defined_in = r.pick(g.world_ids);
    t.id = t.defined_in + "/" + t.name;
    if (i > 0 && r.chance(0.5)) t.parent = g.template_ids[r.index(g.template_ids.size())];
    g.template_ids.push_back(t.id);
    f.templates[t.id] = std::move(t);
  }
  // Second pass so constraints can reference any template id.
  for (const TemplateId& tid : g.template_ids) {
    Template& t = f.templates[tid];
    int n_in = r.range(0, 2);
    for (int i = 0; i < n_in; ++i) {
      RelSpecIn in;
      in.role = r.pick(role_pool());
      int n_c = r.range(0, 2);
      for (int c = 0; c < n_c; ++c)
        in.constraints.push_back(random_constraint(r, g.template_ids, g.world_ids));
      in.privileges.insert(Privilege::ResourceRead);
      if (r.chance(0.4)) in.privileges.insert(Privilege::ResourceTemplate);
      in.purposes.insert(r.pick(purpose_pool()));
      t.incoming.push_back(std::move(in));
    }
    int n_out = r.range(0, 2);
    for (int i = 0; i < n_out; ++i) {
      RelSpecOut out;
      out.name = r.pick(out_name_pool());
      out.counterpart_role = r.pick(role_pool());
      if (r.chance(0.3))
        out.constraints.push_back(random_constraint(r, g.template_ids, g.world_ids));
      out.roles.insert(std::string(kOwnerRole));
      if (r.chance(0.5)) out.roles.insert(r.pick(role_pool()));
      t.outgoing.push_back(std::move(out));
    }
    if (r.chance(0.4)) {
      DataAccessPointSpec dap;
      dap.query = "read";
      dap.required_role = r.pick(role_pool());
      dap.allowed_purposes.insert(r.pick(purpose_pool()));
      dap.ttl_seconds = r.range(60, 100000);
      t.access_points.push_back(std::move(dap));
    }
  }

  if (!g.template_ids.empty()) {
    for (const WorldId& wid : g.world_ids) {
      int n_b = r.range(0, 2);
      for (int i = 0; i < n_b; ++i) {
        TemplateBinding b;
        b.template_id = r.chance(0.08) ? "nowhere/Ghost" : r.pick(g.template_ids);
        b.bound_at = kNow - 500;
        if (r.chance(0.4)) {
          RoleTunnel cap;
          cap.segments.push_back({std::string(kOwnerRole), r.pick(g.world_ids)});
          b.capacity = std::move(cap);
          b.expires_at = r.chance(0.25) ? kNow - r.range(1, 400)
                                        : kNow + r.range(1, 100000);
          if (r.chance(0.15)) b.mark_expired();
        }
        f.worlds[wid].bindings.push_back(std::move(b));
      }
    }
  }

  int n_edges = r.range(0, 12);
  for (int i = 0; i < n_edges; ++i) {
    RelationshipInstance e;
    e.source = r.pick(g.world_ids);
    e.target = r.pick(g.world_ids);
    e.out_name = r.pick(out_name_pool());
    e.role = r.pick(role_pool());
    e.established_by = r.pick(g.agent_ids);
    e.established_at = kNow - r.range(1, 900);
    f.relationships.push_back(std::move(e));
  }

  for (const std::string& p : purpose_pool()) f.purposes.push_back(p);
  f.version = 1;
  return g;
}

}  // namespace multiverse::testgen
