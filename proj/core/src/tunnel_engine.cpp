// Copyright 2026 the Multiverse authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "multiverse/tunnel_engine.hpp"

#include <algorithm>
#include <set>

#include "multiverse/relationship.hpp"
#include "multiverse/templates.hpp"
#include "multiverse/tunnel_codec.hpp"
#include "multiverse/util.hpp"

namespace multiverse {
namespace {

std::string segment_subject(const TunnelSegment& s) {
  return s.role + "(" + s.world + ")";
}

std::string capacity_subject(const TemplateId& t, const WorldId& w) {
  return "capacity(" + t + "@" + w + ")";
}

struct SegmentVerdict {
  bool passed = false;
  std::string reason;
  // Remote declaring binding to re-validate, when the role rests on one.
  const TemplateBinding* candidate = nullptr;
};

struct Walk {
  const Frame& frame;
  double rho;
  Timestamp now;
  CheckRng rng;
  ValidationReport& report;
  int depth_cap;
  // Once any check fails, remaining checks still run for the report but no
  // new capacity recursions start.
  bool any_failure = false;
};

// Outcome of walking one tunnel (the original or a nested capacity tunnel):
// the first failing check among its own segments and their capacity
// recursions, indexed into that tunnel's segments.
struct WalkResult {
  bool ok = true;
  int segment = 0;
  std::string reason;
};

// How segment subjects are established.
struct SubjectMode {
  std::optional<AgentId> as_agent;  // terminal must be this agent's world
  std::optional<AgentId> reader;    // substituted checks for this agent
};

SegmentVerdict check_terminal(const Walk& walk, const TunnelSegment& seg,
                              const SubjectMode& mode) {
  SegmentVerdict v;
  const World* w = walk.frame.find_world(seg.world);
  if (!w) {
    v.reason = "terminal world '" + seg.world + "' does not exist";
    return v;
  }
  if (seg.role != kOwnerRole) {
    v.reason = "terminal role must be Owner";
    return v;
  }
  if (mode.reader) {
    if (!w->owners.count(*mode.reader)) {
      v.reason = "reader '" + *mode.reader + "' does not own terminal world '" +
                 seg.world + "'";
      return v;
    }
  } else if (mode.as_agent) {
    if (walk.frame.agent_world(*mode.as_agent) != seg.world) {
      v.reason = "terminal world '" + seg.world + "' is not the world of agent '" +
                 *mode.as_agent + "'";
      return v;
    }
  } else if (!walk.frame.agent_of_world(seg.world)) {
    v.reason = "terminal world '" + seg.world + "' is not an agent world";
    return v;
  }
  v.passed = true;
  return v;
}

// Re-validates a directly-held role: declaration resolvable, the live
// instance's source out-spec entitles `next_role` to traverse, declaring
// constraints still hold.
SegmentVerdict check_direct(const Walk& walk, const WorldId& subject,
                            const WorldId& in_world, const std::string& role,
                            const std::string& next_role) {
  SegmentVerdict v;
  const World& w = walk.frame.world_at(in_world);

  SpecLookup<RelSpecIn> decl = find_incoming(walk.frame, w, role, walk.now);
  if (decl.state == LookupState::Absent) {
    v.reason = "role '" + role + "' is not declared by any template implemented in '" +
               in_world + "'";
    return v;
  }
  if (decl.state == LookupState::Declared) {
    v.reason = "template '" + decl.declaring_template + "' declaring role '" +
               role + "' in '" + in_world + "' has expired";
    return v;
  }
  if (!decl.binding->local()) v.candidate = decl.binding;

  const World& source_world = walk.frame.world_at(subject);
  bool entitled = false;
  std::string entitle_reason =
      "no relationship instance grants '" + subject + "' role '" + role +
      "' in '" + in_world + "'";
  for (const RelationshipInstance& r : walk.frame.relationships) {
    if (r.source != subject || r.target != in_world || r.role != role) continue;
    SpecLookup<RelSpecOut> out =
        find_outgoing(walk.frame, source_world, r.out_name, walk.now);
    if (out.state == LookupState::Absent) {
      entitle_reason = "outgoing spec '" + r.out_name + "' is not declared in '" +
                       subject + "'";
      continue;
    }
    if (out.state == LookupState::Declared) {
      entitle_reason = "template declaring outgoing spec '" + r.out_name +
                       "' in '" + subject + "' has expired";
      continue;
    }
    if (!out.spec.roles.count(next_role)) {
      entitle_reason = "role '" + next_role + "' may not traverse '" + r.out_name +
                       "' in '" + subject + "'";
      continue;
    }
    entitled = true;
    break;
  }
  if (!entitled) {
    v.reason = entitle_reason;
    v.candidate = nullptr;
    return v;
  }

  for (const Constraint& c : decl.spec.constraints) {
    bool ok = false;
    try {
      ok = evaluate_constraint(walk.frame, c, subject, in_world, walk.now);
    } catch (const Error& e) {
      v.reason = std::string("constraint ") + c.describe() +
                 " failed to evaluate: " + e.what();
      v.candidate = nullptr;
      return v;
    }
    if (!ok) {
      v.reason = "constraint " + c.describe() + " no longer holds for '" +
                 subject + "' -> '" + in_world + "'";
      v.candidate = nullptr;
      return v;
    }
  }
  v.passed = true;
  return v;
}

SegmentVerdict check_segment(const Walk& walk, const TunnelSegment& seg,
                             const TunnelSegment& next, const SubjectMode& mode) {
  SegmentVerdict v;
  const World* w = walk.frame.find_world(seg.world);
  if (!w) {
    v.reason = "world '" + seg.world + "' does not exist";
    return v;
  }

  // Third-party mode: the reader's own standing substitutes for the tunnel
  // subject, but the declaring binding is still a recursion candidate.
  if (mode.reader) {
    const WorldId& reader_world = walk.frame.agent_world(*mode.reader);
    if (!has_role(walk.frame, reader_world, seg.world, seg.role, walk.now)) {
      v.reason = "reader '" + *mode.reader + "' does not hold role '" + seg.role +
                 "' in '" + seg.world + "'";
      return v;
    }
    SpecLookup<RelSpecIn> decl = find_incoming(walk.frame, *w, seg.role, walk.now);
    if (decl.state == LookupState::Found && !decl.binding->local())
      v.candidate = decl.binding;
    v.passed = true;
    return v;
  }

  const WorldId& subject = next.world;
  if (!walk.frame.find_world(subject)) {
    v.reason = "subject world '" + subject + "' does not exist";
    return v;
  }

  std::vector<RoleAssertion> held = roles_of(walk.frame, subject, seg.world, walk.now);
  const RoleAssertion* best = nullptr;
  for (const RoleAssertion& a : held) {
    if (a.role != seg.role) continue;
    if (!best || a.basis == RoleBasis::Owner ||
        (a.basis == RoleBasis::Relationship &&
         best->basis == RoleBasis::ContainmentInherited))
      best = &a;
  }
  if (!best) {
    v.reason = "'" + subject + "' does not hold role '" + seg.role + "' in '" +
               seg.world + "'";
    return v;
  }

  switch (best->basis) {
    case RoleBasis::Owner:
      v.passed = true;
      return v;
    case RoleBasis::Relationship:
      return check_direct(walk, subject, seg.world, seg.role, next.role);
    case RoleBasis::ContainmentInherited: {
      // Re-validate at the origin: the nearest containing world where the
      // subject holds the role directly. rolesOf already established that
      // the sharing chain between here and there is intact.
      std::vector<WorldId> chain = walk.frame.containment_chain(seg.world);
      for (std::size_t i = 1; i < chain.size(); ++i) {
        for (const RoleAssertion& a :
             roles_of(walk.frame, subject, chain[i], walk.now)) {
          if (a.role != seg.role) continue;
          if (a.basis == RoleBasis::Owner) {
            v.passed = true;
            return v;
          }
          if (a.basis == RoleBasis::Relationship)
            return check_direct(walk, subject, chain[i], seg.role, next.role);
        }
      }
      v.reason = "inherited role '" + seg.role + "' has no origin above '" +
                 seg.world + "'";
      return v;
    }
  }
  v.reason = "unreachable role basis";
  return v;
}

WalkResult walk_tunnel(Walk& walk, const RoleTunnel& tunnel, int level,
                       const SubjectMode& mode);

// One Bernoulli(1-rho) draw deciding whether to descend into a binding's
// capacity tunnel. Descents chain, so the marginal probability that a
// level-k check runs is (1-rho)^k. Returns the failure reason when a
// performed check fails, in which case the binding is tombstoned.
std::optional<std::string> maybe_recurse(Walk& walk, const TemplateBinding& binding,
                                         const WorldId& bound_world,
                                         int next_level) {
  std::string subject = capacity_subject(binding.template_id, bound_world);
  if (next_level > walk.depth_cap) {
    walk.report.checks.push_back({next_level, subject, false, std::nullopt});
    return std::nullopt;
  }
  if (walk.rng.next_unit() >= 1.0 - walk.rho) {
    walk.report.checks.push_back({next_level, subject, false, std::nullopt});
    return std::nullopt;
  }
  std::size_t slot = walk.report.checks.size();
  walk.report.checks.push_back({next_level, subject, true, std::nullopt});
  // Capacity tunnels are validated agent-unbound: they belong to whichever
  // agent imported the template, not to the caller.
  WalkResult inner = walk_tunnel(walk, *binding.capacity, next_level, SubjectMode{});
  walk.report.checks[slot].passed = inner.ok;
  if (inner.ok) return std::nullopt;
  binding.mark_expired();
  walk.any_failure = true;
  return "capacity tunnel of template '" + binding.template_id + "' in '" +
         bound_world + "' failed re-validation: " + inner.reason;
}

WalkResult walk_tunnel(Walk& walk, const RoleTunnel& tunnel, int level,
                       const SubjectMode& mode) {
  WalkResult result;
  const int n = static_cast<int>(tunnel.segments.size());
  // Owner end first.
  for (int i = n - 1; i >= 0; --i) {
    const TunnelSegment& seg = tunnel.segments[static_cast<std::size_t>(i)];
    SegmentVerdict verdict =
        i == n - 1
            ? check_terminal(walk, seg, mode)
            : check_segment(walk, seg,
                            tunnel.segments[static_cast<std::size_t>(i) + 1], mode);
    walk.report.checks.push_back(
        {level, segment_subject(seg), true, verdict.passed});
    if (!verdict.passed) {
      walk.any_failure = true;
      if (result.ok) result = {false, i, verdict.reason};
      continue;
    }
    if (verdict.candidate && !walk.any_failure) {
      if (auto capacity_failure =
              maybe_recurse(walk, *verdict.candidate, seg.world, level + 1)) {
        if (result.ok) result = {false, i, *capacity_failure};
      }
    }
  }
  return result;
}

}  // namespace

void AccessRisk::validate() const {
  if (!(rho >= 0.0 && rho <= 1.0))
    throw Error(Errc::InvalidIdentifier,
                "access risk must lie in [0, 1], got " + std::to_string(rho));
}

ValidationReport validate_tunnel(const Frame& frame, const RoleTunnel& tunnel,
                                 AccessRisk risk, std::uint64_t rng_seed,
                                 Timestamp now, const ValidateOptions& options) {
  risk.validate();
  tunnel.validate();
  if (options.reader) frame.agent_world(*options.reader);
  if (options.as_agent) frame.agent_world(*options.as_agent);

  ValidationReport report;
  report.tunnel = tunnel;
  report.valid = true;
  report.rng_seed = rng_seed;
  report.frame_version = frame.version;

  Walk walk{frame, risk.rho, now, CheckRng(rng_seed), report, options.depth_cap};
  SubjectMode mode{options.as_agent, options.reader};
  WalkResult result = walk_tunnel(walk, tunnel, 0, mode);
  report.valid = result.ok;
  if (!result.ok) report.failure = ValidationFailure{result.segment, result.reason};
  return report;
}

std::vector<RoleTunnel> discover_tunnels(const Frame& frame, const AgentId& agent,
                                         const WorldId& target, int max_depth) {
  const WorldId& home = frame.agent_world(agent);
  frame.world_at(target);

  std::vector<RoleTunnel> found;
  std::vector<TunnelSegment> path;
  std::set<WorldId> visited;

  auto emit = [&](std::vector<TunnelSegment> segments) {
    RoleTunnel t{std::move(segments)};
    if (static_cast<int>(t.segments.size()) > max_depth) return;
    if (std::find(found.begin(), found.end(), t) == found.end())
      found.push_back(std::move(t));
  };

  // Backward DFS: `current` is the world whose role-holders we look for.
  auto search = [&](auto&& self, const WorldId& current) -> void {
    if (current == home) {
      auto segments = path;
      segments.push_back({std::string(kOwnerRole), home});
      emit(std::move(segments));
      return;
    }
    if (static_cast<int>(path.size()) + 1 >= max_depth) {
      // No room left for anything but a terminal, which needs current == home.
    } else if (frame.world_at(current).owners.count(agent)) {
      // The agent owns this world outright: hop straight home.
      auto segments = path;
      segments.push_back({std::string(kOwnerRole), current});
      segments.push_back({std::string(kOwnerRole), home});
      emit(std::move(segments));
    }
    if (static_cast<int>(path.size()) + 1 >= max_depth) return;
    for (const RelationshipInstance& r : frame.relationships) {
      if (r.target != current || visited.count(r.source)) continue;
      if (!frame.find_world(r.source)) continue;
      visited.insert(r.source);
      path.push_back({r.role, current});
      self(self, r.source);
      path.pop_back();
      visited.erase(r.source);
    }
  };

  visited.insert(target);
  search(search, target);

  std::sort(found.begin(), found.end(),
            [](const RoleTunnel& a, const RoleTunnel& b) {
              return format_tunnel(a) < format_tunnel(b);
            });
  return found;
}

Grant effective_grant(const Frame& frame, const RoleTunnel& tunnel, Timestamp now) {
  tunnel.validate();
  const TunnelSegment& first = tunnel.segments.front();
  const World& w = frame.world_at(first.world);

  Grant grant;
  if (first.role == kOwnerRole) {
    grant.privileges = all_privileges();
    grant.purposes.insert(frame.purposes.begin(), frame.purposes.end());
    return grant;
  }
  SpecLookup<RelSpecIn> decl = find_incoming(frame, w, first.role, now);
  if (decl.state == LookupState::Absent)
    throw Error(Errc::UnknownRole, "role '" + first.role +
                                       "' is not declared by any template implemented in '" +
                                       first.world + "'");
  if (decl.state == LookupState::Declared)
    throw Error(Errc::ExpiredTemplate,
                "template '" + decl.declaring_template + "' declaring role '" +
                    first.role + "' in '" + first.world + "' has expired");
  grant.privileges = decl.spec.privileges;
  grant.purposes = decl.spec.purposes;
  return grant;
}

}  // namespace multiverse
