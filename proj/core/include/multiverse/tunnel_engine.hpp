// Copyright 2026 the Multiverse authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "multiverse/frame.hpp"
#include "multiverse/model.hpp"

namespace multiverse {

// Fraction of integrity re-checks a caller is willing to forgo, in [0, 1].
// 0 re-checks everything reachable; 1 trusts every cached binding outright.
struct AccessRisk {
  double rho = 0.0;

  // Throws Error(InvalidIdentifier) outside [0, 1].
  void validate() const;
};

// One verification performed (or deliberately skipped) during validation.
// Level 0 entries cover the tunnel's own segments; level k >= 1 entries cover
// capacity tunnels of template bindings the walk depends on, k links removed
// from the original access. Skipped checks (performed == false) carry no
// verdict and never fail a validation.
struct CheckRecord {
  int level = 0;
  // "role(world)" for segment checks, "capacity(template@world)" for
  // binding re-validations.
  std::string subject;
  bool performed = true;
  std::optional<bool> passed;
};

struct ValidationFailure {
  // Index into the tunnel's segments (0 = data end).
  int segment = 0;
  std::string reason;
};

struct ValidationReport {
  RoleTunnel tunnel;
  bool valid = false;
  std::vector<CheckRecord> checks;
  std::optional<ValidationFailure> failure;  // first failure only
  std::uint64_t rng_seed = 0;
  std::uint64_t frame_version = 0;
};

struct ValidateOptions {
  // When set, the terminal segment must be this agent's own world.
  std::optional<AgentId> as_agent;
  // Third-party mode: every role assertion is re-checked for this agent's
  // world instead of the tunnel's own subjects (substituted checks).
  std::optional<AgentId> reader;
  // Capacity recursion stops here; deeper candidates are recorded as not
  // performed.
  int depth_cap = 8;
};

// Walks the tunnel from the owner end toward the data end, verifying each
// segment's role assertion against the frame at `now`:
//   - the terminal segment must be Owner of an agent world (the calling
//     agent's world when as_agent is set);
//   - every other segment (role, w) requires the next segment's world to
//     hold `role` in w: via ownership, via a live relationship instance
//     whose declaring rel_i constraints still evaluate true and whose source
//     out-spec entitles the next role to traverse, or via containment
//     inheritance (re-validated at the origin world);
//   - missing worlds fail the segment.
// Each passing segment whose role is declared by a remotely-bound template
// becomes a level-(k+1) candidate: with probability 1-rho (one deterministic
// draw per descent, so the marginal probability of reaching level k is
// (1-rho)^k) the binding's capacity tunnel is re-validated recursively. A
// performed capacity check that fails invalidates the access and marks the
// binding expired; a skipped one is recorded and trusted.
//
// Failures land in the report; the function only throws on a structurally
// invalid tunnel or rho outside [0, 1]. It never mutates the frame (the
// sticky expiry bit lives outside snapshot state).
ValidationReport validate_tunnel(const Frame& frame, const RoleTunnel& tunnel,
                                 AccessRisk risk, std::uint64_t rng_seed,
                                 Timestamp now,
                                 const ValidateOptions& options = {});

// Enumerates candidate tunnels from `target` down to the agent's own world
// by walking relationship instances backward from the target, with an
// ownership hop where the agent directly owns an intermediate world. Paths
// are simple (no world revisited), at most max_depth segments long, and come
// back sorted by their formatted string. Candidates are not validated.
std::vector<RoleTunnel> discover_tunnels(const Frame& frame, const AgentId& agent,
                                         const WorldId& target, int max_depth);

struct Grant {
  std::set<Privilege> privileges;
  std::set<std::string> purposes;
};

// What the tunnel's first segment is entitled to inside the data-holding
// world: Owner gets every privilege and every registered purpose; any other
// role gets the privileges and purposes of its declaring rel_i spec. Throws
// UnknownWorld / UnknownRole / Error(ExpiredTemplate).
Grant effective_grant(const Frame& frame, const RoleTunnel& tunnel, Timestamp now);

}  // namespace multiverse
