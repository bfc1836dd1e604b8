// Copyright 2026 the Multiverse authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "multiverse/model.hpp"

namespace multiverse {

// The complete state of one deployment: worlds, templates, relationship
// instances, stored resources, the agent directory and the purpose registry.
// A Frame is a plain value; FrameStore (frame_store.hpp) handles concurrency
// by publishing immutable snapshots of it.
struct Frame {
  std::uint64_t version = 0;
  std::map<WorldId, World> worlds;
  std::map<TemplateId, Template> templates;
  // Insertion order preserved; the (source, target, out_name, role) tuple is
  // unique among live instances.
  std::vector<RelationshipInstance> relationships;
  std::map<WorldId, std::map<std::string, StoredResource>> resources;
  // agent -> its own world. That world always exists and lists the agent
  // among its owners.
  std::map<AgentId, WorldId> agents;
  // Registered purpose codes, append-only.
  std::vector<std::string> purposes;

  const World* find_world(const WorldId& id) const;
  World* find_world(const WorldId& id);
  // Throws Error(UnknownWorld).
  const World& world_at(const WorldId& id) const;
  World& world_at(const WorldId& id);

  const Template* find_template(const TemplateId& id) const;
  const Template& template_at(const TemplateId& id) const;  // UnknownTemplate

  // Throws Error(UnknownAgent).
  const WorldId& agent_world(const AgentId& agent) const;
  // Reverse lookup: the agent whose own world this is, if any.
  std::optional<AgentId> agent_of_world(const WorldId& world) const;

  bool purpose_registered(const std::string& purpose) const;

  const RelationshipInstance* find_relationship(const WorldId& source,
                                                const WorldId& target,
                                                const std::string& out_name,
                                                const std::string& role) const;

  const StoredResource* find_resource(const WorldId& world,
                                      const std::string& resource_id) const;

  // The world followed by its transitive containers, innermost first:
  //   chain(w) = [w, location(w), location(location(w)), ...]
  // Throws UnknownWorld for an unknown id or a dangling location link.
  // Containment is acyclic by construction; a corrupted cycle throws
  // CycleDetected rather than looping.
  std::vector<WorldId> containment_chain(const WorldId& id) const;

  // True when `outer` contains `inner` (strictly or inner == outer).
  bool contains(const WorldId& outer, const WorldId& inner) const;
};

using FrameSnapshot = std::shared_ptr<const Frame>;

}  // namespace multiverse
