// Copyright 2026 the Multiverse authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "multiverse/frame.hpp"

#include <algorithm>

namespace multiverse {

const World* Frame::find_world(const WorldId& id) const {
  auto it = worlds.find(id);
  return it == worlds.end() ? nullptr : &it->second;
}

World* Frame::find_world(const WorldId& id) {
  auto it = worlds.find(id);
  return it == worlds.end() ? nullptr : &it->second;
}

const World& Frame::world_at(const WorldId& id) const {
  if (const World* w = find_world(id)) return *w;
  throw Error(Errc::UnknownWorld, "world '" + id + "' does not exist");
}

World& Frame::world_at(const WorldId& id) {
  if (World* w = find_world(id)) return *w;
  throw Error(Errc::UnknownWorld, "world '" + id + "' does not exist");
}

const Template* Frame::find_template(const TemplateId& id) const {
  auto it = templates.find(id);
  return it == templates.end() ? nullptr : &it->second;
}

const Template& Frame::template_at(const TemplateId& id) const {
  if (const Template* t = find_template(id)) return *t;
  throw Error(Errc::UnknownTemplate, "template '" + id + "' does not exist");
}

const WorldId& Frame::agent_world(const AgentId& agent) const {
  auto it = agents.find(agent);
  if (it == agents.end())
    throw Error(Errc::UnknownAgent, "agent '" + agent + "' is not registered");
  return it->second;
}

std::optional<AgentId> Frame::agent_of_world(const WorldId& world) const {
  for (const auto& [agent, home] : agents) {
    if (home == world) return agent;
  }
  return std::nullopt;
}

bool Frame::purpose_registered(const std::string& purpose) const {
  return std::find(purposes.begin(), purposes.end(), purpose) != purposes.end();
}

const RelationshipInstance* Frame::find_relationship(
    const WorldId& source, const WorldId& target, const std::string& out_name,
    const std::string& role) const {
  for (const RelationshipInstance& r : relationships) {
    if (r.source == source && r.target == target && r.out_name == out_name &&
        r.role == role)
      return &r;
  }
  return nullptr;
}

const StoredResource* Frame::find_resource(const WorldId& world,
                                           const std::string& resource_id) const {
  auto wit = resources.find(world);
  if (wit == resources.end()) return nullptr;
  auto rit = wit->second.find(resource_id);
  return rit == wit->second.end() ? nullptr : &rit->second;
}

std::vector<WorldId> Frame::containment_chain(const WorldId& id) const {
  std::vector<WorldId> chain;
  const World* w = &world_at(id);
  chain.push_back(w->id);
  while (w->location) {
    const World* up = find_world(*w->location);
    if (!up)
      throw Error(Errc::UnknownWorld,
                  "world '" + w->id + "' is located in missing world '" +
                      *w->location + "'");
    for (const WorldId& seen : chain) {
      if (seen == up->id)
        throw Error(Errc::CycleDetected,
                    "containment cycle through '" + up->id + "'");
    }
    chain.push_back(up->id);
    w = up;
  }
  return chain;
}

bool Frame::contains(const WorldId& outer, const WorldId& inner) const {
  for (const WorldId& w : containment_chain(inner)) {
    if (w == outer) return true;
  }
  return false;
}

}  // namespace multiverse
