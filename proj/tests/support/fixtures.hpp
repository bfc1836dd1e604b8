// Copyright 2026 the Multiverse authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <string>

#include "multiverse/frame.hpp"
#include "multiverse/model.hpp"
#include "multiverse/tunnel_codec.hpp"

namespace multiverse::fixtures {

inline constexpr Timestamp kNow = 1700000000;

// The deep-delegation fixture. Validating kChainTunnel at full rigor yields
// exactly one level-1 capacity candidate (Club's remote binding of R1/TA,
// justified by kCt1) and exactly one level-2 candidate (R1's remote binding
// of R2/TB, justified by kCt2). R2 binds locally, so recursion bottoms out.
//
//   Member(Club):Owner(U)
//     Club binds R1/TA   via  Cert1(R1):Owner(ClubAdmin)      <- level 1
//       R1 binds R2/TB   via  Cert2(R2):Owner(R1Admin)        <- level 2
//         R2 binds R2/TC locally                               (no level 3)
inline constexpr const char* kChainTunnel = "Member(Club):Owner(U)";
inline constexpr const char* kCt1 = "Cert1(R1):Owner(ClubAdmin)";
inline constexpr const char* kCt2 = "Cert2(R2):Owner(R1Admin)";

inline Frame capacity_chain_frame() {
  Frame f;

  auto add_world = [&](const std::string& id) -> World& {
    World w;
    w.id = id;
    w.name = id;
    w.created_at = kNow - 5000;
    return f.worlds[id] = w;
  };
  auto add_agent = [&](const std::string& id) {
    World& w = add_world(id);
    w.owners.insert(id);
    f.agents[id] = id;
  };

  add_agent("U");
  add_agent("ClubAdmin");
  add_agent("R1Admin");
  add_agent("R2Admin");
  add_world("Club").owners.insert("ClubAdmin");
  add_world("R1").owners.insert("R1Admin");
  add_world("R2").owners.insert("R2Admin");

  auto out_only = [&](const std::string& world, const std::string& tname,
                      const std::string& out_name, const std::string& grants) {
    Template t;
    t.name = tname;
    t.defined_in = world;
    t.id = world + "/" + tname;
    t.outgoing.push_back({out_name, grants, {}, {std::string(kOwnerRole)}});
    f.templates[t.id] = t;
    TemplateBinding b;
    b.template_id = t.id;
    b.bound_at = kNow - 4000;
    f.worlds[world].bindings.push_back(b);
  };
  out_only("U", "Person", "Join", "Member");
  out_only("ClubAdmin", "Seal", "Certify", "Cert1");
  out_only("R1Admin", "Seal", "Certify2", "Cert2");

  Template ta;
  ta.name = "TA";
  ta.defined_in = "R1";
  ta.id = "R1/TA";
  ta.access_points.push_back({"read", "Member", {"Research"}, 86400});
  ta.incoming.push_back({"Member", {}, {Privilege::ResourceRead}, {"Research"}});
  f.templates[ta.id] = ta;

  Template tb;
  tb.name = "TB";
  tb.defined_in = "R2";
  tb.id = "R2/TB";
  tb.incoming.push_back({"Cert1", {}, {Privilege::ResourceTemplate}, {}});
  f.templates[tb.id] = tb;

  Template tc;
  tc.name = "TC";
  tc.defined_in = "R2";
  tc.id = "R2/TC";
  tc.incoming.push_back({"Cert2", {}, {Privilege::ResourceTemplate}, {}});
  f.templates[tc.id] = tc;

  auto bind_remote = [&](const std::string& world, const std::string& tid,
                         const char* capacity) {
    TemplateBinding b;
    b.template_id = tid;
    b.bound_at = kNow - 3000;
    b.capacity = parse_tunnel(capacity);
    b.expires_at = kNow + 1000000;
    f.worlds[world].bindings.push_back(b);
  };
  bind_remote("Club", "R1/TA", kCt1);
  bind_remote("R1", "R2/TB", kCt2);

  TemplateBinding local_tc;
  local_tc.template_id = "R2/TC";
  local_tc.bound_at = kNow - 3000;
  f.worlds["R2"].bindings.push_back(local_tc);

  f.relationships.push_back({"U", "Club", "Join", "Member", "U", kNow - 2000});
  f.relationships.push_back(
      {"ClubAdmin", "R1", "Certify", "Cert1", "ClubAdmin", kNow - 2000});
  f.relationships.push_back(
      {"R1Admin", "R2", "Certify2", "Cert2", "R1Admin", kNow - 2000});

  StoredResource d;
  d.resource_id = "d";
  d.data = {'p', 'a', 'y'};
  f.resources["Club"]["d"] = d;

  f.purposes.push_back("Research");
  f.version = 1;
  return f;
}

}  // namespace multiverse::fixtures
