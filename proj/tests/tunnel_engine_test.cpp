// Copyright 2026 the Multiverse authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "multiverse/tunnel_engine.hpp"

#include <algorithm>

#include "doctest.h"
#include "multiverse/tunnel_codec.hpp"
#include "support/fixtures.hpp"

using namespace multiverse;
using fixtures::kNow;

namespace {

int count_checks(const ValidationReport& r, int level, bool performed) {
  int n = 0;
  for (const CheckRecord& c : r.checks) {
    if (c.level == level && c.performed == performed) ++n;
  }
  return n;
}

bool has_capacity_check(const ValidationReport& r, int level, bool performed) {
  for (const CheckRecord& c : r.checks) {
    if (c.level == level && c.performed == performed &&
        c.subject.rfind("capacity(", 0) == 0)
      return true;
  }
  return false;
}

}  // namespace

TEST_CASE("full rigor walks the whole capacity chain") {
  Frame f = fixtures::capacity_chain_frame();
  RoleTunnel t = parse_tunnel(fixtures::kChainTunnel);
  ValidationReport r = validate_tunnel(f, t, {0.0}, 1, kNow);

  CHECK(r.valid);
  CHECK_FALSE(r.failure.has_value());
  CHECK(r.frame_version == 1);
  // Two level-0 segment checks, then one capacity candidate per level.
  CHECK(count_checks(r, 0, true) == 2);
  CHECK(has_capacity_check(r, 1, true));
  CHECK(has_capacity_check(r, 2, true));
  for (const CheckRecord& c : r.checks) {
    CHECK(c.performed);
    REQUIRE(c.passed.has_value());
    CHECK(*c.passed);
  }
}

TEST_CASE("full trust skips every capacity descent") {
  Frame f = fixtures::capacity_chain_frame();
  RoleTunnel t = parse_tunnel(fixtures::kChainTunnel);
  ValidationReport r = validate_tunnel(f, t, {1.0}, 1, kNow);

  CHECK(r.valid);
  CHECK(count_checks(r, 0, true) == 2);
  CHECK(has_capacity_check(r, 1, false));  // recorded, not performed
  CHECK(count_checks(r, 2, true) == 0);    // never reached
  CHECK(count_checks(r, 2, false) == 0);
}

TEST_CASE("same seed, same report") {
  Frame f = fixtures::capacity_chain_frame();
  RoleTunnel t = parse_tunnel(fixtures::kChainTunnel);
  for (std::uint64_t seed : {7ull, 8ull, 9ull}) {
    ValidationReport a = validate_tunnel(f, t, {0.5}, seed, kNow);
    ValidationReport b = validate_tunnel(f, t, {0.5}, seed, kNow);
    REQUIRE(a.checks.size() == b.checks.size());
    for (std::size_t i = 0; i < a.checks.size(); ++i) {
      CHECK(a.checks[i].subject == b.checks[i].subject);
      CHECK(a.checks[i].performed == b.checks[i].performed);
    }
    CHECK(a.valid == b.valid);
  }
}

TEST_CASE("depth cap records deeper candidates as skipped") {
  Frame f = fixtures::capacity_chain_frame();
  RoleTunnel t = parse_tunnel(fixtures::kChainTunnel);
  ValidateOptions opts;
  opts.depth_cap = 1;
  ValidationReport r = validate_tunnel(f, t, {0.0}, 1, kNow, opts);
  CHECK(r.valid);
  CHECK(has_capacity_check(r, 1, true));
  CHECK(has_capacity_check(r, 2, false));
}

TEST_CASE("a broken deep link is invisible at full trust until rigor finds it") {
  Frame f = fixtures::capacity_chain_frame();
  // Remove the edge supporting ct2 (level 2).
  f.relationships.erase(
      std::remove_if(f.relationships.begin(), f.relationships.end(),
                     [](const RelationshipInstance& r) {
                       return r.out_name == "Certify2";
                     }),
      f.relationships.end());
  RoleTunnel t = parse_tunnel(fixtures::kChainTunnel);

  // Full trust: the stale chain is served.
  CHECK(validate_tunnel(f, t, {1.0}, 1, kNow).valid);

  // Full rigor: the level-2 walk fails, the failure is attributed to the
  // outer segment, and both remote bindings are tombstoned on the way out.
  ValidationReport r = validate_tunnel(f, t, {0.0}, 1, kNow);
  CHECK_FALSE(r.valid);
  REQUIRE(r.failure.has_value());
  CHECK(r.failure->segment == 0);
  bool level2_failed = false;
  for (const CheckRecord& c : r.checks) {
    if (c.level == 2 && c.performed && c.passed && !*c.passed) level2_failed = true;
  }
  CHECK(level2_failed);

  // The tombstones are sticky: now even full trust refuses, because the
  // level-0 role declaration itself rests on an expired binding.
  ValidationReport after = validate_tunnel(f, t, {1.0}, 1, kNow);
  CHECK_FALSE(after.valid);
  REQUIRE(after.failure.has_value());
  CHECK(after.failure->reason.find("expired") != std::string::npos);
}

TEST_CASE("terminal binding modes") {
  Frame f = fixtures::capacity_chain_frame();
  RoleTunnel t = parse_tunnel(fixtures::kChainTunnel);

  ValidateOptions as_u;
  as_u.as_agent = "U";
  CHECK(validate_tunnel(f, t, {0.0}, 1, kNow, as_u).valid);

  ValidateOptions as_other;
  as_other.as_agent = "ClubAdmin";
  ValidationReport r = validate_tunnel(f, t, {0.0}, 1, kNow, as_other);
  CHECK_FALSE(r.valid);
  REQUIRE(r.failure.has_value());
  CHECK(r.failure->segment == 1);  // the terminal

  // Unbound mode only needs an agent world at the terminal.
  RoleTunnel not_agent = parse_tunnel("Member(Club):Owner(Club)");
  CHECK_FALSE(validate_tunnel(f, not_agent, {0.0}, 1, kNow).valid);
}

TEST_CASE("reader mode substitutes the reader's own standing") {
  Frame f = fixtures::capacity_chain_frame();
  RoleTunnel t = parse_tunnel(fixtures::kChainTunnel);

  // The owner of the terminal world who also holds the roles passes.
  ValidateOptions self;
  self.reader = "U";
  CHECK(validate_tunnel(f, t, {0.0}, 1, kNow, self).valid);

  // A co-owner of the terminal world without the Member role fails on the
  // substituted role check.
  World friend_world;
  friend_world.id = "Friend";
  friend_world.name = "Friend";
  friend_world.owners.insert("Friend");
  f.worlds["Friend"] = friend_world;
  f.agents["Friend"] = "Friend";
  f.worlds["U"].owners.insert("Friend");

  ValidateOptions other;
  other.reader = "Friend";
  ValidationReport r = validate_tunnel(f, t, {0.0}, 1, kNow, other);
  CHECK_FALSE(r.valid);
  REQUIRE(r.failure.has_value());
  CHECK(r.failure->reason.find("Friend") != std::string::npos);

  // A non-owner of the terminal world fails at the terminal.
  ValidateOptions stranger;
  stranger.reader = "R2Admin";
  ValidationReport s = validate_tunnel(f, t, {0.0}, 1, kNow, stranger);
  CHECK_FALSE(s.valid);
  REQUIRE(s.failure.has_value());
  CHECK(s.failure->segment == 1);
}

TEST_CASE("risk outside the unit interval is refused") {
  Frame f = fixtures::capacity_chain_frame();
  RoleTunnel t = parse_tunnel(fixtures::kChainTunnel);
  CHECK_THROWS_AS(validate_tunnel(f, t, {-0.1}, 1, kNow), Error);
  CHECK_THROWS_AS(validate_tunnel(f, t, {1.1}, 1, kNow), Error);
}

TEST_CASE("discovery finds relationship paths and ownership hops") {
  Frame f = fixtures::capacity_chain_frame();

  auto tunnels = discover_tunnels(f, "U", "Club", 6);
  bool found = false;
  for (const RoleTunnel& t : tunnels)
    if (format_tunnel(t) == fixtures::kChainTunnel) found = true;
  CHECK(found);

  auto admin = discover_tunnels(f, "ClubAdmin", "Club", 6);
  bool shortcut = false;
  for (const RoleTunnel& t : admin)
    if (format_tunnel(t) == "Owner(Club):Owner(ClubAdmin)") shortcut = true;
  CHECK(shortcut);

  // Results are sorted and within the depth bound.
  std::vector<std::string> formatted;
  for (const RoleTunnel& t : tunnels) {
    formatted.push_back(format_tunnel(t));
    CHECK(t.segments.size() <= 6);
  }
  CHECK(std::is_sorted(formatted.begin(), formatted.end()));

  CHECK(discover_tunnels(f, "U", "R2", 6).empty());
}

TEST_CASE("effective grant ties the entry role to its declaration") {
  Frame f = fixtures::capacity_chain_frame();

  Grant member = effective_grant(f, parse_tunnel(fixtures::kChainTunnel), kNow);
  CHECK(member.privileges == std::set<Privilege>{Privilege::ResourceRead});
  CHECK(member.purposes == std::set<std::string>{"Research"});

  Grant owner = effective_grant(f, parse_tunnel("Owner(Club):Owner(ClubAdmin)"), kNow);
  CHECK(owner.privileges.size() == 7);
  CHECK(owner.purposes.count("Research"));

  try {
    effective_grant(f, parse_tunnel("Stranger(Club):Owner(U)"), kNow);
    FAIL("expected UnknownRole");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::UnknownRole);
  }

  for (TemplateBinding& b : f.worlds["Club"].bindings) b.mark_expired();
  try {
    effective_grant(f, parse_tunnel(fixtures::kChainTunnel), kNow);
    FAIL("expected ExpiredTemplate");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ExpiredTemplate);
  }
}
