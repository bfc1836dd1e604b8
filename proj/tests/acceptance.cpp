// Copyright 2026 the Multiverse authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

// Acceptance gate: ten externally observable behaviors the release must
// show, one PASS/FAIL line each. Every tolerance and budget is pinned here;
// the binary exits nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "multiverse/engine.hpp"
#include "multiverse/relationship.hpp"
#include "multiverse/scenarios.hpp"
#include "multiverse/templates.hpp"
#include "multiverse/tunnel_codec.hpp"
#include "multiverse/tunnel_engine.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

namespace {

using namespace multiverse;
using fixtures::kNow;

// Pinned parameters. The frequency tolerance covers four standard errors at
// the pinned trial count, so a correct sampler stays inside it.
constexpr int kStatTrials = 10000;
constexpr double kStatTolerance = 0.02;
constexpr double kScriptBudgetSec = 1.0;
constexpr double kStatBudgetSec = 30.0;
constexpr double kEquivBudgetSec = 60.0;
constexpr int kEquivFrames = 200;
constexpr int kEquivConstraints = 8;
constexpr std::size_t kEquivMinPairs = 500;
constexpr int kRoundTrips = 1000;

const char* kReferralTunnel = "Advisor(Sharada):Doctor(Fortis):Owner(Ram)";
const char* kAnalystTunnel =
    "Researcher(EnergyCompany):Senior Analyst(EnergyAnalytics):Owner(Ajay)";

void expect(bool cond, const std::string& what) {
  if (!cond) throw std::runtime_error(what);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

Errc denial_of(const std::function<void()>& fn, const std::string& what) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  throw std::runtime_error("expected a denial: " + what);
}

AccessRequest chain_read() {
  AccessRequest req;
  req.agent = "U";
  req.tunnel = parse_tunnel(fixtures::kChainTunnel);
  req.resource_id = "d";
  req.purpose = "Research";
  return req;
}

// 1. The three-hop referral chain admits the patient, and a full-rigor
// validation shows exactly one performed, passing check per segment.
void criterion1() {
  auto t0 = std::chrono::steady_clock::now();
  Engine e;
  ScenarioResult r = run_scenario(e, builtin_scenario("referral"), {});
  expect(r.passed, "referral walkthrough failed");

  ValidationReport rep = validate_tunnel(
      *e.snapshot(), parse_tunnel(kReferralTunnel), {0.0}, 1, r.end_time);
  expect(rep.valid, "referral chain did not validate");
  expect(rep.checks.size() == 3,
         "expected 3 checks, got " + std::to_string(rep.checks.size()));
  for (const CheckRecord& c : rep.checks) {
    expect(c.level == 0, "unexpected capacity descent: " + c.subject);
    expect(c.performed && c.passed == true,
           "check not performed and passing: " + c.subject);
  }
  expect(seconds_since(t0) < kScriptBudgetSec, "over the time budget");
}

// 2. Purpose binding: the analyst chain serves research and nothing else,
// and the grant carried by the chain names exactly that purpose.
void criterion2() {
  Engine e;
  ScenarioResult r = run_scenario(e, builtin_scenario("datatrust"), {});
  expect(r.passed, "datatrust walkthrough failed");
  expect(r.steps.size() == 3, "unexpected step count");
  expect(r.steps[1].outcome == "ok" && r.steps[1].matched,
         "research access did not succeed");
  expect(r.steps[2].expected == "PurposeNotPermitted" && r.steps[2].matched,
         "marketing access was not refused as PurposeNotPermitted");

  Grant g = effective_grant(*e.snapshot(), parse_tunnel(kAnalystTunnel),
                            r.end_time);
  expect(g.purposes == std::set<std::string>{"Research"},
         "grant purposes must be exactly {Research}");
  expect(g.privileges == std::set<Privilege>{Privilege::ResourceRead},
         "grant privileges must be exactly {resource.read}");
}

// 3. Third-party reads ride the reader's own standing: a co-owner is
// refused until they satisfy every capacity segment themselves.
void criterion3() {
  Engine e;
  ScenarioResult r = run_scenario(e, builtin_scenario("scenario3"), {});
  expect(r.passed, "co-owner walkthrough failed");
  expect(r.steps.size() == 5, "unexpected step count");
  expect(r.steps[2].expected == "CapacityUnsatisfied" && r.steps[2].matched,
         "unqualified co-owner was not refused as CapacityUnsatisfied");
  expect(r.steps[4].outcome == "ok" && r.steps[4].matched,
         "qualified co-owner read did not succeed");
}

// 4. Risk-governed checking: across many seeds the level-k capacity check
// runs with frequency (1-rho)^k, exactly always at rho=0 and exactly never
// at rho=1, and a skipped descent leaves no deeper records.
void criterion4() {
  auto t0 = std::chrono::steady_clock::now();
  Frame f = fixtures::capacity_chain_frame();
  RoleTunnel chain = parse_tunnel(fixtures::kChainTunnel);

  for (double rho : {0.0, 0.25, 0.5, 1.0}) {
    int l1 = 0, l2 = 0;
    for (int seed = 0; seed < kStatTrials; ++seed) {
      ValidationReport rep = validate_tunnel(
          f, chain, {rho}, static_cast<std::uint64_t>(seed), kNow);
      expect(rep.valid, "the intact chain must stay valid");

      bool l1_performed = false, l2_present = false, l2_performed = false;
      for (const CheckRecord& c : rep.checks) {
        if (c.subject.rfind("capacity(", 0) != 0) continue;
        if (c.level == 1 && c.performed) l1_performed = true;
        if (c.level == 2) {
          l2_present = true;
          if (c.performed) l2_performed = true;
        }
      }
      expect(!l2_present || l1_performed,
             "a skipped descent must leave no deeper records");
      l1 += l1_performed ? 1 : 0;
      l2 += l2_performed ? 1 : 0;
    }

    double f1 = static_cast<double>(l1) / kStatTrials;
    double f2 = static_cast<double>(l2) / kStatTrials;
    double e1 = 1.0 - rho;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "rho=%.2f: level-1 freq %.4f vs %.4f, level-2 freq %.4f vs "
                  "%.4f (tolerance %.3f)",
                  rho, f1, e1, f2, e1 * e1, kStatTolerance);
    expect(std::fabs(f1 - e1) <= kStatTolerance, buf);
    expect(std::fabs(f2 - e1 * e1) <= kStatTolerance, buf);
    if (rho == 0.0) expect(l1 == kStatTrials && l2 == kStatTrials, buf);
    if (rho == 1.0) expect(l1 == 0 && l2 == 0, buf);
  }
  expect(seconds_since(t0) < kStatBudgetSec, "over the time budget");
}

// 5. Lifetimes: a lapsed remote template stops answering (and the grant it
// backed dies), a discovered failure tombstones the binding across every
// snapshot sharing it, and a cached copy past its TTL is evicted on read.
void criterion5() {
  Frame f = fixtures::capacity_chain_frame();
  RoleTunnel chain = parse_tunnel(fixtures::kChainTunnel);
  Timestamp later = kNow + 2000000;  // past every remote binding's expiry

  auto look = find_incoming(f, f.worlds.at("Club"), "Member", later);
  expect(look.state == LookupState::Declared,
         "a lapsed binding should leave the role declared, not served");
  expect(denial_of([&] { effective_grant(f, chain, later); },
                   "grant from a lapsed binding") == Errc::ExpiredTemplate,
         "grant after lapse must fail as ExpiredTemplate");
  expect(!validate_tunnel(f, chain, {0.0}, 1, later).valid,
         "the chain must not validate past the binding's lifetime");

  Engine e(fixtures::capacity_chain_frame());
  FrameSnapshot old_snapshot = e.snapshot();
  e.revoke_relationship("R1Admin", "R1Admin", "R2", "Certify2", std::nullopt,
                        kNow + 5);
  expect(e.validate_access(chain, "U", {1.0}, 1, kNow + 6).valid,
         "full trust rides the stale window");
  expect(!e.validate_access(chain, "U", {0.0}, 2, kNow + 7).valid,
         "full rigor must discover the broken certification");
  expect(old_snapshot->worlds.at("Club").bindings[0].marked_expired(),
         "the tombstone must reach snapshots taken before the discovery");
  expect(!e.validate_access(chain, "U", {1.0}, 3, kNow + 8).valid,
         "full trust cannot resurrect a tombstoned binding");

  Engine e2(fixtures::capacity_chain_frame());
  e2.access_remote(chain_read(), kNow);
  expect(denial_of([&] { e2.read_cached("U", "d", {0.0}, 1, kNow + 86400); },
                   "read past the copy's ttl") == Errc::TTLExpired,
         "a lapsed copy must be refused as TTLExpired");
  expect(e2.snapshot()->find_resource("U", "d") == nullptr,
         "a lapsed copy must be evicted");
}

// 6. Revocation: dropping the supporting relationship kills the cached copy
// at full rigor and refuses fresh access outright.
void criterion6() {
  Engine e(fixtures::capacity_chain_frame());
  expect(e.access_remote(chain_read(), kNow).data.size() == 3,
         "initial access must succeed");
  e.revoke_relationship("U", "U", "Club", "Join", std::nullopt, kNow + 5);
  expect(denial_of([&] { e.read_cached("U", "d", {0.0}, 1, kNow + 10); },
                   "cached read after revocation") == Errc::CapacityRevoked,
         "cached read after revocation must fail as CapacityRevoked");
  expect(e.snapshot()->find_resource("U", "d") == nullptr,
         "the revoked copy must be evicted");
  expect(denial_of([&] { e.access_remote(chain_read(), kNow + 20); },
                   "fresh access after revocation") == Errc::TunnelInvalid,
         "fresh access after revocation must fail as TunnelInvalid");
}

// 7. Role and constraint evaluation agree with an independent brute-force
// evaluator over randomized frames, including thrown error codes.
void criterion7() {
  auto t0 = std::chrono::steady_clock::now();
  std::size_t role_pairs = 0;

  for (int seed = 1; seed <= kEquivFrames; ++seed) {
    testgen::GeneratedFrame g = testgen::random_frame(seed);

    for (const WorldId& subject : g.world_ids) {
      for (const WorldId& in_world : g.world_ids) {
        std::set<std::string> got;
        for (const RoleAssertion& a : roles_of(g.frame, subject, in_world, kNow))
          got.insert(a.role);
        expect(got == oracle::roles(g.frame, subject, in_world, kNow),
               "role divergence: seed " + std::to_string(seed) + ", " +
                   subject + " in " + in_world);
        ++role_pairs;
      }
    }

    testgen::Rand r(static_cast<std::uint64_t>(seed) * 7919 + 1);
    for (int i = 0; i < kEquivConstraints; ++i) {
      Constraint c = testgen::random_constraint(r, g.template_ids, g.world_ids);
      const WorldId& src = r.pick(g.world_ids);
      const WorldId& dst = r.pick(g.world_ids);

      auto outcome = [&](bool production) -> std::pair<int, bool> {
        try {
          bool v = production
                       ? evaluate_constraint(g.frame, c, src, dst, kNow)
                       : oracle::constraint(g.frame, c, src, dst, kNow);
          return {-1, v};
        } catch (const Error& err) {
          return {static_cast<int>(err.code()), false};
        }
      };
      expect(outcome(true) == outcome(false),
             "constraint divergence: seed " + std::to_string(seed) + ", " +
                 c.describe() + " on (" + src + ", " + dst + ")");
    }
  }

  expect(role_pairs >= kEquivMinPairs,
         "generator produced too few role pairs");
  expect(seconds_since(t0) < kEquivBudgetSec, "over the time budget");
}

// 8. Containment: roles flow from a group into its branches only where the
// branch actively shares a template with the group.
void criterion8() {
  Frame f;
  auto add_world = [&](const std::string& id,
                       std::optional<std::string> loc) -> World& {
    World w;
    w.id = id;
    w.name = id;
    w.location = std::move(loc);
    w.created_at = kNow - 100;
    return f.worlds[id] = w;
  };
  add_world("HAdmin", std::nullopt).owners.insert("HAdmin");
  add_world("Ram", std::nullopt).owners.insert("Ram");
  f.agents["HAdmin"] = "HAdmin";
  f.agents["Ram"] = "Ram";
  add_world("H", std::nullopt).owners.insert("HAdmin");
  add_world("B1", "H");
  add_world("B2", "H");
  add_world("B3", "H");

  Template standard;
  standard.name = "Standard";
  standard.defined_in = "H";
  standard.id = "H/Standard";
  standard.incoming.push_back(
      {"Doctor", {}, {Privilege::ResourceRead}, {"Diagnostics"}});
  f.templates[standard.id] = standard;

  Template other;
  other.name = "Other";
  other.defined_in = "B3";
  other.id = "B3/Other";
  other.incoming.push_back({"Visitor", {}, {}, {}});
  f.templates[other.id] = other;

  auto bind = [&](const std::string& world, const std::string& tid) {
    TemplateBinding b;
    b.template_id = tid;
    b.bound_at = kNow - 50;
    f.worlds[world].bindings.push_back(b);
  };
  bind("H", "H/Standard");
  bind("B1", "H/Standard");
  bind("B2", "H/Standard");
  bind("B3", "B3/Other");

  f.relationships.push_back({"Ram", "H", "Treat", "Doctor", "Ram", kNow - 10});
  f.version = 1;

  expect(has_role(f, "Ram", "H", "Doctor", kNow), "direct role missing");
  for (const std::string& b : {"B1", "B2"}) {
    bool inherited = false;
    for (const RoleAssertion& a : roles_of(f, "Ram", b, kNow)) {
      if (a.role == "Doctor" && a.basis == RoleBasis::ContainmentInherited)
        inherited = true;
    }
    expect(inherited, "Doctor must flow into " + b + " by containment");
    expect(oracle::roles(f, "Ram", b, kNow).count("Doctor") == 1,
           "reference evaluator disagrees on " + b);
  }
  expect(!has_role(f, "Ram", "B3", "Doctor", kNow),
         "a branch sharing no template must not inherit");
  expect(oracle::roles(f, "Ram", "B3", kNow).count("Doctor") == 0,
         "reference evaluator disagrees on B3");
}

// 9. Audit: each walkthrough leaves its exact record tally, the in-memory
// and on-disk chains verify, and one flipped byte is detected.
void criterion9() {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() /
                 ("mv-acceptance-" +
                  std::to_string(std::chrono::steady_clock::now()
                                     .time_since_epoch()
                                     .count()));
  fs::create_directories(dir);

  const std::map<std::string, std::size_t> expected = {
      {"scenario1", 6}, {"scenario2", 11}, {"scenario3", 12},
      {"scenario4", 17}, {"cet", 10},      {"uid", 11},
      {"datatrust", 7}};

  for (const auto& [name, count] : expected) {
    fs::path sink = dir / (name + ".ndjson");
    Engine e(sink);
    ScenarioResult r = run_scenario(e, builtin_scenario(name), {});
    expect(r.passed, name + ": walkthrough failed");
    expect(e.audit_log().size() == count,
           name + ": expected " + std::to_string(count) + " records, got " +
               std::to_string(e.audit_log().size()));
    expect(AuditLog::verify(e.audit_log().records()).ok,
           name + ": in-memory chain broken");
    expect(AuditLog::verify_file(sink).ok, name + ": on-disk chain broken");
  }

  fs::path victim = dir / "scenario4.ndjson";
  std::ifstream in(victim, std::ios::binary);
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  in.close();
  std::size_t pos = bytes.size() / 2;
  while (pos < bytes.size() && bytes[pos] == '\n') ++pos;
  expect(pos < bytes.size(), "empty audit file");
  bytes[pos] ^= 0x01;
  std::ofstream out(victim, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.close();
  expect(!AuditLog::verify_file(victim).ok,
         "a flipped byte must break file verification");

  fs::remove_all(dir);
}

// 10. The tunnel codec round-trips every structurally valid value.
void criterion10() {
  testgen::Rand r(42);
  for (int i = 0; i < kRoundTrips; ++i) {
    RoleTunnel t = testgen::random_tunnel(r);
    expect(parse_tunnel(format_tunnel(t)) == t,
           "round trip divergence at iteration " + std::to_string(i) +
               " for \"" + format_tunnel(t) + "\"");
  }
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    void (*body)();
  };
  const Criterion criteria[] = {
      {1, "referral chain grants the patient read access end to end",
       criterion1},
      {2, "purpose binding admits research and refuses marketing", criterion2},
      {3, "third-party reads require the reader's own capacity", criterion3},
      {4, "risk-governed checking matches its nominal frequencies",
       criterion4},
      {5, "template and copy lifetimes expire on schedule", criterion5},
      {6, "revocation invalidates cached copies and fresh access", criterion6},
      {7, "role and constraint evaluation match a reference evaluator",
       criterion7},
      {8, "containment shares roles only along common templates", criterion8},
      {9, "audit logs tally, chain and detect tampering", criterion9},
      {10, "tunnel encoding round-trips losslessly", criterion10},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    try {
      c.body();
      std::printf("PASS criterion-%d: %s\n", c.id, c.title);
    } catch (const std::exception& e) {
      ++failures;
      std::printf("FAIL criterion-%d: %s (%s)\n", c.id, c.title, e.what());
    }
    std::fflush(stdout);
  }

  if (failures == 0) {
    std::printf("all 10 criteria passed\n");
  } else {
    std::printf("%d of 10 criteria failed\n", failures);
  }
  return failures == 0 ? 0 : 1;
}
