// Copyright 2026 the Multiverse authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "multiverse/engine.hpp"
#include "multiverse/errors.hpp"
#include "multiverse/model.hpp"

namespace multiverse {

// Scripted walkthroughs: each step drives the engine and states the outcome
// it expects, so a script doubles as an executable conformance check.

enum class StepKind {
  Policy,          // apply a policy fragment
  Access,          // access_remote
  ReadCached,      // read_cached
  ThirdPartyRead,  // third_party_read
  Sweep,           // sweep_expired
  AdvanceClock,    // move the mock clock forward
};

struct ScenarioStep {
  StepKind kind = StepKind::Policy;
  std::string note;  // one line of intent, shown in reports

  // Expected outcome: ok, or a specific denial.
  bool expect_ok = true;
  std::optional<Errc> expect_code;

  std::string policy;       // Policy
  std::string agent;        // acting/reading agent
  std::string tunnel;       // Access
  std::string query = "read";
  std::string resource_id;  // Access / ReadCached / ThirdPartyRead
  std::string purpose;      // Access
  std::string world;        // ThirdPartyRead / Sweep
  std::optional<double> rho;          // per-step risk override
  std::int64_t advance_seconds = 0;   // AdvanceClock
};

struct ScenarioScript {
  std::string name;
  std::string summary;
  std::vector<ScenarioStep> steps;
};

struct ScenarioOptions {
  double rho = 0.0;
  std::uint64_t seed = 0;
  Timestamp start = 1700000000;
};

struct StepResult {
  std::string note;
  std::string expected;  // "ok" or the expected denial code
  std::string outcome;   // "ok" or the denial code observed
  std::string detail;    // denial detail, empty on ok
  bool matched = false;
};

struct ScenarioResult {
  std::string name;
  bool passed = false;
  std::vector<StepResult> steps;
  Timestamp end_time = 0;
};

// Runs every step against the engine (which keeps its audit log), matching
// each outcome against the step's expectation. Mismatched steps do not stop
// the run; they mark the result failed.
ScenarioResult run_scenario(Engine& engine, const ScenarioScript& script,
                            const ScenarioOptions& options);

// The built-in walkthroughs, in a stable order.
const std::vector<ScenarioScript>& builtin_scenarios();

// Lookup by name; throws Error(ResolveError) when absent.
const ScenarioScript& builtin_scenario(const std::string& name);

}  // namespace multiverse
