// Copyright 2026 the Multiverse authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include <benchmark/benchmark.h>

#include "multiverse/relationship.hpp"
#include "multiverse/tunnel_codec.hpp"
#include "multiverse/tunnel_engine.hpp"
#include "../tests/support/fixtures.hpp"

namespace {

using namespace multiverse;
using fixtures::kNow;

// Tunnel validation cost as trust rises: rho=0 re-checks both capacity
// levels, rho=1 trusts them.
void BM_ValidateTunnel(benchmark::State& state) {
  Frame f = fixtures::capacity_chain_frame();
  RoleTunnel chain = parse_tunnel(fixtures::kChainTunnel);
  double rho = static_cast<double>(state.range(0)) / 100.0;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    ValidationReport r = validate_tunnel(f, chain, {rho}, seed++, kNow);
    benchmark::DoNotOptimize(r.valid);
  }
}
BENCHMARK(BM_ValidateTunnel)->Arg(0)->Arg(50)->Arg(100);

void BM_FormatTunnel(benchmark::State& state) {
  RoleTunnel t = parse_tunnel(
      "Researcher(EnergyCompany):Senior Analyst(EnergyAnalytics):Owner(Ajay)");
  for (auto _ : state) {
    std::string s = format_tunnel(t);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_FormatTunnel);

void BM_ParseTunnel(benchmark::State& state) {
  const char* text =
      "Researcher(EnergyCompany):Senior Analyst(EnergyAnalytics):Owner(Ajay)";
  for (auto _ : state) {
    RoleTunnel t = parse_tunnel(text);
    benchmark::DoNotOptimize(t.segments);
  }
}
BENCHMARK(BM_ParseTunnel);

void BM_RolesOf(benchmark::State& state) {
  Frame f = fixtures::capacity_chain_frame();
  for (auto _ : state) {
    auto roles = roles_of(f, "U", "Club", kNow);
    benchmark::DoNotOptimize(roles);
  }
}
BENCHMARK(BM_RolesOf);

}  // namespace

BENCHMARK_MAIN();
