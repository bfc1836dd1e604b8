// Copyright 2026 the Multiverse authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "multiverse/frame_io.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "support/generators.hpp"

using namespace multiverse;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("mv-io-" + std::to_string(std::rand()) + "-" +
            std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() { std::error_code ec; fs::remove_all(path, ec); }
};

}  // namespace

TEST_CASE("random frames round trip through json") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Frame f = testgen::random_frame(seed).frame;
    nlohmann::json j = frame_to_json(f);
    Frame back = frame_from_json(j);
    // Canonical dumps compare the whole state in one move.
    CHECK(canonical_dump(frame_to_json(back)) == canonical_dump(j));
    CHECK(back.version == f.version);
    CHECK(back.worlds.size() == f.worlds.size());
    CHECK(back.relationships.size() == f.relationships.size());
    CHECK(back.agents == f.agents);
    CHECK(back.purposes == f.purposes);
  }
}

TEST_CASE("sticky expiry marks survive serialization") {
  Frame f;
  World w;
  w.id = "H";
  w.name = "H";
  TemplateBinding b;
  b.template_id = "H/T";
  b.capacity = RoleTunnel{{{"Owner", "H"}}};
  b.expires_at = 900;
  b.mark_expired();
  w.bindings.push_back(b);
  f.worlds["H"] = w;
  f.templates["H/T"] = Template{"H/T", "T", std::nullopt, "H", {}, {}, {}};

  Frame back = frame_from_json(frame_to_json(f));
  REQUIRE(back.worlds["H"].bindings.size() == 1);
  CHECK(back.worlds["H"].bindings[0].marked_expired());
}

TEST_CASE("malformed documents are parse errors") {
  CHECK_THROWS_AS(frame_from_json(nlohmann::json::array()), ParseError);
  CHECK_THROWS_AS(frame_from_json(nlohmann::json{{"version", "x"}}), ParseError);
  nlohmann::json bad_world = frame_to_json(Frame{});
  bad_world["worlds"]["W"] = {{"unexpected", true}};
  CHECK_THROWS_AS(frame_from_json(bad_world), ParseError);
}

TEST_CASE("save and load through a file") {
  TempDir dir;
  fs::path p = dir.path / "state.frame.json";
  Frame f = testgen::random_frame(7).frame;
  save_frame(f, p);
  Frame back = load_frame(p);
  CHECK(canonical_dump(frame_to_json(back)) == canonical_dump(frame_to_json(f)));

  // Saving again writes identical bytes: the format is canonical.
  fs::path q = dir.path / "again.frame.json";
  save_frame(back, q);
  std::ifstream a(p), b(q);
  std::string sa((std::istreambuf_iterator<char>(a)), {});
  std::string sb((std::istreambuf_iterator<char>(b)), {});
  CHECK(sa == sb);
  CHECK(!sa.empty());
  CHECK(sa.back() == '\n');
}

TEST_CASE("missing and corrupt files fail loudly") {
  TempDir dir;
  CHECK_THROWS_AS(load_frame(dir.path / "absent.frame.json"), Error);
  fs::path p = dir.path / "corrupt.frame.json";
  std::ofstream(p) << "{ not json";
  CHECK_THROWS_AS(load_frame(p), Error);
}

TEST_CASE("validation reports serialize with checks") {
  ValidationReport r;
  r.tunnel = RoleTunnel{{{"Doctor", "Fortis"}, {"Owner", "Ram"}}};
  r.valid = false;
  r.checks.push_back({0, "Fortis", true, true});
  r.checks.push_back({1, "R", false, false});
  r.failure = ValidationFailure{1, "capacity lapsed"};
  r.rng_seed = 99;
  r.frame_version = 12;

  nlohmann::json j = r;
  ValidationReport back = j.get<ValidationReport>();
  CHECK(back.valid == r.valid);
  CHECK(back.rng_seed == 99);
  REQUIRE(back.checks.size() == 2);
  CHECK(back.checks[1].performed == false);
  REQUIRE(back.failure.has_value());
  CHECK(back.failure->segment == 1);
}
