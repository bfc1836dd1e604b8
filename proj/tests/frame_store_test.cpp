// Copyright 2026 the Multiverse authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "multiverse/frame_store.hpp"

#include <atomic>
#include <stdexcept>
#include <thread>
#include <vector>

#include "doctest.h"

using namespace multiverse;

TEST_CASE("mutate publishes a bumped version") {
  FrameStore store;
  CHECK(store.version() == 0);
  store.mutate([](Frame& f) {
    World w;
    w.id = "H";
    w.name = "H";
    f.worlds["H"] = w;
  });
  CHECK(store.version() == 1);
  CHECK(store.snapshot()->worlds.count("H") == 1);

  int out = store.mutate([](Frame&) { return 42; });
  CHECK(out == 42);
  CHECK(store.version() == 2);
}

TEST_CASE("snapshots are immutable under later writes") {
  FrameStore store;
  store.mutate([](Frame& f) { f.purposes.push_back("Research"); });
  FrameSnapshot old = store.snapshot();
  store.mutate([](Frame& f) { f.purposes.push_back("Marketing"); });
  CHECK(old->purposes.size() == 1);
  CHECK(store.snapshot()->purposes.size() == 2);
  CHECK(old->version + 1 == store.snapshot()->version);
}

TEST_CASE("a throwing mutator publishes nothing") {
  FrameStore store;
  store.mutate([](Frame& f) { f.purposes.push_back("Research"); });
  std::uint64_t before = store.version();
  CHECK_THROWS_AS(store.mutate([](Frame& f) {
                    f.purposes.push_back("Half-applied");
                    throw std::runtime_error("boom");
                  }),
                  std::runtime_error);
  CHECK(store.version() == before);
  CHECK(store.snapshot()->purposes.size() == 1);
}

TEST_CASE("readers race a writer without tearing") {
  FrameStore store;
  std::atomic<bool> stop{false};
  std::atomic<int> torn{0};

  std::vector<std::thread> readers;
  for (int i = 0; i < 4; ++i) {
    readers.emplace_back([&] {
      while (!stop.load()) {
        FrameSnapshot s = store.snapshot();
        // Writer inserts world and purpose together; seeing one without the
        // other means a torn snapshot.
        if (s->purposes.size() != s->worlds.size()) torn.fetch_add(1);
      }
    });
  }

  for (int i = 0; i < 200; ++i) {
    store.mutate([i](Frame& f) {
      World w;
      w.id = "w" + std::to_string(i);
      w.name = w.id;
      f.worlds[w.id] = w;
      f.purposes.push_back("p" + std::to_string(i));
    });
  }
  stop.store(true);
  for (auto& t : readers) t.join();

  CHECK(torn.load() == 0);
  CHECK(store.version() == 200);
  CHECK(store.snapshot()->worlds.size() == 200);
}
