// Copyright 2026 the Multiverse authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <memory>
#include <mutex>
#include <type_traits>
#include <utility>

#include "multiverse/frame.hpp"

namespace multiverse {

// Single-writer, many-reader holder of the current Frame. Readers take
// immutable snapshots and are never blocked by a writer; writers run one at
// a time against a private copy that is published atomically with the
// version bumped by one. A mutator that throws publishes nothing.
class FrameStore {
 public:
  FrameStore() : FrameStore(Frame{}) {}
  explicit FrameStore(Frame initial)
      : current_(std::make_shared<const Frame>(std::move(initial))) {}

  FrameStore(const FrameStore&) = delete;
  FrameStore& operator=(const FrameStore&) = delete;

  FrameSnapshot snapshot() const {
    std::scoped_lock lock(ptr_mu_);
    return current_;
  }

  std::uint64_t version() const { return snapshot()->version; }

  // Runs fn against a copy of the current frame and publishes the copy.
  // Returns whatever fn returns.
  template <typename Fn>
  auto mutate(Fn&& fn) {
    std::scoped_lock writer(writer_mu_);
    auto next = std::make_shared<Frame>(*snapshot());
    if constexpr (std::is_void_v<std::invoke_result_t<Fn&, Frame&>>) {
      std::forward<Fn>(fn)(*next);
      next->version += 1;
      publish(std::move(next));
    } else {
      auto result = std::forward<Fn>(fn)(*next);
      next->version += 1;
      publish(std::move(next));
      return result;
    }
  }

 private:
  void publish(std::shared_ptr<Frame> next) {
    std::scoped_lock lock(ptr_mu_);
    current_ = std::move(next);
  }

  mutable std::mutex ptr_mu_;  // guards the snapshot pointer only
  std::mutex writer_mu_;       // serializes mutators
  FrameSnapshot current_;
};

}  // namespace multiverse
