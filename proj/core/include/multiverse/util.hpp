// Copyright 2026 the Multiverse authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace multiverse {

std::string base64_encode(std::span<const std::uint8_t> data);
// Throws ParseError on malformed input.
std::vector<std::uint8_t> base64_decode(std::string_view text);

std::string hex_encode(std::span<const std::uint8_t> data);
// Throws ParseError on odd length or non-hex characters.
std::vector<std::uint8_t> hex_decode(std::string_view text);

std::array<std::uint8_t, 32> sha256(std::span<const std::uint8_t> data);
std::array<std::uint8_t, 32> sha256(std::string_view data);

std::vector<std::uint8_t> to_bytes(std::string_view text);
std::string from_bytes(std::span<const std::uint8_t> data);

// Deterministic counter-based generator for integrity-check draws. The
// sequence is a pure function of (seed, draw index), so a validation replay
// with the same seed sees the same coin flips regardless of control flow
// elsewhere.
class CheckRng {
 public:
  explicit CheckRng(std::uint64_t seed) : seed_(seed) {}

  // Uniform in [0, 1).
  double next_unit();
  std::uint64_t next_u64();

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace multiverse
