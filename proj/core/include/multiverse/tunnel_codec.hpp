// Copyright 2026 the Multiverse authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <string>
#include <string_view>

#include "multiverse/model.hpp"

namespace multiverse {

// Wire form of a tunnel: segments "role(world)" joined by ':', e.g.
//   Advisor(Sharada):Doctor(Fortis):Owner(Ram)
// Roles and worlds may contain spaces but not ':', '(' or ')'.
//
// format_tunnel throws Error(InvalidTunnel) on a structurally bad value;
// parse_tunnel throws ParseError (lexical, with byte offset) or
// Error(InvalidTunnel) (well-formed text, bad terminal). The pair is a
// lossless round trip: parse_tunnel(format_tunnel(t)) == t for every valid t.
std::string format_tunnel(const RoleTunnel& tunnel);
RoleTunnel parse_tunnel(std::string_view text);

}  // namespace multiverse
