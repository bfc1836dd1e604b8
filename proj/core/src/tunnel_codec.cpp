// Copyright 2026 the Multiverse authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "multiverse/tunnel_codec.hpp"

#include "multiverse/errors.hpp"

namespace multiverse {

std::string format_tunnel(const RoleTunnel& tunnel) {
  tunnel.validate();
  std::string out;
  bool first = true;
  for (const TunnelSegment& s : tunnel.segments) {
    if (!first) out.push_back(':');
    first = false;
    out += s.role;
    out.push_back('(');
    out += s.world;
    out.push_back(')');
  }
  return out;
}

RoleTunnel parse_tunnel(std::string_view text) {
  RoleTunnel tunnel;
  std::size_t pos = 0;
  const std::size_t n = text.size();
  if (n == 0) throw ParseError(0, "empty tunnel");
  while (true) {
    // role, up to the opening parenthesis
    std::size_t role_start = pos;
    while (pos < n && text[pos] != '(' && text[pos] != ')' && text[pos] != ':')
      ++pos;
    if (pos >= n || text[pos] != '(')
      throw ParseError(pos, "expected '(' after role");
    std::string role(text.substr(role_start, pos - role_start));
    ++pos;  // consume '('

    std::size_t world_start = pos;
    while (pos < n && text[pos] != ')' && text[pos] != '(' && text[pos] != ':')
      ++pos;
    if (pos >= n || text[pos] != ')')
      throw ParseError(pos, "expected ')' after world");
    std::string world(text.substr(world_start, pos - world_start));
    ++pos;  // consume ')'

    if (!valid_identifier(role))
      throw ParseError(role_start, "invalid role '" + role + "'");
    if (!valid_identifier(world))
      throw ParseError(world_start, "invalid world '" + world + "'");
    tunnel.segments.push_back({std::move(role), std::move(world)});

    if (pos == n) break;
    if (text[pos] != ':') throw ParseError(pos, "expected ':' between segments");
    ++pos;
    if (pos == n) throw ParseError(pos, "trailing ':'");
  }
  // Lexically fine but semantically unusable without an Owner terminal.
  tunnel.validate();
  return tunnel;
}

}  // namespace multiverse
