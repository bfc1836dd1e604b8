// Copyright 2026 the Multiverse authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace multiverse {

// Every refusal an engine operation can produce. Names are part of the wire
// surface: they appear verbatim in audit records, --json output, and
// scenario expectations.
enum class Errc {
  ParseError,
  InvalidTunnel,
  InvalidIdentifier,
  PermissionDenied,
  PrivilegeDenied,
  UnknownWorld,
  UnknownAgent,
  UnknownTemplate,
  UnknownResource,
  UnknownRole,
  UnknownSpec,
  UnknownInstance,
  UnknownBinding,
  UnknownPurpose,
  DuplicateAgent,
  DuplicateWorld,
  DuplicateTemplate,
  DuplicateRelationship,
  DuplicateResource,
  CycleDetected,
  InvalidTemplate,
  ExpiredTemplate,
  TunnelInvalid,
  ConstraintViolated,
  PurposeNotPermitted,
  NoSuchAccessPoint,
  TTLExpired,
  CapacityRevoked,
  CapacityUnsatisfied,
  PendingApproval,
  ResolveError,
  StorageFailure,
};

std::string_view to_string(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string detail);

  Errc code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  Errc code_;
  std::string detail_;
};

// Lexical failure; position is a byte offset into the rejected input.
class ParseError : public Error {
 public:
  ParseError(std::size_t position, std::string reason);

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace multiverse
