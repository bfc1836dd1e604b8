// Copyright 2026 the Multiverse authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "multiverse/errors.hpp"

namespace multiverse {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::ParseError: return "ParseError";
    case Errc::InvalidTunnel: return "InvalidTunnel";
    case Errc::InvalidIdentifier: return "InvalidIdentifier";
    case Errc::PermissionDenied: return "PermissionDenied";
    case Errc::PrivilegeDenied: return "PrivilegeDenied";
    case Errc::UnknownWorld: return "UnknownWorld";
    case Errc::UnknownAgent: return "UnknownAgent";
    case Errc::UnknownTemplate: return "UnknownTemplate";
    case Errc::UnknownResource: return "UnknownResource";
    case Errc::UnknownRole: return "UnknownRole";
    case Errc::UnknownSpec: return "UnknownSpec";
    case Errc::UnknownInstance: return "UnknownInstance";
    case Errc::UnknownBinding: return "UnknownBinding";
    case Errc::UnknownPurpose: return "UnknownPurpose";
    case Errc::DuplicateAgent: return "DuplicateAgent";
    case Errc::DuplicateWorld: return "DuplicateWorld";
    case Errc::DuplicateTemplate: return "DuplicateTemplate";
    case Errc::DuplicateRelationship: return "DuplicateRelationship";
    case Errc::DuplicateResource: return "DuplicateResource";
    case Errc::CycleDetected: return "CycleDetected";
    case Errc::InvalidTemplate: return "InvalidTemplate";
    case Errc::ExpiredTemplate: return "ExpiredTemplate";
    case Errc::TunnelInvalid: return "TunnelInvalid";
    case Errc::ConstraintViolated: return "ConstraintViolated";
    case Errc::PurposeNotPermitted: return "PurposeNotPermitted";
    case Errc::NoSuchAccessPoint: return "NoSuchAccessPoint";
    case Errc::TTLExpired: return "TTLExpired";
    case Errc::CapacityRevoked: return "CapacityRevoked";
    case Errc::CapacityUnsatisfied: return "CapacityUnsatisfied";
    case Errc::PendingApproval: return "PendingApproval";
    case Errc::ResolveError: return "ResolveError";
    case Errc::StorageFailure: return "StorageFailure";
  }
  return "UnknownError";
}

Error::Error(Errc code, std::string detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail),
      code_(code),
      detail_(std::move(detail)) {}

ParseError::ParseError(std::size_t position, std::string reason)
    : Error(Errc::ParseError,
            std::move(reason) + " at offset " + std::to_string(position)),
      position_(position) {}

}  // namespace multiverse
