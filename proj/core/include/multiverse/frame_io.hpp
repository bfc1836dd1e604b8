// Copyright 2026 the Multiverse authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "multiverse/frame.hpp"
#include "multiverse/model.hpp"
#include "multiverse/tunnel_engine.hpp"

namespace multiverse {

// nlohmann ADL hooks. Conventions: camelCase keys, nullable fields always
// present (as null), tunnels as their formatted string, payload bytes as
// base64. Objects serialize with sorted keys (nlohmann's default map), which
// makes the frame file canonical: load(save(f)) is byte-stable.
void to_json(nlohmann::json& j, const Constraint& c);
void from_json(const nlohmann::json& j, Constraint& c);
void to_json(nlohmann::json& j, const DataAccessPointSpec& d);
void from_json(const nlohmann::json& j, DataAccessPointSpec& d);
void to_json(nlohmann::json& j, const RelSpecIn& s);
void from_json(const nlohmann::json& j, RelSpecIn& s);
void to_json(nlohmann::json& j, const RelSpecOut& s);
void from_json(const nlohmann::json& j, RelSpecOut& s);
void to_json(nlohmann::json& j, const Template& t);
void from_json(const nlohmann::json& j, Template& t);
void to_json(nlohmann::json& j, const TemplateBinding& b);
void from_json(const nlohmann::json& j, TemplateBinding& b);
void to_json(nlohmann::json& j, const PendingRelationship& p);
void from_json(const nlohmann::json& j, PendingRelationship& p);
void to_json(nlohmann::json& j, const World& w);
void from_json(const nlohmann::json& j, World& w);
void to_json(nlohmann::json& j, const StoredResource& r);
void from_json(const nlohmann::json& j, StoredResource& r);
void to_json(nlohmann::json& j, const RelationshipInstance& r);
void from_json(const nlohmann::json& j, RelationshipInstance& r);
void to_json(nlohmann::json& j, const CheckRecord& c);
void from_json(const nlohmann::json& j, CheckRecord& c);
void to_json(nlohmann::json& j, const ValidationReport& r);
void from_json(const nlohmann::json& j, ValidationReport& r);

nlohmann::json frame_to_json(const Frame& frame);
// Throws ParseError on malformed documents.
Frame frame_from_json(const nlohmann::json& j);

// Canonical on-disk form: two-space indent, sorted keys, trailing newline.
std::string canonical_dump(const nlohmann::json& j);

// Frame files conventionally end in ".frame.json".
void save_frame(const Frame& frame, const std::filesystem::path& path);
Frame load_frame(const std::filesystem::path& path);  // StorageFailure / ParseError

}  // namespace multiverse
