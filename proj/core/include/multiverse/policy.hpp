// Copyright 2026 the Multiverse authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "multiverse/engine.hpp"
#include "multiverse/model.hpp"

namespace multiverse {

// Statement forms of the policy language (.mvp files). One statement maps
// to one engine operation; a document applies statement by statement, and a
// failing statement stops the run with everything before it already applied.
//
//   purpose <Name>;
//   agent <Name> ["Display Name"];
//   world <Name> ["Display Name"] [in <World>] [owner <Agent>] [approval];
//   template <Name> [extends <Ref>] in <World> [by <Agent>] {
//     dap <query> role <Role> purposes(<P, ...>) [ttl <seconds>];
//     in <Role> [constraints(...)] [privileges(<p, ...>)] [purposes(<P, ...>)];
//     out <Name> [as <Role>] [constraints(...)] [roles(<R, ...>)];
//   }
//   implement <World> <Ref> [via "<tunnel>" ttl <seconds>] [by <Agent>];
//   relate <Source> -> <Target> via <OutName> [by <Agent>];
//   approve <Source> -> <Target> via <OutName> [by <Agent>];
//   revoke <Source> -> <Target> via <OutName> [role <Role>] [by <Agent>];
//   publish <World> <resourceId> <base64|@file> [by <Agent>];
//   addowner <World> <Agent> [by <Agent>];
//
// Constraints are written side.kind(args):
//   source.implements(<Ref>)  target.relt(<Name>, <Ref>)  target.relid(<Name>, <World>)
//
// Names may be quoted when they contain spaces. `#` starts a line comment.

struct PurposeStmt {
  std::string name;
};

struct AgentStmt {
  std::string id;
  std::string display_name;
};

struct WorldStmt {
  std::string id;
  std::string display_name;
  std::optional<std::string> location;
  std::optional<std::string> owner;
  bool approval = false;
};

struct TemplateStmt {
  TemplateDraft draft;
  std::optional<std::string> world;
  std::optional<std::string> by;
};

struct ImplementStmt {
  std::string world;
  std::string template_ref;
  std::optional<std::string> via;  // tunnel text
  std::optional<std::int64_t> ttl_seconds;
  std::optional<std::string> by;
};

struct RelateStmt {
  std::string source;
  std::string target;
  std::string out_name;
  std::optional<std::string> by;
};

struct ApproveStmt {
  std::string source;
  std::string target;
  std::string out_name;
  std::optional<std::string> by;
};

struct RevokeStmt {
  std::string source;
  std::string target;
  std::string out_name;
  std::optional<std::string> role;
  std::optional<std::string> by;
};

struct PublishStmt {
  std::string world;
  std::string resource_id;
  std::optional<std::string> file;  // @file payload, resolved at apply time
  std::vector<std::uint8_t> data;   // inline base64 payload
  std::optional<std::string> by;
};

struct AddOwnerStmt {
  std::string world;
  std::string owner;
  std::optional<std::string> by;
};

using StatementNode =
    std::variant<PurposeStmt, AgentStmt, WorldStmt, TemplateStmt, ImplementStmt,
                 RelateStmt, ApproveStmt, RevokeStmt, PublishStmt, AddOwnerStmt>;

struct PolicyStatement {
  StatementNode node;
  int line = 1;
  int col = 1;
};

struct PolicyDocument {
  std::vector<PolicyStatement> statements;
};

// Throws ParseError (position = byte offset; the reason names line and
// column). Unknown statement keywords, malformed clauses and duplicate
// clauses are all rejected here; name resolution waits until apply.
PolicyDocument parse_policy(std::string_view text);

// Canonical text form. parse(print(parse(x))) is structurally identical to
// parse(x); inline payloads come back as base64, file payloads as @file.
std::string print_policy(const PolicyDocument& doc);

struct ApplyOptions {
  // Used when a statement has no `by` / `owner` clause of its own.
  std::optional<AgentId> default_actor;
  Timestamp now = 0;
  AccessRisk risk{};
  std::uint64_t rng_seed = 0;
  // Directory @file payloads resolve against; empty means the process cwd.
  std::string base_dir;
};

struct ApplyOutcome {
  std::size_t applied = 0;
  std::vector<std::string> notes;  // one human-readable line per statement
};

// Applies statements in order against the engine. The first failure is
// rethrown with the statement's line prepended to the detail (the error
// code is preserved); prior statements stay applied.
ApplyOutcome apply_policy(Engine& engine, const PolicyDocument& doc,
                          const ApplyOptions& options);

}  // namespace multiverse
