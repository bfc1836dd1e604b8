// Copyright 2026 the Multiverse authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "multiverse/policy.hpp"

#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "multiverse/tunnel_codec.hpp"
#include "multiverse/util.hpp"

namespace multiverse {
namespace {

bool word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '@' ||
         c == '.' || c == '/' || c == '+' || c == '=' || c == '-';
}

struct Tok {
  enum Kind { Word, Str, Punct, End } kind = End;
  std::string text;
  int line = 1;
  int col = 1;
  std::size_t off = 0;
};

std::vector<Tok> lex(std::string_view text) {
  std::vector<Tok> out;
  std::size_t i = 0;
  int line = 1, col = 1;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    Tok t;
    t.line = line;
    t.col = col;
    t.off = i;
    if (c == '"') {
      advance(1);
      std::string s;
      while (i < text.size() && text[i] != '"') {
        if (text[i] == '\n')
          throw ParseError(t.off, "line " + std::to_string(t.line) +
                                      ": unterminated string");
        if (text[i] == '\\') {
          if (i + 1 >= text.size())
            throw ParseError(t.off, "line " + std::to_string(t.line) +
                                        ": dangling escape in string");
          char e = text[i + 1];
          if (e != '"' && e != '\\')
            throw ParseError(t.off, "line " + std::to_string(t.line) +
                                        ": unknown escape '\\" + std::string(1, e) +
                                        "'");
          s.push_back(e);
          advance(2);
          continue;
        }
        s.push_back(text[i]);
        advance(1);
      }
      if (i >= text.size())
        throw ParseError(t.off,
                         "line " + std::to_string(t.line) + ": unterminated string");
      advance(1);  // closing quote
      t.kind = Tok::Str;
      t.text = std::move(s);
      out.push_back(std::move(t));
      continue;
    }
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
      t.kind = Tok::Punct;
      t.text = "->";
      advance(2);
      out.push_back(std::move(t));
      continue;
    }
    if (c == ';' || c == '{' || c == '}' || c == '(' || c == ')' || c == ',') {
      t.kind = Tok::Punct;
      t.text = std::string(1, c);
      advance(1);
      out.push_back(std::move(t));
      continue;
    }
    if (word_char(c)) {
      std::string w;
      while (i < text.size() && word_char(text[i])) {
        if (text[i] == '-' && i + 1 < text.size() && text[i + 1] == '>') break;
        w.push_back(text[i]);
        advance(1);
      }
      t.kind = Tok::Word;
      t.text = std::move(w);
      out.push_back(std::move(t));
      continue;
    }
    throw ParseError(t.off, "line " + std::to_string(line) + ", col " +
                                std::to_string(col) + ": unexpected character '" +
                                std::string(1, c) + "'");
  }
  Tok end;
  end.kind = Tok::End;
  end.line = line;
  end.col = col;
  end.off = text.size();
  out.push_back(end);
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(lex(text)) {}

  PolicyDocument document() {
    PolicyDocument doc;
    while (peek().kind != Tok::End) {
      doc.statements.push_back(statement());
    }
    return doc;
  }

 private:
  std::vector<Tok> toks_;
  std::size_t pos_ = 0;

  const Tok& peek(std::size_t ahead = 0) const {
    std::size_t k = pos_ + ahead;
    return k < toks_.size() ? toks_[k] : toks_.back();
  }
  Tok take() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

  [[noreturn]] void fail(const Tok& at, const std::string& msg) {
    throw ParseError(at.off, "line " + std::to_string(at.line) + ", col " +
                                 std::to_string(at.col) + ": " + msg);
  }

  bool at_word(std::string_view w) const {
    return peek().kind == Tok::Word && peek().text == w;
  }
  bool at_punct(std::string_view p) const {
    return peek().kind == Tok::Punct && peek().text == p;
  }
  void expect_punct(std::string_view p) {
    if (!at_punct(p)) fail(peek(), "expected '" + std::string(p) + "'");
    take();
  }
  std::string keyword() {
    if (peek().kind != Tok::Word) fail(peek(), "expected a statement keyword");
    return take().text;
  }
  // A name: bare word or quoted string.
  std::string name(const char* what) {
    if (peek().kind != Tok::Word && peek().kind != Tok::Str)
      fail(peek(), std::string("expected ") + what);
    return take().text;
  }
  std::int64_t integer(const char* what) {
    Tok t = peek();
    if (t.kind != Tok::Word) fail(t, std::string("expected ") + what);
    try {
      std::size_t used = 0;
      std::int64_t v = std::stoll(t.text, &used);
      if (used != t.text.size()) fail(t, std::string("expected ") + what);
      take();
      return v;
    } catch (const std::logic_error&) {
      fail(t, std::string("expected ") + what);
    }
  }

  // name [, name]* inside parentheses; empty list allowed.
  std::vector<std::string> name_list(const char* what) {
    expect_punct("(");
    std::vector<std::string> items;
    if (!at_punct(")")) {
      items.push_back(name(what));
      while (at_punct(",")) {
        take();
        items.push_back(name(what));
      }
    }
    expect_punct(")");
    return items;
  }

  std::vector<Constraint> constraint_list() {
    expect_punct("(");
    std::vector<Constraint> items;
    if (!at_punct(")")) {
      items.push_back(constraint());
      while (at_punct(",")) {
        take();
        items.push_back(constraint());
      }
    }
    expect_punct(")");
    return items;
  }

  Constraint constraint() {
    Tok head = peek();
    if (head.kind != Tok::Word) fail(head, "expected a constraint");
    take();
    std::size_t dot = head.text.find('.');
    if (dot == std::string::npos)
      fail(head, "constraints are written side.kind(...)");
    std::string side_s = head.text.substr(0, dot);
    std::string kind_s = head.text.substr(dot + 1);
    ConstraintSide side;
    if (side_s == "source")
      side = ConstraintSide::Source;
    else if (side_s == "target")
      side = ConstraintSide::Target;
    else
      fail(head, "constraint side must be source or target");

    expect_punct("(");
    Constraint c;
    if (kind_s == "implements") {
      std::string ref = name("a template reference");
      c = Constraint::implements(side, ref);
    } else if (kind_s == "relt") {
      std::string rel = name("a relationship name");
      expect_punct(",");
      std::string ref = name("a template reference");
      c = Constraint::relt(side, rel, ref);
    } else if (kind_s == "relid") {
      std::string rel = name("a relationship name");
      expect_punct(",");
      std::string world = name("a world id");
      c = Constraint::relid(side, rel, world);
    } else {
      fail(head, "unknown constraint kind '" + kind_s + "'");
    }
    expect_punct(")");
    return c;
  }

  std::set<Privilege> privilege_list() {
    std::set<Privilege> out;
    for (const std::string& p : name_list("a privilege")) {
      std::optional<Privilege> v = privilege_from_string(p);
      if (!v) fail(peek(), "unknown privilege '" + p + "'");
      out.insert(*v);
    }
    return out;
  }

  PolicyStatement statement() {
    Tok head = peek();
    std::string kw = keyword();
    StatementNode node;
    if (kw == "purpose")
      node = purpose_stmt();
    else if (kw == "agent")
      node = agent_stmt();
    else if (kw == "world")
      node = world_stmt();
    else if (kw == "template")
      node = template_stmt();
    else if (kw == "implement")
      node = implement_stmt();
    else if (kw == "relate")
      node = relate_stmt();
    else if (kw == "approve")
      node = approve_stmt();
    else if (kw == "revoke")
      node = revoke_stmt();
    else if (kw == "publish")
      node = publish_stmt();
    else if (kw == "addowner")
      node = addowner_stmt();
    else
      fail(head, "unknown statement '" + kw + "'");
    return {std::move(node), head.line, head.col};
  }

  PurposeStmt purpose_stmt() {
    PurposeStmt s;
    s.name = name("a purpose name");
    expect_punct(";");
    return s;
  }

  AgentStmt agent_stmt() {
    AgentStmt s;
    s.id = name("an agent id");
    if (peek().kind == Tok::Str) s.display_name = take().text;
    expect_punct(";");
    return s;
  }

  WorldStmt world_stmt() {
    WorldStmt s;
    s.id = name("a world id");
    if (peek().kind == Tok::Str) s.display_name = take().text;
    while (!at_punct(";")) {
      if (at_word("in") && !s.location) {
        take();
        s.location = name("a containing world");
      } else if (at_word("owner") && !s.owner) {
        take();
        s.owner = name("an owner agent");
      } else if (at_word("approval") && !s.approval) {
        take();
        s.approval = true;
      } else {
        fail(peek(), "expected 'in', 'owner', 'approval' or ';'");
      }
    }
    take();  // ';'
    return s;
  }

  TemplateStmt template_stmt() {
    TemplateStmt s;
    s.draft.name = name("a template name");
    while (!at_punct("{")) {
      if (at_word("extends") && !s.draft.parent) {
        take();
        s.draft.parent = name("a parent template reference");
      } else if (at_word("in") && !s.world) {
        take();
        s.world = name("a defining world");
      } else if (at_word("by") && !s.by) {
        take();
        s.by = name("an agent");
      } else {
        fail(peek(), "expected 'extends', 'in', 'by' or '{'");
      }
    }
    take();  // '{'
    while (!at_punct("}")) {
      if (at_word("dap")) {
        take();
        s.draft.access_points.push_back(dap_member());
      } else if (at_word("in")) {
        take();
        s.draft.incoming.push_back(in_member());
      } else if (at_word("out")) {
        take();
        s.draft.outgoing.push_back(out_member());
      } else {
        fail(peek(), "expected 'dap', 'in', 'out' or '}'");
      }
    }
    take();  // '}'
    return s;
  }

  DataAccessPointSpec dap_member() {
    DataAccessPointSpec d;
    d.query = name("a query name");
    bool saw_role = false, saw_purposes = false, saw_ttl = false;
    while (!at_punct(";")) {
      if (at_word("role") && !saw_role) {
        take();
        d.required_role = name("a role");
        saw_role = true;
      } else if (at_word("purposes") && !saw_purposes) {
        take();
        for (std::string& p : name_list("a purpose")) d.allowed_purposes.insert(p);
        saw_purposes = true;
      } else if (at_word("ttl") && !saw_ttl) {
        take();
        d.ttl_seconds = integer("a ttl in seconds");
        saw_ttl = true;
      } else {
        fail(peek(), "expected 'role', 'purposes', 'ttl' or ';'");
      }
    }
    take();  // ';'
    if (!saw_role) fail(peek(), "access point needs 'role <Role>'");
    return d;
  }

  RelSpecIn in_member() {
    RelSpecIn r;
    r.role = name("a role");
    bool saw_c = false, saw_pr = false, saw_pu = false;
    while (!at_punct(";")) {
      if (at_word("constraints") && !saw_c) {
        take();
        r.constraints = constraint_list();
        saw_c = true;
      } else if (at_word("privileges") && !saw_pr) {
        take();
        r.privileges = privilege_list();
        saw_pr = true;
      } else if (at_word("purposes") && !saw_pu) {
        take();
        for (std::string& p : name_list("a purpose")) r.purposes.insert(p);
        saw_pu = true;
      } else {
        fail(peek(), "expected 'constraints', 'privileges', 'purposes' or ';'");
      }
    }
    take();  // ';'
    return r;
  }

  RelSpecOut out_member() {
    RelSpecOut r;
    r.name = name("a relationship name");
    bool saw_as = false, saw_c = false, saw_roles = false;
    while (!at_punct(";")) {
      if (at_word("as") && !saw_as) {
        take();
        r.counterpart_role = name("a counterpart role");
        saw_as = true;
      } else if (at_word("constraints") && !saw_c) {
        take();
        r.constraints = constraint_list();
        saw_c = true;
      } else if (at_word("roles") && !saw_roles) {
        take();
        for (std::string& x : name_list("a role")) r.roles.insert(x);
        saw_roles = true;
      } else {
        fail(peek(), "expected 'as', 'constraints', 'roles' or ';'");
      }
    }
    take();  // ';'
    return r;
  }

  ImplementStmt implement_stmt() {
    ImplementStmt s;
    s.world = name("a world id");
    s.template_ref = name("a template reference");
    while (!at_punct(";")) {
      if (at_word("via") && !s.via) {
        take();
        if (peek().kind != Tok::Str)
          fail(peek(), "'via' takes a quoted tunnel string");
        s.via = take().text;
      } else if (at_word("ttl") && !s.ttl_seconds) {
        take();
        s.ttl_seconds = integer("a ttl in seconds");
      } else if (at_word("by") && !s.by) {
        take();
        s.by = name("an agent");
      } else {
        fail(peek(), "expected 'via', 'ttl', 'by' or ';'");
      }
    }
    take();  // ';'
    return s;
  }

  void arrow_pair(std::string& source, std::string& target, std::string& out_name) {
    source = name("a source world");
    expect_punct("->");
    target = name("a target world");
    if (!at_word("via")) fail(peek(), "expected 'via'");
    take();
    out_name = name("a relationship name");
  }

  RelateStmt relate_stmt() {
    RelateStmt s;
    arrow_pair(s.source, s.target, s.out_name);
    if (at_word("by")) {
      take();
      s.by = name("an agent");
    }
    expect_punct(";");
    return s;
  }

  ApproveStmt approve_stmt() {
    ApproveStmt s;
    arrow_pair(s.source, s.target, s.out_name);
    if (at_word("by")) {
      take();
      s.by = name("an agent");
    }
    expect_punct(";");
    return s;
  }

  RevokeStmt revoke_stmt() {
    RevokeStmt s;
    arrow_pair(s.source, s.target, s.out_name);
    while (!at_punct(";")) {
      if (at_word("role") && !s.role) {
        take();
        s.role = name("a role");
      } else if (at_word("by") && !s.by) {
        take();
        s.by = name("an agent");
      } else {
        fail(peek(), "expected 'role', 'by' or ';'");
      }
    }
    take();  // ';'
    return s;
  }

  PublishStmt publish_stmt() {
    PublishStmt s;
    s.world = name("a world id");
    s.resource_id = name("a resource id");
    Tok payload = peek();
    if (payload.kind != Tok::Word)
      fail(payload, "expected a base64 payload or @file");
    take();
    if (!payload.text.empty() && payload.text.front() == '@') {
      s.file = payload.text.substr(1);
      if (s.file->empty()) fail(payload, "@ payload needs a file path");
    } else {
      try {
        s.data = base64_decode(payload.text);
      } catch (const Error&) {
        fail(payload, "payload is not valid base64");
      }
    }
    if (at_word("by")) {
      take();
      s.by = name("an agent");
    }
    expect_punct(";");
    return s;
  }

  AddOwnerStmt addowner_stmt() {
    AddOwnerStmt s;
    s.world = name("a world id");
    s.owner = name("an agent");
    if (at_word("by")) {
      take();
      s.by = name("an agent");
    }
    expect_punct(";");
    return s;
  }
};

// --- printer ---------------------------------------------------------

bool plain_word(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!word_char(c)) return false;
    if (c == '-') return false;  // avoid any chance of fusing into '->'
  }
  return true;
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string pname(const std::string& s) { return plain_word(s) ? s : quoted(s); }

std::string print_constraint(const Constraint& c) {
  std::string side = c.side == ConstraintSide::Source ? "source" : "target";
  switch (c.kind) {
    case ConstraintKind::Implements:
      return side + ".implements(" + pname(c.template_ref) + ")";
    case ConstraintKind::Relt:
      return side + ".relt(" + pname(c.rel_name) + ", " + pname(c.template_ref) + ")";
    case ConstraintKind::Relid:
      return side + ".relid(" + pname(c.rel_name) + ", " + pname(c.world_ref) + ")";
  }
  return side;
}

template <typename It, typename Fn>
std::string join_mapped(It begin, It end, Fn fn) {
  std::string out;
  for (It it = begin; it != end; ++it) {
    if (!out.empty()) out += ", ";
    out += fn(*it);
  }
  return out;
}

struct Printer {
  std::ostringstream os;

  void operator()(const PurposeStmt& s) { os << "purpose " << pname(s.name) << ";\n"; }

  void operator()(const AgentStmt& s) {
    os << "agent " << pname(s.id);
    if (!s.display_name.empty()) os << " " << quoted(s.display_name);
    os << ";\n";
  }

  void operator()(const WorldStmt& s) {
    os << "world " << pname(s.id);
    if (!s.display_name.empty()) os << " " << quoted(s.display_name);
    if (s.location) os << " in " << pname(*s.location);
    if (s.owner) os << " owner " << pname(*s.owner);
    if (s.approval) os << " approval";
    os << ";\n";
  }

  void operator()(const TemplateStmt& s) {
    os << "template " << pname(s.draft.name);
    if (s.draft.parent) os << " extends " << pname(*s.draft.parent);
    if (s.world) os << " in " << pname(*s.world);
    if (s.by) os << " by " << pname(*s.by);
    os << " {\n";
    for (const DataAccessPointSpec& d : s.draft.access_points) {
      os << "  dap " << pname(d.query) << " role " << pname(d.required_role)
         << " purposes("
         << join_mapped(d.allowed_purposes.begin(), d.allowed_purposes.end(), pname)
         << ") ttl " << d.ttl_seconds << ";\n";
    }
    for (const RelSpecIn& r : s.draft.incoming) {
      os << "  in " << pname(r.role);
      if (!r.constraints.empty())
        os << " constraints("
           << join_mapped(r.constraints.begin(), r.constraints.end(),
                          print_constraint)
           << ")";
      if (!r.privileges.empty())
        os << " privileges("
           << join_mapped(r.privileges.begin(), r.privileges.end(),
                          [](Privilege p) { return std::string(to_string(p)); })
           << ")";
      if (!r.purposes.empty())
        os << " purposes("
           << join_mapped(r.purposes.begin(), r.purposes.end(), pname) << ")";
      os << ";\n";
    }
    for (const RelSpecOut& r : s.draft.outgoing) {
      os << "  out " << pname(r.name);
      if (!r.counterpart_role.empty()) os << " as " << pname(r.counterpart_role);
      if (!r.constraints.empty())
        os << " constraints("
           << join_mapped(r.constraints.begin(), r.constraints.end(),
                          print_constraint)
           << ")";
      if (!r.roles.empty())
        os << " roles(" << join_mapped(r.roles.begin(), r.roles.end(), pname) << ")";
      os << ";\n";
    }
    os << "}\n";
  }

  void operator()(const ImplementStmt& s) {
    os << "implement " << pname(s.world) << " " << pname(s.template_ref);
    if (s.via) os << " via " << quoted(*s.via);
    if (s.ttl_seconds) os << " ttl " << *s.ttl_seconds;
    if (s.by) os << " by " << pname(*s.by);
    os << ";\n";
  }

  void operator()(const RelateStmt& s) {
    os << "relate " << pname(s.source) << " -> " << pname(s.target) << " via "
       << pname(s.out_name);
    if (s.by) os << " by " << pname(*s.by);
    os << ";\n";
  }

  void operator()(const ApproveStmt& s) {
    os << "approve " << pname(s.source) << " -> " << pname(s.target) << " via "
       << pname(s.out_name);
    if (s.by) os << " by " << pname(*s.by);
    os << ";\n";
  }

  void operator()(const RevokeStmt& s) {
    os << "revoke " << pname(s.source) << " -> " << pname(s.target) << " via "
       << pname(s.out_name);
    if (s.role) os << " role " << pname(*s.role);
    if (s.by) os << " by " << pname(*s.by);
    os << ";\n";
  }

  void operator()(const PublishStmt& s) {
    os << "publish " << pname(s.world) << " " << pname(s.resource_id) << " ";
    if (s.file)
      os << "@" << *s.file;
    else
      os << base64_encode(s.data);
    if (s.by) os << " by " << pname(*s.by);
    os << ";\n";
  }

  void operator()(const AddOwnerStmt& s) {
    os << "addowner " << pname(s.world) << " " << pname(s.owner);
    if (s.by) os << " by " << pname(*s.by);
    os << ";\n";
  }
};

std::vector<std::uint8_t> read_payload_file(const std::string& base_dir,
                                            const std::string& rel) {
  std::filesystem::path p(rel);
  if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
  std::ifstream in(p, std::ios::binary);
  if (!in)
    throw Error(Errc::StorageFailure, "cannot read payload file '" + p.string() + "'");
  std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
  return data;
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

PolicyDocument parse_policy(std::string_view text) {
  return Parser(text).document();
}

std::string print_policy(const PolicyDocument& doc) {
  Printer p;
  for (const PolicyStatement& s : doc.statements) std::visit(p, s.node);
  return p.os.str();
}

ApplyOutcome apply_policy(Engine& engine, const PolicyDocument& doc,
                          const ApplyOptions& options) {
  ApplyOutcome out;
  auto actor = [&](const std::optional<std::string>& by) -> AgentId {
    if (by) return *by;
    if (options.default_actor) return *options.default_actor;
    throw Error(Errc::ResolveError,
                "no acting agent: add 'by <Agent>' or set a default actor");
  };

  for (const PolicyStatement& stmt : doc.statements) {
    try {
      std::visit(
          overloaded{
              [&](const PurposeStmt& s) {
                engine.register_purpose(s.name);
                out.notes.push_back("purpose " + s.name);
              },
              [&](const AgentStmt& s) {
                engine.register_agent(s.id, s.display_name, options.now);
                out.notes.push_back("agent " + s.id);
              },
              [&](const WorldStmt& s) {
                AgentId who = actor(s.owner);
                engine.create_world(who, s.id, s.display_name, s.location,
                                    options.now);
                if (s.approval)
                  engine.set_require_approval(who, s.id, true, options.now);
                out.notes.push_back("world " + s.id);
              },
              [&](const TemplateStmt& s) {
                if (!s.world)
                  throw Error(Errc::ResolveError, "template '" + s.draft.name +
                                                      "' needs 'in <World>'");
                TemplateId id = engine.define_template(actor(s.by), *s.world,
                                                       s.draft, options.now);
                out.notes.push_back("template " + id);
              },
              [&](const ImplementStmt& s) {
                std::optional<RoleTunnel> via;
                if (s.via) via = parse_tunnel(*s.via);
                engine.implement_template(actor(s.by), s.world, s.template_ref, via,
                                          s.ttl_seconds, options.now, options.risk,
                                          options.rng_seed);
                out.notes.push_back("implement " + s.template_ref + " in " + s.world);
              },
              [&](const RelateStmt& s) {
                engine.establish_relationship(actor(s.by), s.source, s.target,
                                              s.out_name, options.now);
                out.notes.push_back("relate " + s.source + " -> " + s.target +
                                    " via " + s.out_name);
              },
              [&](const ApproveStmt& s) {
                engine.approve_relationship(actor(s.by), s.target, s.source,
                                            s.out_name, options.now);
                out.notes.push_back("approve " + s.source + " -> " + s.target +
                                    " via " + s.out_name);
              },
              [&](const RevokeStmt& s) {
                engine.revoke_relationship(actor(s.by), s.source, s.target,
                                           s.out_name, s.role, options.now);
                out.notes.push_back("revoke " + s.source + " -> " + s.target +
                                    " via " + s.out_name);
              },
              [&](const PublishStmt& s) {
                std::vector<std::uint8_t> data =
                    s.file ? read_payload_file(options.base_dir, *s.file) : s.data;
                engine.put_resource(actor(s.by), s.world, s.resource_id,
                                    std::move(data), options.now);
                out.notes.push_back("publish " + s.world + "/" + s.resource_id);
              },
              [&](const AddOwnerStmt& s) {
                engine.add_owner(actor(s.by), s.world, s.owner, options.now);
                out.notes.push_back("addowner " + s.world + " " + s.owner);
              },
          },
          stmt.node);
      ++out.applied;
    } catch (const Error& e) {
      throw Error(e.code(),
                  "line " + std::to_string(stmt.line) + ": " + e.detail());
    }
  }
  return out;
}

}  // namespace multiverse
