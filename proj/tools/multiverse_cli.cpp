// Copyright 2026 the Multiverse authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

// The multiverse command line: one frame file, one audit log, one engine
// operation per invocation.
//
// Exit codes: 0 success, 1 the engine refused the operation (or a
// verification failed), 2 usage or parse errors.

#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "multiverse/engine.hpp"
#include "multiverse/frame_io.hpp"
#include "multiverse/policy.hpp"
#include "multiverse/scenarios.hpp"
#include "multiverse/templates.hpp"
#include "multiverse/tunnel_codec.hpp"
#include "multiverse/util.hpp"

namespace mv = multiverse;
using nlohmann::json;

namespace {

struct GlobalOpts {
  std::string frame_path = "multiverse.frame.json";
  bool json_out = false;
  std::optional<std::int64_t> now;
  int exit_code = 0;

  mv::Timestamp clock() const {
    return now ? *now : static_cast<mv::Timestamp>(std::time(nullptr));
  }
  std::filesystem::path audit_path() const {
    return std::filesystem::path(frame_path).parent_path() / "audit.log.ndjson";
  }
};

mv::Engine open_engine(const GlobalOpts& g) {
  return mv::Engine(mv::load_frame(g.frame_path), g.audit_path());
}

void save_engine(mv::Engine& engine, const GlobalOpts& g) {
  mv::save_frame(*engine.snapshot(), g.frame_path);
}

void emit(const GlobalOpts& g, const json& j, const std::string& text) {
  if (g.json_out)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text << "\n";
}

std::string describe_resource(const mv::StoredResource& r) {
  std::string out = r.resource_id + " (" + std::to_string(r.data.size()) + " bytes)";
  out += " data=" + mv::base64_encode(r.data);
  if (r.remote()) {
    out += " origin=" + r.origin_world.value_or("?");
    out += " capacity=\"" + mv::format_tunnel(*r.capacity) + "\"";
    if (r.expires_at) out += " expires=" + std::to_string(*r.expires_at);
  } else {
    out += " origin=local";
  }
  return out;
}

// Runs a governed operation: the frame is saved success or refusal, since
// refusals may still evict copies or queue proposals.
template <typename Fn>
void governed(GlobalOpts& g, Fn&& fn) {
  mv::Engine engine = open_engine(g);
  try {
    fn(engine);
  } catch (const mv::Error&) {
    save_engine(engine, g);
    throw;
  }
  save_engine(engine, g);
}

std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw mv::Error(mv::Errc::StorageFailure, "cannot read file '" + path + "'");
  return std::vector<std::uint8_t>((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
}

void print_scenario_result(const GlobalOpts& g, const mv::ScenarioResult& r) {
  if (g.json_out) {
    json steps = json::array();
    for (const mv::StepResult& s : r.steps) {
      steps.push_back({{"note", s.note},
                       {"expected", s.expected},
                       {"outcome", s.outcome},
                       {"detail", s.detail},
                       {"matched", s.matched}});
    }
    std::cout << json{{"scenario", r.name}, {"passed", r.passed}, {"steps", steps}}
                     .dump(2)
              << "\n";
    return;
  }
  std::cout << "scenario " << r.name << ": " << (r.passed ? "pass" : "FAIL") << "\n";
  for (const mv::StepResult& s : r.steps) {
    std::cout << "  [" << (s.matched ? "ok" : "FAIL") << "] " << s.note
              << " (expected " << s.expected << ", got " << s.outcome << ")";
    if (!s.matched && !s.detail.empty()) std::cout << "\n         " << s.detail;
    std::cout << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  GlobalOpts g;

  CLI::App app{"multiverse: consent-governed data exchange between worlds"};
  app.require_subcommand(1);
  app.add_option("--frame", g.frame_path, "frame file (.frame.json)")
      ->envname("MULTIVERSE_FRAME");
  app.add_flag("--json", g.json_out, "machine-readable output");
  app.add_option("--now", g.now, "mock clock, unix seconds (default: wall clock)");

  // --- init -----------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("init", "create an empty frame file");
    auto force = std::make_shared<bool>(false);
    cmd->add_flag("--force", *force, "overwrite an existing frame");
    cmd->callback([&g, force] {
      if (!*force && std::filesystem::exists(g.frame_path))
        throw CLI::ValidationError("init", "'" + g.frame_path +
                                               "' already exists (use --force)");
      mv::save_frame(mv::Frame{}, g.frame_path);
      emit(g, json{{"ok", true}, {"frame", g.frame_path}},
           "initialized " + g.frame_path);
    });
  }

  // --- apply ----------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("apply", "apply a policy file to the frame");
    struct Args {
      std::string file;
      std::string actor;
      double rho = 0.0;
      std::uint64_t seed = 0;
    };
    auto a = std::make_shared<Args>();
    cmd->add_option("file", a->file, "policy file (.mvp)")->required();
    cmd->add_option("--actor", a->actor, "default acting agent");
    cmd->add_option("--rho", a->rho, "access risk for capacity checks");
    cmd->add_option("--seed", a->seed, "rng seed for probabilistic checks");
    cmd->callback([&g, a] {
      std::ifstream in(a->file);
      if (!in)
        throw mv::Error(mv::Errc::StorageFailure,
                        "cannot read policy file '" + a->file + "'");
      std::string text((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
      mv::PolicyDocument doc = mv::parse_policy(text);
      governed(g, [&](mv::Engine& engine) {
        mv::ApplyOptions opts;
        if (!a->actor.empty()) opts.default_actor = a->actor;
        opts.now = g.clock();
        opts.risk = mv::AccessRisk{a->rho};
        opts.rng_seed = a->seed;
        opts.base_dir = std::filesystem::path(a->file).parent_path().string();
        mv::ApplyOutcome out = mv::apply_policy(engine, doc, opts);
        json notes = json::array();
        for (const std::string& n : out.notes) notes.push_back(n);
        std::string text_out = "applied " + std::to_string(out.applied) + " statements";
        for (const std::string& n : out.notes) text_out += "\n  " + n;
        emit(g, json{{"ok", true}, {"applied", out.applied}, {"notes", notes}},
             text_out);
      });
    });
  }

  // --- access ---------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("access", "access a remote resource via a tunnel");
    struct Args {
      std::string agent, tunnel, resource, purpose, query = "read";
      std::string payload_b64, payload_file;
      double rho = 0.0;
      std::uint64_t seed = 0;
    };
    auto a = std::make_shared<Args>();
    cmd->add_option("--agent", a->agent)->required();
    cmd->add_option("--tunnel", a->tunnel, "role tunnel string")->required();
    cmd->add_option("--resource", a->resource)->required();
    cmd->add_option("--purpose", a->purpose)->required();
    cmd->add_option("--query", a->query, "read | write | delete");
    cmd->add_option("--payload-b64", a->payload_b64, "payload for write");
    cmd->add_option("--payload-file", a->payload_file, "payload file for write");
    cmd->add_option("--rho", a->rho);
    cmd->add_option("--seed", a->seed);
    cmd->callback([&g, a] {
      mv::AccessRequest req;
      req.agent = a->agent;
      req.tunnel = mv::parse_tunnel(a->tunnel);
      req.query = a->query;
      req.resource_id = a->resource;
      req.purpose = a->purpose;
      req.risk = mv::AccessRisk{a->rho};
      req.rng_seed = a->seed;
      if (!a->payload_b64.empty()) req.payload = mv::base64_decode(a->payload_b64);
      if (!a->payload_file.empty()) req.payload = read_file_bytes(a->payload_file);
      governed(g, [&](mv::Engine& engine) {
        mv::StoredResource res = engine.access_remote(req, g.clock());
        emit(g, json(res), describe_resource(res));
      });
    });
  }

  // --- read-cached ------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("read-cached",
                                   "read from the agent's own world, re-checking "
                                   "remote copies");
    struct Args {
      std::string agent, resource;
      double rho = 0.0;
      std::uint64_t seed = 0;
    };
    auto a = std::make_shared<Args>();
    cmd->add_option("--agent", a->agent)->required();
    cmd->add_option("--resource", a->resource)->required();
    cmd->add_option("--rho", a->rho);
    cmd->add_option("--seed", a->seed);
    cmd->callback([&g, a] {
      governed(g, [&](mv::Engine& engine) {
        mv::StoredResource res = engine.read_cached(
            a->agent, a->resource, mv::AccessRisk{a->rho}, a->seed, g.clock());
        emit(g, json(res), describe_resource(res));
      });
    });
  }

  // --- third-party-read -------------------------------------------------
  {
    auto* cmd = app.add_subcommand(
        "third-party-read", "read another world's resource as a third party");
    struct Args {
      std::string reader, world, resource;
      double rho = 0.0;
      std::uint64_t seed = 0;
    };
    auto a = std::make_shared<Args>();
    cmd->add_option("--reader", a->reader)->required();
    cmd->add_option("--world", a->world)->required();
    cmd->add_option("--resource", a->resource)->required();
    cmd->add_option("--rho", a->rho);
    cmd->add_option("--seed", a->seed);
    cmd->callback([&g, a] {
      governed(g, [&](mv::Engine& engine) {
        mv::StoredResource res =
            engine.third_party_read(a->reader, a->world, a->resource,
                                    mv::AccessRisk{a->rho}, a->seed, g.clock());
        emit(g, json(res), describe_resource(res));
      });
    });
  }

  // --- tunnels ----------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("tunnels",
                                   "discover (or check) role tunnels to a world");
    struct Args {
      std::string agent, target, check;
      int max_depth = 6;
      bool validate = false;
      double rho = 0.0;
      std::uint64_t seed = 0;
    };
    auto a = std::make_shared<Args>();
    cmd->add_option("--agent", a->agent)->required();
    cmd->add_option("--target", a->target, "data-holding world");
    cmd->add_option("--check", a->check, "validate this tunnel instead of discovering");
    cmd->add_option("--max-depth", a->max_depth);
    cmd->add_flag("--validate", a->validate, "validate each discovered tunnel");
    cmd->add_option("--rho", a->rho);
    cmd->add_option("--seed", a->seed);
    cmd->callback([&g, a] {
      mv::Engine engine = open_engine(g);
      mv::Timestamp now = g.clock();
      if (!a->check.empty()) {
        mv::RoleTunnel t = mv::parse_tunnel(a->check);
        mv::ValidationReport rep = engine.validate_access(
            t, a->agent, mv::AccessRisk{a->rho}, a->seed, now);
        emit(g, json(rep),
             std::string(rep.valid ? "valid " : "invalid ") + a->check +
                 (rep.failure ? "\n  " + rep.failure->reason : ""));
        if (!rep.valid) g.exit_code = 1;
        return;
      }
      if (a->target.empty())
        throw CLI::ValidationError("tunnels", "--target (or --check) is required");
      std::vector<mv::RoleTunnel> found =
          engine.discover(a->agent, a->target, a->max_depth);
      json arr = json::array();
      std::string text;
      for (const mv::RoleTunnel& t : found) {
        std::string s = mv::format_tunnel(t);
        json row{{"tunnel", s}};
        if (a->validate) {
          mv::ValidationReport rep = engine.validate_access(
              t, a->agent, mv::AccessRisk{a->rho}, a->seed, now);
          row["valid"] = rep.valid;
          s += rep.valid ? "  [valid]" : "  [invalid]";
        }
        arr.push_back(row);
        if (!text.empty()) text += "\n";
        text += s;
      }
      if (found.empty()) text = "(no tunnels)";
      emit(g, arr, text);
    });
  }

  // --- sweep ------------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("sweep", "evict lapsed remote copies in a world");
    struct Args {
      std::string actor, world;
    };
    auto a = std::make_shared<Args>();
    cmd->add_option("--actor", a->actor)->required();
    cmd->add_option("--world", a->world)->required();
    cmd->callback([&g, a] {
      governed(g, [&](mv::Engine& engine) {
        std::vector<std::string> evicted =
            engine.sweep_expired(a->actor, a->world, g.clock());
        json arr = json::array();
        std::string text = "evicted " + std::to_string(evicted.size());
        for (const std::string& id : evicted) {
          arr.push_back(id);
          text += "\n  " + id;
        }
        emit(g, json{{"ok", true}, {"evicted", arr}}, text);
      });
    });
  }

  // --- audit ------------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("audit", "inspect the audit log");
    cmd->require_subcommand(1);
    auto* verify = cmd->add_subcommand("verify", "re-hash the chain");
    verify->callback([&g] {
      mv::AuditLog::VerifyResult r = mv::AuditLog::verify_file(g.audit_path());
      json j{{"ok", r.ok}, {"checked", r.checked}};
      std::string text = r.ok ? "chain ok (" + std::to_string(r.checked) + " records)"
                              : "chain BROKEN at record " +
                                    std::to_string(r.first_bad.value_or(0)) + " of " +
                                    std::to_string(r.checked);
      if (r.first_bad) j["firstBad"] = *r.first_bad;
      emit(g, j, text);
      if (!r.ok) g.exit_code = 1;
    });
    auto* tail = cmd->add_subcommand("tail", "print the last records");
    auto n = std::make_shared<std::size_t>(10);
    tail->add_option("-n,--count", *n, "how many records");
    tail->callback([&g, n] {
      std::vector<mv::AuditRecord> records = mv::AuditLog::load_file(g.audit_path());
      std::size_t start = records.size() > *n ? records.size() - *n : 0;
      for (std::size_t i = start; i < records.size(); ++i)
        std::cout << mv::audit_record_to_json(records[i], true).dump() << "\n";
    });
  }

  // --- scenario -----------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("scenario", "run the built-in walkthroughs");
    cmd->require_subcommand(1);
    auto* list = cmd->add_subcommand("list", "list scenario names");
    list->callback([&g] {
      json arr = json::array();
      std::string text;
      for (const mv::ScenarioScript& s : mv::builtin_scenarios()) {
        arr.push_back({{"name", s.name},
                       {"steps", s.steps.size()},
                       {"summary", s.summary}});
        if (!text.empty()) text += "\n";
        text += s.name + " (" + std::to_string(s.steps.size()) + " steps): " +
                s.summary;
      }
      emit(g, arr, text);
    });
    auto* run = cmd->add_subcommand("run", "run one scenario (or all) on a scratch frame");
    struct Args {
      std::string name;
      bool all = false;
      double rho = 0.0;
      std::uint64_t seed = 0;
      std::int64_t start = 1700000000;
    };
    auto a = std::make_shared<Args>();
    run->add_option("name", a->name, "scenario name");
    run->add_flag("--all", a->all, "run every scenario");
    run->add_option("--rho", a->rho, "default access risk");
    run->add_option("--seed", a->seed);
    run->add_option("--start", a->start, "scenario clock start");
    run->callback([&g, a] {
      if (!a->all && a->name.empty())
        throw CLI::ValidationError("scenario run", "give a name or --all");
      mv::ScenarioOptions opts;
      opts.rho = a->rho;
      opts.seed = a->seed;
      opts.start = a->start;
      std::vector<const mv::ScenarioScript*> scripts;
      if (a->all) {
        for (const mv::ScenarioScript& s : mv::builtin_scenarios())
          scripts.push_back(&s);
      } else {
        scripts.push_back(&mv::builtin_scenario(a->name));
      }
      for (const mv::ScenarioScript* script : scripts) {
        mv::Engine engine;  // scratch frame, in-memory audit
        mv::ScenarioResult r = mv::run_scenario(engine, *script, opts);
        print_scenario_result(g, r);
        if (!r.passed) g.exit_code = 1;
      }
    });
  }

  // --- inspect ------------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("inspect", "print frame entities");
    cmd->require_subcommand(1);

    auto* world = cmd->add_subcommand("world", "show a world");
    auto wid = std::make_shared<std::string>();
    world->add_option("id", *wid)->required();
    world->callback([&g, wid] {
      mv::Engine engine = open_engine(g);
      mv::FrameSnapshot snap = engine.snapshot();
      const mv::World& w = snap->world_at(*wid);
      std::cout << json(w).dump(2) << "\n";
    });

    auto* tpl = cmd->add_subcommand("template", "show a template (stored and resolved)");
    auto tref = std::make_shared<std::string>();
    tpl->add_option("ref", *tref)->required();
    tpl->callback([&g, tref] {
      mv::Engine engine = open_engine(g);
      mv::FrameSnapshot snap = engine.snapshot();
      mv::TemplateId id = mv::resolve_template_ref(*snap, *tref);
      json j{{"stored", json(snap->template_at(id))},
             {"resolved", json(mv::resolve_template(*snap, id))}};
      std::cout << j.dump(2) << "\n";
    });

    auto* res = cmd->add_subcommand("resource", "show a resource");
    auto rw = std::make_shared<std::string>();
    auto rid = std::make_shared<std::string>();
    res->add_option("world", *rw)->required();
    res->add_option("id", *rid)->required();
    res->callback([&g, rw, rid] {
      mv::Engine engine = open_engine(g);
      mv::FrameSnapshot snap = engine.snapshot();
      const mv::StoredResource* r = snap->find_resource(*rw, *rid);
      if (!r)
        throw mv::Error(mv::Errc::UnknownResource,
                        "world '" + *rw + "' holds no resource '" + *rid + "'");
      if (g.json_out)
        std::cout << json(*r).dump(2) << "\n";
      else
        std::cout << describe_resource(*r) << "\n";
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const mv::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const mv::Error& e) {
    if (g.json_out)
      std::cout << json{{"ok", false},
                        {"error", std::string(mv::to_string(e.code()))},
                        {"detail", e.detail()}}
                       .dump(2)
                << "\n";
    else
      std::cerr << "denied: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return g.exit_code;
}
