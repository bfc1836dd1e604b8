// Copyright 2026 the Multiverse authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "multiverse/scenarios.hpp"

#include "multiverse/policy.hpp"
#include "multiverse/tunnel_codec.hpp"

namespace multiverse {
namespace {

ScenarioStep policy(std::string note, std::string text) {
  ScenarioStep s;
  s.kind = StepKind::Policy;
  s.note = std::move(note);
  s.policy = std::move(text);
  return s;
}

ScenarioStep policy_denied(std::string note, Errc code, std::string text) {
  ScenarioStep s = policy(std::move(note), std::move(text));
  s.expect_ok = false;
  s.expect_code = code;
  return s;
}

ScenarioStep access(std::string note, std::string agent, std::string tunnel,
                    std::string resource, std::string purpose, double rho) {
  ScenarioStep s;
  s.kind = StepKind::Access;
  s.note = std::move(note);
  s.agent = std::move(agent);
  s.tunnel = std::move(tunnel);
  s.resource_id = std::move(resource);
  s.purpose = std::move(purpose);
  s.rho = rho;
  return s;
}

ScenarioStep access_denied(std::string note, Errc code, std::string agent,
                           std::string tunnel, std::string resource,
                           std::string purpose, double rho) {
  ScenarioStep s = access(std::move(note), std::move(agent), std::move(tunnel),
                          std::move(resource), std::move(purpose), rho);
  s.expect_ok = false;
  s.expect_code = code;
  return s;
}

ScenarioStep read_cached(std::string note, std::string agent, std::string resource,
                         double rho) {
  ScenarioStep s;
  s.kind = StepKind::ReadCached;
  s.note = std::move(note);
  s.agent = std::move(agent);
  s.resource_id = std::move(resource);
  s.rho = rho;
  return s;
}

ScenarioStep read_cached_denied(std::string note, Errc code, std::string agent,
                                std::string resource, double rho) {
  ScenarioStep s = read_cached(std::move(note), std::move(agent),
                               std::move(resource), rho);
  s.expect_ok = false;
  s.expect_code = code;
  return s;
}

ScenarioStep third_party(std::string note, std::string reader, std::string world,
                         std::string resource, double rho) {
  ScenarioStep s;
  s.kind = StepKind::ThirdPartyRead;
  s.note = std::move(note);
  s.agent = std::move(reader);
  s.world = std::move(world);
  s.resource_id = std::move(resource);
  s.rho = rho;
  return s;
}

ScenarioStep third_party_denied(std::string note, Errc code, std::string reader,
                                std::string world, std::string resource,
                                double rho) {
  ScenarioStep s = third_party(std::move(note), std::move(reader),
                               std::move(world), std::move(resource), rho);
  s.expect_ok = false;
  s.expect_code = code;
  return s;
}

ScenarioStep sweep(std::string note, std::string actor, std::string world) {
  ScenarioStep s;
  s.kind = StepKind::Sweep;
  s.note = std::move(note);
  s.agent = std::move(actor);
  s.world = std::move(world);
  return s;
}

ScenarioStep advance(std::string note, std::int64_t seconds) {
  ScenarioStep s;
  s.kind = StepKind::AdvanceClock;
  s.note = std::move(note);
  s.advance_seconds = seconds;
  return s;
}

// Shared setup: a patient, their hospital, and the advising clinic the
// hospital consults. The clinic holds the diagnostic note.
constexpr const char* kReferralSetup = R"mvp(
purpose Diagnostics;
agent Ram;
agent FortisAdmin;
agent SharadaAdmin;
world Fortis owner FortisAdmin;
world Sharada owner SharadaAdmin;
template Hospital in Fortis by FortisAdmin {
  in Doctor privileges(resource.read, resource.template) purposes(Diagnostics);
  out Advisor roles(Doctor);
}
template Clinic in Sharada by SharadaAdmin {
  dap read role Advisor purposes(Diagnostics) ttl 86400;
  in Advisor constraints(source.implements(Hospital)) privileges(resource.read) purposes(Diagnostics);
}
template Person in Ram by Ram {
  out Treat as Doctor roles(Owner);
}
implement Fortis Hospital by FortisAdmin;
implement Sharada Clinic by SharadaAdmin;
implement Ram Person by Ram;
relate Ram -> Fortis via Treat by Ram;
relate Fortis -> Sharada via Advisor by FortisAdmin;
publish Sharada d ZGlhZ25vc3RpYy1ub3Rl by SharadaAdmin;
)mvp";

ScenarioScript make_referral() {
  ScenarioScript s;
  s.name = "referral";
  s.summary =
      "A patient reads the advising clinic's note through the "
      "Advisor(Sharada):Doctor(Fortis):Owner(Ram) chain.";
  s.steps.push_back(policy("wire up patient, hospital and advising clinic",
                           kReferralSetup));
  s.steps.push_back(access("patient reads the note along the referral chain",
                           "Ram", "Advisor(Sharada):Doctor(Fortis):Owner(Ram)",
                           "d", "Diagnostics", 0.0));
  return s;
}

ScenarioScript make_scenario1() {
  ScenarioScript s;
  s.name = "scenario1";
  s.summary =
      "A world cannot adopt an authority's template without a real "
      "certification chain.";
  s.steps.push_back(policy("authority publishes its certification scheme", R"mvp(
purpose Compliance;
agent RAdmin;
agent AcmeAdmin;
agent EvilAdmin;
world R owner RAdmin approval;
world Acme owner AcmeAdmin;
world Evil owner EvilAdmin;
template Authority in R by RAdmin {
  in Certified privileges(resource.template) purposes(Compliance);
}
template Protocol in R by RAdmin {
  in Member privileges(resource.read) purposes(Compliance);
}
template Application in Acme by AcmeAdmin {
  out Apply as Certified roles(Owner);
}
implement R Authority by RAdmin;
implement Acme Application by AcmeAdmin;
)mvp"));
  s.steps.push_back(policy_denied(
      "uncertified world claims the protocol with a made-up chain",
      Errc::TunnelInvalid, R"mvp(
implement Evil Protocol via "Certified(R):Owner(Evil):Owner(EvilAdmin)" ttl 86400 by EvilAdmin;
)mvp"));
  s.steps.push_back(policy_denied(
      "certification request queues behind the authority's approval gate",
      Errc::PendingApproval, R"mvp(
relate Acme -> R via Apply by AcmeAdmin;
)mvp"));
  s.steps.push_back(policy("authority approves the certification", R"mvp(
approve Acme -> R via Apply by RAdmin;
)mvp"));
  s.steps.push_back(policy("certified world may now adopt the protocol", R"mvp(
implement Acme Protocol via "Certified(R):Owner(Acme):Owner(AcmeAdmin)" ttl 2592000 by AcmeAdmin;
)mvp"));
  return s;
}

ScenarioScript make_scenario2() {
  ScenarioScript s;
  s.name = "scenario2";
  s.summary =
      "A relationship with a counterfeit hospital does not satisfy a "
      "relationship-type constraint.";
  s.steps.push_back(policy("standards body, real and fake hospitals, insurer", R"mvp(
purpose Care;
agent RAdmin;
agent FortisAdmin;
agent BogusAdmin;
agent InsureAdmin;
agent Ram;
world R owner RAdmin;
world Fortis owner FortisAdmin;
world Bogus owner BogusAdmin;
world Insure owner InsureAdmin;
template Hospital in R by RAdmin {
  in Doctor privileges(resource.read) purposes(Care);
}
template Authority in R by RAdmin {
  in Accredited privileges(resource.template) purposes(Care);
}
template Hospital in Bogus by BogusAdmin {
  in Doctor privileges(resource.read) purposes(Care);
}
template Cover in Insure by InsureAdmin {
  in Patient constraints(source.relt(Doctor, R/Hospital)) privileges(resource.read) purposes(Care);
}
template Person in Ram by Ram {
  out Doctor roles(Owner);
  out Enroll as Patient roles(Owner);
}
template Application in Fortis by FortisAdmin {
  out Accredit as Accredited roles(Owner);
}
implement R Authority by RAdmin;
implement Bogus Bogus/Hospital by BogusAdmin;
implement Insure Cover by InsureAdmin;
implement Ram Person by Ram;
implement Fortis Application by FortisAdmin;
relate Fortis -> R via Accredit by FortisAdmin;
implement Fortis R/Hospital via "Accredited(R):Owner(Fortis):Owner(FortisAdmin)" ttl 2592000 by FortisAdmin;
)mvp"));
  s.steps.push_back(policy("patient is lured into the counterfeit hospital", R"mvp(
relate Ram -> Bogus via Doctor by Ram;
)mvp"));
  s.steps.push_back(policy_denied(
      "insurer rejects enrollment: the doctor is not at an accredited hospital",
      Errc::ConstraintViolated, R"mvp(
relate Ram -> Insure via Enroll by Ram;
)mvp"));
  s.steps.push_back(policy("patient registers with the accredited hospital", R"mvp(
relate Ram -> Fortis via Doctor by Ram;
)mvp"));
  s.steps.push_back(policy("enrollment now passes the constraint", R"mvp(
relate Ram -> Insure via Enroll by Ram;
)mvp"));
  return s;
}

ScenarioScript make_scenario3() {
  ScenarioScript s;
  s.name = "scenario3";
  s.summary =
      "A co-owner may read a cached remote copy only once they satisfy every "
      "segment of its capacity themselves.";
  std::string setup = std::string(kReferralSetup) + R"mvp(
agent Priya;
addowner Ram Priya by Ram;
)mvp";
  s.steps.push_back(policy("referral chain plus a co-owner of the patient world",
                           std::move(setup)));
  s.steps.push_back(access("patient caches the note into their own world", "Ram",
                           "Advisor(Sharada):Doctor(Fortis):Owner(Ram)", "d",
                           "Diagnostics", 0.0));
  s.steps.push_back(third_party_denied(
      "co-owner without the doctor and advisor standings is refused",
      Errc::CapacityUnsatisfied, "Priya", "Ram", "d", 0.0));
  s.steps.push_back(policy("co-owner acquires both standings herself", R"mvp(
implement Priya Person via "Owner(Ram):Owner(Priya)" ttl 86400 by Priya;
relate Priya -> Fortis via Treat by Priya;
implement Priya Hospital via "Doctor(Fortis):Owner(Priya)" ttl 86400 by Priya;
relate Priya -> Sharada via Advisor by Priya;
)mvp"));
  s.steps.push_back(third_party(
      "with every capacity segment satisfied the read goes through", "Priya",
      "Ram", "d", 0.0));
  return s;
}

ScenarioScript make_scenario4() {
  ScenarioScript s;
  s.name = "scenario4";
  s.summary =
      "Remote template bindings: revocation surfaces according to the access "
      "risk, and TTLs lapse regardless of it.";
  s.steps.push_back(policy("hospital adopts the standard under certification", R"mvp(
purpose Care;
agent RAdmin;
agent FortisAdmin;
agent Ram;
world R owner RAdmin;
world Fortis owner FortisAdmin;
template Authority in R by RAdmin {
  in Certified privileges(resource.template) purposes(Care);
}
template Hospital in R by RAdmin {
  dap read role Doctor purposes(Care) ttl 86400;
  in Doctor privileges(resource.read) purposes(Care);
}
template Application in FortisAdmin by FortisAdmin {
  out Apply as Certified roles(Owner);
}
template Person in Ram by Ram {
  out Doctor roles(Owner);
}
implement R Authority by RAdmin;
implement FortisAdmin Application by FortisAdmin;
implement Ram Person by Ram;
relate FortisAdmin -> R via Apply by FortisAdmin;
implement Fortis R/Hospital via "Certified(R):Owner(FortisAdmin)" ttl 2592000 by FortisAdmin;
publish Fortis d cGF0aWVudC1yZWNvcmQ= by FortisAdmin;
relate Ram -> Fortis via Doctor by Ram;
)mvp"));
  s.steps.push_back(access("patient reads their record, checking everything",
                           "Ram", "Doctor(Fortis):Owner(Ram)", "d", "Care", 0.0));
  s.steps.push_back(policy("authority withdraws the certification", R"mvp(
revoke FortisAdmin -> R via Apply by RAdmin;
)mvp"));
  s.steps.push_back(access(
      "at risk 1 no deeper check runs, so the stale binding still serves",
      "Ram", "Doctor(Fortis):Owner(Ram)", "d", "Care", 1.0));
  s.steps.push_back(access_denied(
      "at risk 0 the capacity re-check finds the revocation and expires the binding",
      Errc::TunnelInvalid, "Ram", "Doctor(Fortis):Owner(Ram)", "d", "Care", 0.0));
  s.steps.push_back(access_denied(
      "the expiry sticks: even at risk 1 the binding stays dead",
      Errc::TunnelInvalid, "Ram", "Doctor(Fortis):Owner(Ram)", "d", "Care", 1.0));
  s.steps.push_back(policy("hospital re-certifies and re-adopts, briefly", R"mvp(
relate FortisAdmin -> R via Apply by FortisAdmin;
implement Fortis R/Hospital via "Certified(R):Owner(FortisAdmin)" ttl 3600 by FortisAdmin;
)mvp"));
  s.steps.push_back(access("fresh binding serves again", "Ram",
                           "Doctor(Fortis):Owner(Ram)", "d", "Care", 1.0));
  s.steps.push_back(advance("two hours pass, outliving the 1h binding", 7200));
  s.steps.push_back(access_denied(
      "the TTL lapse is absolute: risk 1 does not rescue an expired binding",
      Errc::TunnelInvalid, "Ram", "Doctor(Fortis):Owner(Ram)", "d", "Care", 1.0));
  s.steps.push_back(advance("two more days pass, outliving the cached copy", 172800));
  s.steps.push_back(sweep("owner sweeps the lapsed cached copy", "Ram", "Ram"));
  s.steps.push_back(read_cached_denied("the swept copy is gone",
                                       Errc::UnknownResource, "Ram", "d", 1.0));
  return s;
}

ScenarioScript make_cet() {
  ScenarioScript s;
  s.name = "cet";
  s.summary =
      "A college obtains exam scores only while a prospective-student "
      "relationship backs its request.";
  s.steps.push_back(policy("exam board, college and one student", R"mvp(
purpose Admission;
agent CETAdmin;
agent XYZAdmin;
agent A;
world CET owner CETAdmin;
world XYZ owner XYZAdmin;
template Person in A by A {
  out Apply as ProspectiveStudent roles(Owner);
}
template Board in CET by CETAdmin {
  dap read role ScoreRequester purposes(Admission) ttl 86400;
  in ScoreRequester constraints(source.relt(ProspectiveStudent, Person)) privileges(resource.read) purposes(Admission);
}
template College in XYZ by XYZAdmin {
  in ProspectiveStudent purposes(Admission);
  out Request as ScoreRequester roles(Owner);
}
implement A Person by A;
implement CET Board by CETAdmin;
implement XYZ College by XYZAdmin;
publish CET scores c2NvcmUtNzgw by CETAdmin;
)mvp"));
  s.steps.push_back(policy_denied(
      "board refuses the college: no prospective student yet",
      Errc::ConstraintViolated, R"mvp(
relate XYZ -> CET via Request by XYZAdmin;
)mvp"));
  s.steps.push_back(policy("student applies to the college", R"mvp(
relate A -> XYZ via Apply by A;
)mvp"));
  s.steps.push_back(policy("the application satisfies the board's constraint", R"mvp(
relate XYZ -> CET via Request by XYZAdmin;
)mvp"));
  s.steps.push_back(access("college pulls the scores",
                           "XYZAdmin",
                           "ScoreRequester(CET):Owner(XYZ):Owner(XYZAdmin)",
                           "scores", "Admission", 0.0));
  s.steps.push_back(policy("student withdraws; board cancels the request line", R"mvp(
revoke A -> XYZ via Apply by A;
revoke XYZ -> CET via Request by CETAdmin;
)mvp"));
  s.steps.push_back(read_cached_denied(
      "the cached scores die with the revoked capacity", Errc::CapacityRevoked,
      "XYZAdmin", "scores", 0.0));
  return s;
}

ScenarioScript make_uid() {
  ScenarioScript s;
  s.name = "uid";
  s.summary =
      "A hotel verifies a guest through the bank only after the registry "
      "admits the bank and the citizen consents.";
  s.steps.push_back(policy("registry (approval-gated), bank, hotel, citizen", R"mvp(
purpose KYC;
purpose Verification;
agent UIDAdmin;
agent ABCAdmin;
agent HIDAdmin;
agent A;
world UID owner UIDAdmin approval;
world ABC owner ABCAdmin;
world HID owner HIDAdmin;
template Registry in UID by UIDAdmin {
  dap read role Bank purposes(KYC) ttl 86400;
  in Bank privileges(resource.read) purposes(KYC);
}
template BankOps in ABC by ABCAdmin {
  dap read role Verifier purposes(Verification) ttl 3600;
  in ShareRequest purposes(KYC);
  in Verifier constraints(target.relid(ShareRequest, A)) privileges(resource.read) purposes(Verification);
  out Register as Bank roles(Owner);
}
template Person in A by A {
  out Share as ShareRequest roles(Owner);
}
template Hotel in HID by HIDAdmin {
  out Verify as Verifier roles(Owner);
}
implement UID Registry by UIDAdmin;
implement ABC BankOps by ABCAdmin;
implement A Person by A;
implement HID Hotel by HIDAdmin;
publish UID uid-A dWlkLXJlY29yZC1B by UIDAdmin;
publish ABC uid-A dWlkLXJlY29yZC1B by ABCAdmin;
)mvp"));
  s.steps.push_back(policy_denied(
      "bank's registration waits on the registry's approval",
      Errc::PendingApproval, R"mvp(
relate ABC -> UID via Register by ABCAdmin;
)mvp"));
  s.steps.push_back(policy("registry admits the bank", R"mvp(
approve ABC -> UID via Register by UIDAdmin;
)mvp"));
  s.steps.push_back(access("bank pulls the registry record for KYC", "ABCAdmin",
                           "Bank(UID):Owner(ABC):Owner(ABCAdmin)", "uid-A", "KYC",
                           0.0));
  s.steps.push_back(policy_denied(
      "hotel cannot hook into the bank before the citizen consents",
      Errc::ConstraintViolated, R"mvp(
relate HID -> ABC via Verify by HIDAdmin;
)mvp"));
  s.steps.push_back(policy("citizen files the share request with the bank", R"mvp(
relate A -> ABC via Share by A;
)mvp"));
  s.steps.push_back(policy("consent in place, the verifier line opens", R"mvp(
relate HID -> ABC via Verify by HIDAdmin;
)mvp"));
  s.steps.push_back(access("hotel verifies the guest through the bank",
                           "HIDAdmin", "Verifier(ABC):Owner(HID):Owner(HIDAdmin)",
                           "uid-A", "Verification", 0.0));
  return s;
}

ScenarioScript make_datatrust() {
  ScenarioScript s;
  s.name = "datatrust";
  s.summary =
      "An analyst reaches shared grid data for research, and only for "
      "research.";
  s.steps.push_back(policy("data trust, analytics firm and senior analyst", R"mvp(
purpose Research;
purpose Marketing;
agent ECAdmin;
agent EAAdmin;
agent Ajay;
world EnergyCompany owner ECAdmin;
world EnergyAnalytics owner EAAdmin;
template RnD in EnergyAnalytics by EAAdmin {
  in "Senior Analyst" privileges(resource.read) purposes(Research);
  out JoinResearch as Researcher roles("Senior Analyst");
}
template PublicDataSharing in EnergyCompany by ECAdmin {
  dap read role Researcher purposes(Research) ttl 86400;
  in Researcher constraints(source.implements(RnD)) privileges(resource.read) purposes(Research);
}
template Person in Ajay by Ajay {
  out Analyze as "Senior Analyst" roles(Owner);
}
implement EnergyAnalytics RnD by EAAdmin;
implement EnergyCompany PublicDataSharing by ECAdmin;
implement Ajay Person by Ajay;
publish EnergyCompany d Z3JpZC10ZWxlbWV0cnk= by ECAdmin;
relate Ajay -> EnergyAnalytics via Analyze by Ajay;
relate EnergyAnalytics -> EnergyCompany via JoinResearch by Ajay;
)mvp"));
  s.steps.push_back(access(
      "research access via the analyst chain succeeds", "Ajay",
      "Researcher(EnergyCompany):Senior Analyst(EnergyAnalytics):Owner(Ajay)",
      "d", "Research", 0.0));
  s.steps.push_back(access_denied(
      "the same chain may not serve marketing", Errc::PurposeNotPermitted,
      "Ajay",
      "Researcher(EnergyCompany):Senior Analyst(EnergyAnalytics):Owner(Ajay)",
      "d", "Marketing", 0.0));
  return s;
}

}  // namespace

ScenarioResult run_scenario(Engine& engine, const ScenarioScript& script,
                            const ScenarioOptions& options) {
  ScenarioResult result;
  result.name = script.name;
  result.passed = true;

  Timestamp now = options.start;
  std::uint64_t index = 0;
  for (const ScenarioStep& step : script.steps) {
    ++index;
    std::uint64_t seed = options.seed + index * 0x9e3779b97f4a7c15ULL;
    double rho = step.rho.value_or(options.rho);

    StepResult r;
    r.note = step.note;
    r.expected = step.expect_ok
                     ? "ok"
                     : std::string(to_string(step.expect_code.value_or(
                           Errc::PermissionDenied)));
    r.outcome = "ok";
    try {
      switch (step.kind) {
        case StepKind::AdvanceClock:
          now += step.advance_seconds;
          break;
        case StepKind::Policy: {
          PolicyDocument doc = parse_policy(step.policy);
          ApplyOptions ao;
          if (!step.agent.empty()) ao.default_actor = step.agent;
          ao.now = now;
          ao.risk = AccessRisk{rho};
          ao.rng_seed = seed;
          apply_policy(engine, doc, ao);
          break;
        }
        case StepKind::Access: {
          AccessRequest req;
          req.agent = step.agent;
          req.tunnel = parse_tunnel(step.tunnel);
          req.query = step.query;
          req.resource_id = step.resource_id;
          req.purpose = step.purpose;
          req.risk = AccessRisk{rho};
          req.rng_seed = seed;
          engine.access_remote(req, now);
          break;
        }
        case StepKind::ReadCached:
          engine.read_cached(step.agent, step.resource_id, AccessRisk{rho}, seed,
                             now);
          break;
        case StepKind::ThirdPartyRead:
          engine.third_party_read(step.agent, step.world, step.resource_id,
                                  AccessRisk{rho}, seed, now);
          break;
        case StepKind::Sweep:
          engine.sweep_expired(step.agent, step.world, now);
          break;
      }
    } catch (const Error& e) {
      r.outcome = std::string(to_string(e.code()));
      r.detail = e.detail();
    }
    r.matched = r.outcome == r.expected;
    if (!r.matched) result.passed = false;
    result.steps.push_back(std::move(r));
  }
  result.end_time = now;
  return result;
}

const std::vector<ScenarioScript>& builtin_scenarios() {
  static const std::vector<ScenarioScript> scripts = [] {
    std::vector<ScenarioScript> v;
    v.push_back(make_referral());
    v.push_back(make_scenario1());
    v.push_back(make_scenario2());
    v.push_back(make_scenario3());
    v.push_back(make_scenario4());
    v.push_back(make_cet());
    v.push_back(make_uid());
    v.push_back(make_datatrust());
    return v;
  }();
  return scripts;
}

const ScenarioScript& builtin_scenario(const std::string& name) {
  for (const ScenarioScript& s : builtin_scenarios()) {
    if (s.name == name) return s;
  }
  throw Error(Errc::ResolveError, "no scenario named '" + name + "'");
}

}  // namespace multiverse
