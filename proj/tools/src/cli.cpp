#include "findmy/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <set>

#include "findmy/builtin_lemmas.hpp"
#include "findmy/term_io.hpp"

#ifndef FINDMY_VERSION
#define FINDMY_VERSION "0.0.0"
#endif

namespace findmy::cli {

std::string_view tool_version() { return FINDMY_VERSION; }

namespace {

std::uint32_t as_bound(const json& v, std::string_view key) {
  if (!v.is_number_unsigned() || v.get<std::uint64_t>() > 1000000) {
    throw ConfigError("bound '" + std::string(key) + "' must be a non-negative integer");
  }
  return v.get<std::uint32_t>();
}

void set_bound(ScenarioBounds& b, std::string_view key, std::uint32_t value) {
  if (key == "sessions") {
    b.sessions = value;
  } else if (key == "epochs") {
    b.epochs = value;
  } else if (key == "reports") {
    b.reports = value;
  } else if (key == "injection_bound") {
    b.injection_bound = value;
  } else if (key == "deduction_depth") {
    b.deduction_depth = value;
  } else {
    throw ConfigError("unknown bound '" + std::string(key) + "'");
  }
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto end = s.find(sep, start);
    if (end == std::string_view::npos) end = s.size();
    if (end > start) out.emplace_back(s.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

std::vector<std::string> string_list(const json& v, std::string_view what) {
  if (!v.is_array()) throw ConfigError(std::string(what) + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& e : v) {
    if (!e.is_string()) throw ConfigError(std::string(what) + " must be an array of strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed, std::string_view where) {
  if (!obj.is_object()) throw ConfigError(std::string(where) + " must be an object");
  for (const auto& [k, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
      throw ConfigError("unknown key '" + k + "' in " + std::string(where));
    }
  }
}

bool as_bool(const json& v, std::string_view key) {
  if (!v.is_boolean()) throw ConfigError("'" + std::string(key) + "' must be a boolean");
  return v.get<bool>();
}

Lemma custom_lemma(const json& j) {
  check_keys(j, {"name", "formula", "kind", "expected", "reveals", "description"}, "custom lemma");
  if (!j.contains("name") || !j["name"].is_string()) throw ConfigError("custom lemma needs a string 'name'");
  if (!j.contains("formula") || !j["formula"].is_string()) throw ConfigError("custom lemma needs a string 'formula'");
  auto name = j["name"].get<std::string>();
  auto kind = LemmaKind::AllTraces;
  if (j.contains("kind")) {
    auto k = j["kind"].is_string() ? parse_lemma_kind(j["kind"].get<std::string>()) : std::nullopt;
    if (!k) throw ConfigError(name + ": kind must be all-traces or exists-trace");
    kind = *k;
  }
  auto expected = Expectation::Verified;
  if (j.contains("expected")) {
    auto e = j["expected"].is_string() ? parse_expectation(j["expected"].get<std::string>()) : std::nullopt;
    if (!e) throw ConfigError(name + ": expected must be verified, timed-out or counterexample");
    expected = *e;
  }
  RevealSet reveals;
  if (j.contains("reveals")) reveals = parse_reveals(string_list(j["reveals"], name + ".reveals"));
  std::string description = j.value("description", std::string{});
  try {
    return make_lemma(name, j["formula"].get<std::string>(), kind, reveals, expected, description);
  } catch (const LemmaError& e) {
    throw ConfigError(name + ": " + e.what());
  }
}

json term_list(const std::vector<Term>& ts) {
  json out = json::array();
  for (const auto& t : ts) out.push_back(render(t));
  return out;
}

json fact_list(const std::vector<Fact>& fs) {
  json out = json::array();
  for (const auto& f : fs) out.push_back(render(f));
  return out;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::ios_base::failure("cannot open " + path.string() + " for writing");
  return f;
}

}  // namespace

RevealSet parse_reveals(const std::vector<std::string>& names) {
  RevealSet r;
  for (const auto& n : names) {
    if (n == "d0") {
      r.d0 = true;
    } else if (n == "sk0") {
      r.sk0 = true;
    } else if (n == "di") {
      r.di = true;
    } else if (n == "ski") {
      r.ski = true;
    } else {
      throw ConfigError("unknown reveal kind '" + n + "' (expected d0, sk0, di or ski)");
    }
  }
  return r;
}

std::vector<std::string> reveal_names(const RevealSet& r) {
  std::vector<std::string> out;
  if (r.d0) out.push_back("d0");
  if (r.sk0) out.push_back("sk0");
  if (r.di) out.push_back("di");
  if (r.ski) out.push_back("ski");
  return out;
}

ScenarioConfig config_from_json(const json& j) {
  check_keys(j,
             {"bounds", "reveals", "backend", "lemmas", "custom_lemmas", "output", "seed", "demo_epochs",
              "symmetry_reduction", "partial_order_reduction", "ecdh_canonicalization", "jobs"},
             "config");
  ScenarioConfig c;
  if (j.contains("bounds")) {
    check_keys(j["bounds"], {"sessions", "epochs", "reports", "injection_bound", "deduction_depth"}, "bounds");
    for (const auto& [k, v] : j["bounds"].items()) set_bound(c.bounds, k, as_bound(v, k));
  }
  if (j.contains("reveals")) c.reveals = parse_reveals(string_list(j["reveals"], "reveals"));
  if (j.contains("backend")) {
    auto b = j["backend"].is_string() ? j["backend"].get<std::string>() : "";
    if (b == "symbolic") {
      c.backend = Backend::Symbolic;
    } else if (b == "concrete") {
      c.backend = Backend::Concrete;
    } else {
      throw ConfigError("backend must be symbolic or concrete");
    }
  }
  if (j.contains("lemmas")) c.lemmas = string_list(j["lemmas"], "lemmas");
  if (j.contains("custom_lemmas")) {
    if (!j["custom_lemmas"].is_array()) throw ConfigError("custom_lemmas must be an array");
    for (const auto& l : j["custom_lemmas"]) c.custom_lemmas.push_back(custom_lemma(l));
  }
  if (j.contains("output")) {
    const auto& o = j["output"];
    check_keys(o, {"report", "trace_dump", "store"}, "output");
    auto path = [&](const char* key) -> std::optional<std::filesystem::path> {
      if (!o.contains(key)) return std::nullopt;
      if (!o[key].is_string()) throw ConfigError(std::string("output.") + key + " must be a string");
      return std::filesystem::path(o[key].get<std::string>());
    };
    c.report_path = path("report");
    c.dump_path = path("trace_dump");
    c.store_path = path("store");
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw ConfigError("seed must be a non-negative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("demo_epochs")) c.demo_epochs = as_bound(j["demo_epochs"], "demo_epochs");
  if (j.contains("symmetry_reduction")) c.options.symmetry_reduction = as_bool(j["symmetry_reduction"], "symmetry_reduction");
  if (j.contains("partial_order_reduction")) {
    c.options.partial_order_reduction = as_bool(j["partial_order_reduction"], "partial_order_reduction");
  }
  if (j.contains("ecdh_canonicalization")) {
    c.options.ecdh_canonicalization = as_bool(j["ecdh_canonicalization"], "ecdh_canonicalization");
  }
  if (j.contains("jobs")) {
    c.jobs = as_bound(j["jobs"], "jobs");
    if (c.jobs == 0) throw ConfigError("jobs must be at least 1");
  }
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

json config_to_json(const ScenarioConfig& c) {
  json j;
  j["bounds"] = {{"sessions", c.bounds.sessions},
                 {"epochs", c.bounds.epochs},
                 {"reports", c.bounds.reports},
                 {"injection_bound", c.bounds.injection_bound},
                 {"deduction_depth", c.bounds.deduction_depth}};
  j["reveals"] = c.reveals ? json(reveal_names(*c.reveals)) : json(nullptr);
  j["backend"] = c.backend == Backend::Symbolic ? "symbolic" : "concrete";
  j["symmetry_reduction"] = c.options.symmetry_reduction;
  j["partial_order_reduction"] = c.options.partial_order_reduction;
  j["ecdh_canonicalization"] = c.options.ecdh_canonicalization;
  return j;
}

void apply_bound(ScenarioConfig& c, std::string_view assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string_view::npos) throw ConfigError("--bounds expects KEY=VAL, got '" + std::string(assignment) + "'");
  auto key = assignment.substr(0, eq);
  auto val = std::string(assignment.substr(eq + 1));
  if (key == "reveals") {
    c.reveals = parse_reveals(split(val, ','));
    return;
  }
  if (val.empty() || val.find_first_not_of("0123456789") != std::string::npos || val.size() > 7) {
    throw ConfigError("bound '" + std::string(key) + "' must be a non-negative integer");
  }
  set_bound(c.bounds, key, static_cast<std::uint32_t>(std::stoul(val)));
}

std::vector<Lemma> selected_lemmas(const ScenarioConfig& c) {
  std::map<std::string, const Lemma*> custom;
  for (const auto& l : c.custom_lemmas) custom[l.name] = &l;
  std::vector<Lemma> out;
  if (c.lemmas.empty()) {
    for (const auto& l : builtin_lemmas()) {
      if (!custom.count(l.name)) out.push_back(l);
    }
    for (const auto& l : c.custom_lemmas) out.push_back(l);
    return out;
  }
  std::set<std::string> seen;
  for (const auto& name : c.lemmas) {
    if (!seen.insert(name).second) continue;
    if (auto it = custom.find(name); it != custom.end()) {
      out.push_back(*it->second);
    } else if (const auto* b = find_builtin_lemma(name)) {
      out.push_back(*b);
    } else {
      throw ConfigError("unknown lemma '" + name + "'");
    }
  }
  return out;
}

json proof_json(const ProofNode& p) {
  json j;
  j["conclusion"] = render(p.conclusion);
  j["rule"] = proof_rule_name(p.rule);
  if (p.rule == ProofRule::Compose) j["symbol"] = std::string(symbol_info(p.symbol).name);
  j["height"] = p.height;
  json premises = json::array();
  for (const auto& q : p.premises) premises.push_back(proof_json(*q));
  j["premises"] = std::move(premises);
  return j;
}

json step_json(const StepInstance& s, std::size_t index) {
  json actions = json::array();
  for (const auto& e : s.events) {
    actions.push_back({{"event", event_name(e.kind)}, {"params", term_list(e.params)}, {"timestamp", e.timestamp}});
  }
  return {{"step", index},           {"rule", rule_name(s.rule)},      {"actions", std::move(actions)},
          {"consumed", fact_list(s.consumed)}, {"read", fact_list(s.read)}, {"produced", fact_list(s.produced)},
          {"inputs", term_list(s.inputs)},     {"outputs", term_list(s.outputs)}};
}

json result_json(const Lemma& lemma, const LemmaResult& r, bool timing) {
  json j;
  j["lemma"] = r.name;
  j["description"] = lemma.description;
  j["kind"] = lemma_kind_name(lemma.kind);
  j["formula"] = lemma.text;
  j["reveals"] = reveal_names(r.reveals);
  j["expected"] = expectation_name(r.expected);
  j["verdict"] = verdict_name(r.verdict);
  j["as_expected"] = r.as_expected();
  if (r.expected == Expectation::TimedOut) {
    j["bounded_only"] = true;
    j["note"] =
        "no unbounded proof is known for this property; the verdict covers only executions within the "
        "configured bounds and is strictly weaker than an unbounded result";
  }
  j["stats"] = {{"executions", r.stats.executions}, {"maximal_traces", r.stats.maximal_traces}};
  if (r.witness) {
    json w;
    json trace = json::array();
    for (std::size_t i = 0; i < r.witness->trace.size(); ++i) trace.push_back(step_json(r.witness->trace[i], i + 1));
    w["trace"] = std::move(trace);
    json assignment = json::object();
    for (const auto& [k, v] : r.witness->assignment) assignment[k] = render(v);
    w["assignment"] = std::move(assignment);
    json knowledge = json::array();
    for (const auto& k : r.witness->knowledge) {
      knowledge.push_back(
          {{"term", render(k.term)}, {"time", k.time}, {"proof", k.proof ? proof_json(*k.proof) : json(nullptr)}});
    }
    w["knowledge"] = std::move(knowledge);
    j[r.verdict == Verdict::Counterexample ? "counterexample" : "witness"] = std::move(w);
  }
  if (timing) j["seconds"] = r.seconds;
  return j;
}

json verdict_report(const ScenarioConfig& c, const std::vector<Lemma>& lemmas, const std::vector<LemmaResult>& results) {
  json report;
  report["tool"] = {{"name", "findmy_verif"}, {"version", std::string(tool_version())}};
  report["config"] = config_to_json(c);
  json mismatches = json::array();
  json items = json::array();
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (!results[i].as_expected()) mismatches.push_back(results[i].name);
    items.push_back(result_json(lemmas[i], results[i], c.timing));
  }
  report["summary"] = {{"checked", results.size()},
                       {"as_expected", results.size() - mismatches.size()},
                       {"mismatches", mismatches},
                       {"exit_status", mismatches.empty() ? kExitOk : kExitRegression}};
  report["results"] = std::move(items);
  return report;
}

int cmd_verify(const ScenarioConfig& c, std::ostream& out, std::ostream& err) {
  std::vector<Lemma> lemmas;
  try {
    if (c.backend == Backend::Concrete) {
      throw ConfigError("lemma checks need the symbolic backend: K atoms have no concrete meaning");
    }
    lemmas = selected_lemmas(c);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  auto start = std::chrono::steady_clock::now();
  auto results = check_lemmas(lemmas, c.bounds, c.options, c.reveals, c.jobs);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  auto report = verdict_report(c, lemmas, results);

  for (const auto& r : results) {
    err << r.name << ": " << verdict_name(r.verdict) << " (expected " << expectation_name(r.expected) << ")"
        << (r.as_expected() ? "" : "  MISMATCH") << "\n";
  }
  err << "checked " << results.size() << " lemmas in " << secs << " s\n";

  try {
    if (c.report_path) {
      auto f = open_output(*c.report_path);
      f << report.dump(2) << "\n";
    } else {
      out << report.dump(2) << "\n";
    }
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return report["summary"]["exit_status"].get<int>();
}

ExplorationStats write_trace_dump(const ScenarioConfig& c, std::ostream& out) {
  ScenarioBounds b = c.bounds;
  b.reveals = c.reveals.value_or(RevealSet::none());
  std::size_t index = 0;
  return enumerate_traces(b, c.options, [&](const Trace& t) {
    if (t.empty()) {
      json line = {{"trace", index},          {"step", 0},           {"rule", nullptr},
                   {"event", nullptr},        {"params", json::array()}, {"actions", json::array()},
                   {"consumed", json::array()}, {"produced", json::array()}};
      out << line.dump() << "\n";
    }
    for (std::size_t i = 0; i < t.size(); ++i) {
      const auto& s = t[i];
      json actions = json::array();
      for (const auto& e : s.events) actions.push_back({{"event", event_name(e.kind)}, {"params", term_list(e.params)}});
      json line;
      line["trace"] = index;
      line["step"] = i + 1;
      line["rule"] = rule_name(s.rule);
      line["event"] = s.events.empty() ? json(nullptr) : json(event_name(s.events[0].kind));
      line["params"] = s.events.empty() ? json::array() : term_list(s.events[0].params);
      line["actions"] = std::move(actions);
      line["consumed"] = fact_list(s.consumed);
      line["produced"] = fact_list(s.produced);
      out << line.dump() << "\n";
    }
    ++index;
  });
}

int cmd_dump_traces(const ScenarioConfig& c, std::ostream& out, std::ostream& err) {
  if (c.backend != Backend::Symbolic) {
    err << "error: trace dumps need the symbolic backend\n";
    return kExitUsage;
  }
  try {
    ExplorationStats stats;
    if (c.dump_path) {
      auto f = open_output(*c.dump_path);
      stats = write_trace_dump(c, f);
      f.flush();
      if (!f) throw std::ios_base::failure("write to " + c.dump_path->string() + " failed");
    } else {
      stats = write_trace_dump(c, out);
    }
    err << "traces: " << stats.maximal_traces << ", records: " << stats.trace_steps
        << ", executions explored: " << stats.executions << "\n";
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitOk;
}

// ------------------------------------------------------------ report store

void FileReportStore::store(const protocol::LocationReport<crypto::ConcreteProvider>& report,
                            std::uint64_t upload_time) {
  std::ofstream f(path_, std::ios::binary | std::ios::app);
  if (!f) throw std::ios_base::failure("cannot open report store " + path_.string());
  json line = {{"report_id", crypto::to_hex(report.report_id)},
               {"ephemeral_pub", crypto::to_hex(report.ephemeral_pub.x962)},
               {"ciphertext", crypto::to_hex(report.ciphertext)},
               {"upload_time", upload_time}};
  f << line.dump() << "\n";
  if (!f.flush()) throw std::ios_base::failure("write to report store " + path_.string() + " failed");
}

std::vector<protocol::LocationReport<crypto::ConcreteProvider>> FileReportStore::fetch(
    const protocol::OwnerSession& session, const crypto::Digest& report_id) const {
  if (!session.authenticated) throw protocol::AuthenticationRequired(session.owner.name + " is not authenticated");
  std::vector<protocol::LocationReport<crypto::ConcreteProvider>> out;
  std::ifstream f(path_);
  if (!f) return out;
  auto wanted = crypto::to_hex(report_id);
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    auto j = json::parse(line);
    if (j.at("report_id").get<std::string>() != wanted) continue;
    protocol::LocationReport<crypto::ConcreteProvider> r;
    auto id = crypto::from_hex(j.at("report_id").get<std::string>());
    auto pub = crypto::from_hex(j.at("ephemeral_pub").get<std::string>());
    if (id.size() != r.report_id.size() || pub.size() != r.ephemeral_pub.x962.size()) {
      throw std::runtime_error("malformed record in " + path_.string());
    }
    std::copy(id.begin(), id.end(), r.report_id.begin());
    std::copy(pub.begin(), pub.end(), r.ephemeral_pub.x962.begin());
    r.ciphertext = crypto::from_hex(j.at("ciphertext").get<std::string>());
    r.upload_time = j.at("upload_time").get<std::uint64_t>();
    out.push_back(std::move(r));
  }
  return out;
}

// -------------------------------------------------------------------- demo

namespace {

const char* failure_name(protocol::DecryptFailure f) {
  switch (f) {
    case protocol::DecryptFailure::Authentication: return "authentication";
    case protocol::DecryptFailure::Framing: return "framing";
    case protocol::DecryptFailure::InnerCipher: return "inner cipher";
  }
  return "?";
}

template <class F>
auto stage(const char* name, F&& f) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

}  // namespace

DemoResult run_demo(std::uint64_t seed, std::uint32_t epochs, const std::filesystem::path& store_path) {
  using P = crypto::ConcreteProvider;
  if (epochs == 0) throw StageError("config", "at least one epoch is needed");
  P prov(crypto::RandomSource::seeded(seed));
  DemoResult res;
  auto line = [&](const std::string& key, const std::string& value) { res.transcript.push_back(key + " " + value); };
  line("seed", std::to_string(seed));

  protocol::AgentId owner{"O1"}, lta{"L1"};
  auto master = stage("pair", [&] {
    protocol::RoleRegistry roles;
    roles.grant(owner, protocol::Role::Owner);
    roles.grant(lta, protocol::Role::Lta);
    return protocol::pair_devices(owner, lta, roles, prov);
  });
  line("pair.d0", prov.param(master.d0));
  line("pair.SK0", prov.param(master.sk0));

  protocol::LostDevice<P> device(master);
  device.enter_lost_mode();
  for (std::uint32_t i = 1; i <= epochs; ++i) {
    const auto& k = stage("rotate", [&]() -> const protocol::EpochKeys<P>& { return device.rotate(prov); });
    auto prefix = "epoch." + std::to_string(i);
    line(prefix + ".SK", prov.param(k.sk));
    line(prefix + ".d", prov.param(k.d));
    line(prefix + ".p", prov.param(k.p));
  }
  auto beacon = stage("beacon", [&] { return device.emit(prov); });
  line("beacon.p", prov.param(beacon.p));

  res.location = prov.rng().bytes(16);
  res.finder_time = prov.rng().next_u64();
  line("finder.location", crypto::to_hex(res.location));
  line("finder.time", std::to_string(res.finder_time));
  auto report = stage("seal", [&] { return protocol::finder_make_report(beacon, res.location, res.finder_time, prov); });
  line("report.id", prov.param(report.report_id));
  line("report.ephemeral_pub", prov.param(report.ephemeral_pub));
  line("report.ciphertext", prov.param(report.ciphertext));

  FileReportStore store(store_path);
  stage("store", [&] {
    store.store(report, epochs);
    return 0;
  });

  auto keys = stage("derive", [&] { return protocol::derive_epochs(master, epochs, prov); });
  if (!(keys.back() == *device.current())) throw StageError("derive", "owner and LTA key schedules disagree");
  auto match = stage("match", [&] { return protocol::owner_match(keys, report.report_id, prov); });
  if (!match) throw StageError("match", "no owner key hashes to the report id");
  line("owner.matched_epoch", std::to_string(match->epoch));

  auto fetched = stage("fetch", [&] { return store.fetch({owner, true}, report.report_id); });
  if (fetched.empty()) throw StageError("fetch", "report not found in " + store_path.string());
  auto result = stage("decrypt", [&] { return protocol::owner_decrypt(fetched.back(), *match, prov); });
  if (auto* f = std::get_if<protocol::DecryptFailure>(&result)) {
    throw StageError("decrypt", std::string("owner decryption failed: ") + failure_name(*f));
  }
  const auto& rec = std::get<protocol::Recovered<P>>(result);
  line("owner.location", crypto::to_hex(rec.location));
  line("owner.time", std::to_string(rec.finder_time));
  if (rec.location != res.location || rec.finder_time != res.finder_time) {
    throw StageError("verify", "recovered location or time differs from the finder's");
  }

  auto other = epochs >= 2 ? keys[epochs - 2] : protocol::derive_epochs(master, 2, prov)[1];
  auto cross = stage("cross-epoch", [&] { return protocol::owner_decrypt(report, other, prov); });
  auto* rejected = std::get_if<protocol::DecryptFailure>(&cross);
  if (!rejected) throw StageError("cross-epoch", "epoch " + std::to_string(other.epoch) + " keys decrypted the report");
  line("cross_epoch", "epoch " + std::to_string(other.epoch) + " keys rejected (" + failure_name(*rejected) + ")");
  line("result", "ok");
  return res;
}

int cmd_demo(const ScenarioConfig& c, std::ostream& out, std::ostream& err) {
  auto store = c.store_path.value_or("findmy_reports.jsonl");
  try {
    auto res = run_demo(c.seed, c.demo_epochs, store);
    for (const auto& l : res.transcript) out << l << "\n";
    return kExitOk;
  } catch (const StageError& e) {
    err << "demo failed at stage " << e.stage() << ": " << e.what() << "\n";
    return kExitRegression;
  }
}

std::optional<unsigned> jobs_from_env() {
  const char* v = std::getenv("FINDMY_VERIF_JOBS");
  if (!v || !*v) return std::nullopt;
  std::string s(v);
  if (s.find_first_not_of("0123456789") != std::string::npos || s.size() > 4 || std::stoul(s) == 0) {
    throw ConfigError("FINDMY_VERIF_JOBS must be a positive integer");
  }
  return static_cast<unsigned>(std::stoul(s));
}

}  // namespace findmy::cli
