#include "findmy/trace_engine.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <map>
#include <mutex>
#include <thread>

#include "findmy/protocol.hpp"
#include "findmy/symbolic_provider.hpp"
#include "findmy/term_io.hpp"

namespace findmy {

using SymKeys = protocol::EpochKeys<SymbolicProvider>;
using SymMaster = protocol::MasterBeaconKey<SymbolicProvider>;

std::string_view fact_name(FactKind k) {
  switch (k) {
    case FactKind::Owner: return "Owner";
    case FactKind::Lta: return "LTA";
    case FactKind::Finder: return "Finder";
    case FactKind::Server: return "!Server";
    case FactKind::Okd: return "!Okd";
    case FactKind::Lkd: return "!Lkd";
    case FactKind::LostMode: return "LostMode";
    case FactKind::RevealD0: return "RevealToken_d0";
    case FactKind::RevealSK0: return "RevealToken_SK0";
    case FactKind::RevealDi: return "RevealToken_di";
    case FactKind::RevealSKi: return "RevealToken_ski";
    case FactKind::L2: return "L_2";
    case FactKind::Fin1: return "Fin_1";
    case FactKind::FUpload: return "F_upload";
    case FactKind::Rep: return "Rep";
  }
  return "?";
}

bool is_persistent(FactKind k) { return k == FactKind::Server || k == FactKind::Okd || k == FactKind::Lkd; }

bool is_pool(FactKind k) { return k == FactKind::Owner || k == FactKind::Lta || k == FactKind::Finder; }

std::string render(const Fact& f) {
  std::string s(fact_name(f.kind));
  s += "(";
  for (std::size_t i = 0; i < f.args.size(); ++i) s += (i ? "," : "") + render(f.args[i]);
  return s + ")";
}

std::vector<EventKind> RevealSet::kinds() const {
  std::vector<EventKind> out;
  if (d0) out.push_back(EventKind::LtkReveal_d0);
  if (sk0) out.push_back(EventKind::LtkReveal_SK0);
  if (di) out.push_back(EventKind::Reveal_di);
  if (ski) out.push_back(EventKind::Reveal_ski);
  return out;
}

bool RevealSet::enables(EventKind reveal) const {
  switch (reveal) {
    case EventKind::LtkReveal_d0: return d0;
    case EventKind::LtkReveal_SK0: return sk0;
    case EventKind::Reveal_di: return di;
    case EventKind::Reveal_ski: return ski;
    default: return false;
  }
}

void RevealSet::enable(EventKind reveal) {
  switch (reveal) {
    case EventKind::LtkReveal_d0: d0 = true; break;
    case EventKind::LtkReveal_SK0: sk0 = true; break;
    case EventKind::Reveal_di: di = true; break;
    case EventKind::Reveal_ski: ski = true; break;
    default: throw std::invalid_argument(std::string(event_name(reveal)) + " is not a reveal");
  }
}

std::string_view rule_name(RuleKind r) {
  switch (r) {
    case RuleKind::GenKeys: return "GenKeys";
    case RuleKind::Reveal_d0: return "Reveal_d0";
    case RuleKind::Reveal_SK0: return "Reveal_SK0";
    case RuleKind::L_1: return "L_1";
    case RuleKind::L_2: return "L_2";
    case RuleKind::Reveal_di: return "Reveal_di";
    case RuleKind::Reveal_ski: return "Reveal_ski";
    case RuleKind::F_1: return "F_1";
    case RuleKind::S_recv: return "S_recv";
    case RuleKind::Owner_1: return "Owner_1";
    case RuleKind::Owner_2: return "Owner_2";
  }
  return "?";
}

namespace {

Term agent(char role, std::uint32_t index) { return Term::pub(std::string(1, role) + std::to_string(index)); }

std::uint32_t agent_index(const Term& a) { return static_cast<std::uint32_t>(std::stoul(a.label().substr(1))); }

const Term& server() {
  static const Term s = Term::pub("S");
  return s;
}

std::vector<Fact> distinct(const std::multiset<Fact>& facts, FactKind kind) {
  std::vector<Fact> out;
  for (auto it = facts.begin(); it != facts.end(); it = facts.upper_bound(*it)) {
    if (it->kind == kind) out.push_back(*it);
  }
  return out;
}

std::vector<Fact> persistent_of(const std::set<Fact>& facts, FactKind kind) {
  std::vector<Fact> out;
  for (const auto& f : facts) {
    if (f.kind == kind) out.push_back(f);
  }
  return out;
}

// Candidate agents for a pool draw: only the lowest index under symmetry
// reduction, every agent otherwise.
std::vector<Fact> draws(const std::multiset<Fact>& facts, FactKind pool, bool symmetry) {
  auto all = distinct(facts, pool);
  std::sort(all.begin(), all.end(),
            [](const Fact& a, const Fact& b) { return agent_index(a.args[0]) < agent_index(b.args[0]); });
  if (symmetry && all.size() > 1) all.resize(1);
  return all;
}

SymMaster master_of(const Term& owner, const Term& lta, const Term& d0, const Term& sk0) {
  return {d0, sk0, {owner.label()}, {lta.label()}};
}

std::vector<TraceEvent> events_of(const protocol::EventLog<SymbolicProvider>& log) {
  std::vector<TraceEvent> out;
  for (const auto& e : log) out.push_back({e.kind, e.params, 0});
  return out;
}

// Products of one LTA epoch: the beacon, the finder trigger, the next-epoch
// state and the reveal tokens for the new keys.
void emit_epoch(StepInstance& st, const SymMaster& m, const SymKeys& keys, const ScenarioBounds& b,
                SymbolicProvider& prov) {
  protocol::EventLog<SymbolicProvider> log;
  auto beacon = protocol::emit_beacon(m, keys, prov, &log);
  st.events = events_of(log);
  st.outputs.push_back(beacon.p);
  Term o = Term::pub(m.owner.name), l = Term::pub(m.lta.name);
  st.produced.push_back({FactKind::Fin1, {beacon.p}});
  if (keys.epoch < b.epochs) {
    st.produced.push_back({FactKind::L2, {o, l, m.d0, m.sk0, keys.sk, Term::pub(std::to_string(keys.epoch))}});
  }
  if (b.reveals.di) st.produced.push_back({FactKind::RevealDi, {l, o, keys.d}});
  if (b.reveals.ski) st.produced.push_back({FactKind::RevealSKi, {l, o, keys.sk}});
}

void add_reveals(std::vector<StepInstance>& out, const SystemState& s, FactKind token, RuleKind rule,
                 EventKind event, std::size_t key_arg) {
  for (const auto& f : distinct(s.linear, token)) {
    StepInstance st{rule};
    st.consumed = {f};
    const Term& l = f.args[0];
    const Term& o = f.args[1];
    const Term& key = f.args[key_arg];
    if (token == FactKind::RevealD0 || token == FactKind::RevealSK0) {
      st.read = {{FactKind::Lkd, f.args}};
    }
    st.outputs = {key};
    st.events = {{event, {o, l, key}, 0}};
    st.key = std::string(rule_name(rule)) + "|" + render(f);
    out.push_back(std::move(st));
  }
}

}  // namespace

SystemState initial_state(const ScenarioBounds& b) {
  SystemState s;
  for (std::uint32_t i = 1; i <= b.sessions; ++i) {
    s.linear.insert({FactKind::Owner, {agent('O', i)}});
    s.linear.insert({FactKind::Lta, {agent('L', i)}});
  }
  for (std::uint32_t i = 1; i <= b.reports; ++i) s.linear.insert({FactKind::Finder, {agent('F', i)}});
  s.persistent.insert({FactKind::Server, {server()}});
  return s;
}

std::vector<StepInstance> enabled_steps(const SystemState& s, const ScenarioBounds& b, const EngineOptions& opt) {
  RewriteSystem rs(opt.ecdh_canonicalization);
  SymbolicProvider prov(rs);
  std::vector<StepInstance> out;
  std::unique_ptr<Deducer> injector;
  auto injectable = [&](const Term& t) {
    if (!injector) injector = std::make_unique<Deducer>(s.kb, b.injection_bound, rs);
    return injector->can_derive(t);
  };

  // GenKeys: pairing over the out-of-band channel.
  for (const auto& o : draws(s.linear, FactKind::Owner, opt.symmetry_reduction)) {
    for (const auto& l : draws(s.linear, FactKind::Lta, opt.symmetry_reduction)) {
      const Term& O = o.args[0];
      const Term& L = l.args[0];
      auto session = agent_index(L);
      Term d0 = Term::fresh("d0", session), sk0 = Term::fresh("SK0", session);
      StepInstance st{RuleKind::GenKeys};
      st.consumed = {o, l};
      st.produced = {{FactKind::Okd, {O, L, d0, sk0}}, {FactKind::Lkd, {L, O, d0, sk0}}};
      if (b.epochs > 0) st.produced.push_back({FactKind::LostMode, {L, O, d0, sk0}});
      if (b.reveals.d0) st.produced.push_back({FactKind::RevealD0, {L, O, d0, sk0}});
      if (b.reveals.sk0) st.produced.push_back({FactKind::RevealSK0, {L, O, d0, sk0}});
      st.events = {{EventKind::KeyEst, {O, L, d0, sk0}, 0}};
      st.key = opt.symmetry_reduction ? "GenKeys" : "GenKeys|" + O.label() + "|" + L.label();
      out.push_back(std::move(st));
    }
  }

  add_reveals(out, s, FactKind::RevealD0, RuleKind::Reveal_d0, EventKind::LtkReveal_d0, 2);
  add_reveals(out, s, FactKind::RevealSK0, RuleKind::Reveal_SK0, EventKind::LtkReveal_SK0, 3);

  // L_1: the first epoch, derived from the master key.
  for (const auto& f : distinct(s.linear, FactKind::LostMode)) {
    const Term &L = f.args[0], &O = f.args[1];
    auto m = master_of(O, L, f.args[2], f.args[3]);
    StepInstance st{RuleKind::L_1};
    st.consumed = {f};
    st.read = {{FactKind::Lkd, f.args}};
    emit_epoch(st, m, protocol::rotate_epoch(m, prov), b, prov);
    st.key = "L_1|" + render(f);
    out.push_back(std::move(st));
  }

  // L_2: every later epoch, from the previous epoch's symmetric key.
  for (const auto& f : distinct(s.linear, FactKind::L2)) {
    const Term &O = f.args[0], &L = f.args[1];
    auto m = master_of(O, L, f.args[2], f.args[3]);
    auto epoch = static_cast<std::uint32_t>(std::stoul(f.args[5].label()));
    SymKeys prev{epoch, f.args[4], f.args[4], f.args[4]};
    StepInstance st{RuleKind::L_2};
    st.consumed = {f};
    emit_epoch(st, m, protocol::rotate_epoch(m, prev, prov), b, prov);
    st.key = "L_2|" + render(f);
    out.push_back(std::move(st));
  }

  add_reveals(out, s, FactKind::RevealDi, RuleKind::Reveal_di, EventKind::Reveal_di, 2);
  add_reveals(out, s, FactKind::RevealSKi, RuleKind::Reveal_ski, EventKind::Reveal_ski, 2);

  // F_1: a finder picks up a beacon delivered by the intruder.
  for (const auto& fin : distinct(s.linear, FactKind::Fin1)) {
    const Term& p = fin.args[0];
    if (!injectable(p)) continue;
    for (const auto& fnd : draws(s.linear, FactKind::Finder, opt.symmetry_reduction)) {
      const Term& F = fnd.args[0];
      auto idx = agent_index(F);
      prov.set_next_fresh_id(idx);
      Term loc = Term::fresh("loc", idx), tf = Term::fresh("tF", idx);
      protocol::EventLog<SymbolicProvider> log;
      auto report = protocol::finder_make_report<SymbolicProvider>({p, {}}, loc, tf, prov, &log);
      StepInstance st{RuleKind::F_1};
      st.consumed = {fin, fnd};
      st.read = {{FactKind::Server, {server()}}};
      st.inputs = {p};
      st.outputs = {terms::tuple({report.ciphertext, report.ephemeral_pub, report.report_id})};
      st.produced = {{FactKind::FUpload, {F, server(), report.ephemeral_pub, report.report_id}}};
      st.events = events_of(log);
      st.key = "F_1|" + render(fin) + (opt.symmetry_reduction ? "" : "|" + F.label());
      out.push_back(std::move(st));
    }
  }

  // S_recv: the upload travels over the intruder's network; any derivable
  // report ciphertext may be delivered in its place.
  auto uploads = distinct(s.linear, FactKind::FUpload);
  if (!uploads.empty()) {
    TermSet subterms;
    for (const auto& t : s.kb.terms()) collect_subterms(t, subterms);
    std::vector<Term> ciphertexts;
    for (const auto& t : subterms) {
      if (t.is(Symbol::AeadEnc) && injectable(t)) ciphertexts.push_back(t);
    }
    for (const auto& up : uploads) {
      const Term &pf = up.args[2], &hid = up.args[3];
      for (const auto& c : ciphertexts) {
        Term msg = terms::tuple({c, pf, hid});
        if (!injectable(msg)) continue;
        StepInstance st{RuleKind::S_recv};
        st.consumed = {up};
        st.read = {{FactKind::Server, {server()}}};
        st.inputs = {msg};
        st.produced = {{FactKind::Rep, {up.args[1], c, pf, hid}}};
        st.events = {{EventKind::ServerRecv, {up.args[1], hid}, 0}};
        st.key = "S_recv|" + render(up) + "|" + render(c);
        out.push_back(std::move(st));
      }
    }
  }

  // Owner_1 / Owner_2: the owner fetches by hash over the authenticated
  // channel, matches against its own key list and decrypts.
  for (const auto& rep : distinct(s.linear, FactKind::Rep)) {
    const Term &c = rep.args[1], &pf = rep.args[2], &hid = rep.args[3];
    for (const auto& okd : persistent_of(s.persistent, FactKind::Okd)) {
      const Term &O = okd.args[0], &L = okd.args[1];
      auto m = master_of(O, L, okd.args[2], okd.args[3]);
      auto keys = protocol::derive_epochs(m, b.epochs, prov);
      auto match = protocol::owner_match(keys, hid, prov);
      if (!match) continue;
      StepInstance st{match->epoch == 1 ? RuleKind::Owner_1 : RuleKind::Owner_2};
      st.consumed = {rep};
      st.read = {okd};
      st.outputs = {terms::pair(O, hid)};
      st.events = {{EventKind::OwnerQuery, {O, hid}, 0}};
      protocol::LocationReport<SymbolicProvider> report{c, pf, hid, std::nullopt};
      auto result = protocol::owner_decrypt(report, *match, prov);
      if (auto* rec = std::get_if<protocol::Recovered<SymbolicProvider>>(&result)) {
        st.events.push_back({EventKind::OwnerDecrypt, {O, L, rec->location, rec->finder_time}, 0});
      }
      st.key = std::string(rule_name(st.rule)) + "|" + render(rep) + "|" + render(okd);
      out.push_back(std::move(st));
    }
  }
  return out;
}

SystemState apply(const SystemState& state, const StepInstance& step, const RewriteSystem& rs) {
  SystemState s = state;
  for (const auto& f : step.consumed) {
    auto it = s.linear.find(f);
    if (it == s.linear.end()) throw std::logic_error("step consumes a missing fact: " + render(f));
    s.linear.erase(it);
  }
  for (const auto& f : step.read) {
    if (!s.persistent.count(f)) throw std::logic_error("step reads a missing fact: " + render(f));
  }
  for (const auto& f : step.produced) {
    if (is_persistent(f.kind)) {
      s.persistent.insert(f);
    } else {
      s.linear.insert(f);
    }
  }
  std::size_t now = ++s.steps;
  bool is_reveal = step.rule == RuleKind::Reveal_d0 || step.rule == RuleKind::Reveal_SK0 ||
                   step.rule == RuleKind::Reveal_di || step.rule == RuleKind::Reveal_ski;
  if (is_reveal) {
    const auto& e = step.events.at(0);
    auto kb = reveal(s.kb, {e.kind, e.params[0], e.params[1], e.params[2], now}, s.log);
    if (!kb) throw std::logic_error("reveal fired before its key was established");
    s.kb = std::move(*kb);
  } else {
    for (const auto& m : step.outputs) s.kb.observe(m, rs);
    for (auto e : step.events) {
      e.timestamp = now;
      s.log.push_back(std::move(e));
    }
  }
  return s;
}

bool independent(const StepInstance& a, const StepInstance& b, const SystemState& state, const EngineOptions& opt) {
  for (const auto& fa : a.consumed) {
    for (const auto& fb : b.consumed) {
      if (opt.symmetry_reduction && is_pool(fa.kind) && fa.kind == fb.kind) {
        auto n = std::count_if(state.linear.begin(), state.linear.end(),
                               [&](const Fact& f) { return f.kind == fa.kind; });
        if (n >= 2) continue;
        return false;
      }
      if (fa == fb) return false;
    }
  }
  return true;
}

// ------------------------------------------------------------- execution

Execution::Execution(std::uint32_t deduction_depth, const RewriteSystem& rs) : depth_(deduction_depth), rs_(rs) {}
Execution::~Execution() = default;

void Execution::reset(SystemState initial) {
  states_.assign(1, std::move(initial));
  steps_.clear();
  deducers_.clear();
}

void Execution::push(const StepInstance& step) {
  StepInstance stamped = step;
  for (auto& e : stamped.events) e.timestamp = states_.back().steps + 1;
  states_.push_back(apply(states_.back(), stamped, rs_));
  steps_.push_back(std::move(stamped));
}

void Execution::pop() {
  states_.pop_back();
  steps_.pop_back();
  if (deducers_.size() > states_.size()) deducers_.resize(states_.size());
}

Deducer& Execution::deducer(std::size_t j) {
  if (j >= states_.size()) throw std::out_of_range("timepoint beyond the execution");
  if (deducers_.size() <= j) deducers_.resize(j + 1);
  if (!deducers_[j]) deducers_[j] = std::make_unique<Deducer>(states_[j].kb, depth_, rs_);
  return *deducers_[j];
}

bool Execution::knows(const Term& t, std::size_t j) { return deducer(j).can_derive(t); }

ProofPtr Execution::proof(const Term& t, std::size_t j) { return deducer(j).prove(t); }

// -------------------------------------------------------------- explorer

Explorer::Explorer(ScenarioBounds bounds, EngineOptions options)
    : bounds_(bounds), options_(options), rs_(options.ecdh_canonicalization) {}

ExplorationStats Explorer::run(const Visitor& visit) {
  ExplorationStats stats;
  Execution ex(bounds_.deduction_depth, rs_);
  ex.reset(initial_state(bounds_));
  dfs(ex, {}, visit, stats);
  return stats;
}

void Explorer::dfs(Execution& ex, std::vector<StepInstance> sleep, const Visitor& visit, ExplorationStats& stats) {
  auto enabled = enabled_steps(ex.state(), bounds_, options_);
  bool maximal = enabled.empty();
  ++stats.executions;
  if (maximal) {
    ++stats.maximal_traces;
    stats.trace_steps += std::max<std::size_t>(ex.length(), 1);
  }
  visit(ex, maximal);

  const bool por = options_.partial_order_reduction;
  std::vector<StepInstance> done;
  for (const auto& t : enabled) {
    if (por && std::any_of(sleep.begin(), sleep.end(), [&](const StepInstance& s) { return s.key == t.key; })) {
      continue;
    }
    std::vector<StepInstance> child_sleep;
    if (por) {
      for (const auto* set : {&sleep, &done}) {
        for (const auto& s : *set) {
          if (independent(s, t, ex.state(), options_)) child_sleep.push_back(s);
        }
      }
    }
    ex.push(t);
    dfs(ex, std::move(child_sleep), visit, stats);
    ex.pop();
    if (por) done.push_back(t);
  }
}

ExplorationStats enumerate_traces(const ScenarioBounds& bounds, const EngineOptions& options,
                                  const std::function<void(const Trace&)>& sink) {
  Explorer explorer(bounds, options);
  return explorer.run([&](Execution& ex, bool maximal) {
    if (maximal) sink(ex.trace());
  });
}

// ---------------------------------------------------------------- lemmas

std::string_view lemma_kind_name(LemmaKind k) { return k == LemmaKind::AllTraces ? "all-traces" : "exists-trace"; }

std::string_view expectation_name(Expectation e) {
  switch (e) {
    case Expectation::Verified: return "verified";
    case Expectation::TimedOut: return "timed-out";
    case Expectation::Counterexample: return "counterexample";
  }
  return "?";
}

std::optional<LemmaKind> parse_lemma_kind(std::string_view s) {
  if (s == "all-traces") return LemmaKind::AllTraces;
  if (s == "exists-trace") return LemmaKind::ExistsTrace;
  return std::nullopt;
}

std::optional<Expectation> parse_expectation(std::string_view s) {
  for (auto e : {Expectation::Verified, Expectation::TimedOut, Expectation::Counterexample}) {
    if (expectation_name(e) == s) return e;
  }
  return std::nullopt;
}

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::HoldsAtBound: return "holds-at-bound";
    case Verdict::Counterexample: return "counterexample";
    case Verdict::NoWitnessAtBound: return "no-witness-at-bound";
  }
  return "?";
}

Lemma make_lemma(std::string name, std::string text, LemmaKind kind, RevealSet reveals, Expectation expected,
                 std::string description) {
  Lemma l;
  l.name = std::move(name);
  l.description = std::move(description);
  l.kind = kind;
  l.formula = parse_formula(text);
  check_guarded(*l.formula);
  l.text = std::move(text);
  l.reveals = reveals;
  l.expected = expected;
  return l;
}

bool LemmaResult::as_expected() const {
  switch (expected) {
    case Expectation::Verified: return verdict == Verdict::Holds || verdict == Verdict::HoldsAtBound;
    case Expectation::TimedOut: return verdict == Verdict::HoldsAtBound;
    case Expectation::Counterexample: return verdict == Verdict::Counterexample;
  }
  return false;
}

namespace {

void know_atoms(const Formula& f, std::vector<const Pattern*>& out) {
  if (f.kind == Formula::Kind::Know) out.push_back(&f.patterns[0]);
  for (const auto& c : f.children) know_atoms(*c, out);
}

Witness capture(const Lemma& lemma, Execution& ex, Evaluator& ev) {
  Witness w;
  w.trace = ex.trace();
  const Formula& f = *lemma.formula;
  bool top_all = f.kind == Formula::Kind::All;
  bool top_ex = f.kind == Formula::Kind::Ex;
  if ((lemma.kind == LemmaKind::AllTraces && top_all) || (lemma.kind == LemmaKind::ExistsTrace && top_ex)) {
    if (auto env = ev.witness(f)) w.assignment = std::move(*env);
  }
  std::vector<const Pattern*> atoms;
  know_atoms(f, atoms);
  std::set<Term> seen;
  for (const auto* p : atoms) {
    if (!pattern_bound(*p, w.assignment)) continue;
    Term t = ev.instantiate(*p, w.assignment);
    if (!seen.insert(t).second) continue;
    if (auto j = ex.earliest_knowledge(t)) w.knowledge.push_back({t, *j, ex.proof(t, *j)});
  }
  return w;
}

struct Group {
  RevealSet reveals;
  std::vector<std::size_t> members;
};

}  // namespace

std::vector<LemmaResult> check_lemmas(const std::vector<Lemma>& lemmas, ScenarioBounds bounds,
                                      const EngineOptions& options, std::optional<RevealSet> reveals_override,
                                      unsigned jobs) {
  std::vector<LemmaResult> results(lemmas.size());
  std::map<RevealSet, Group> by_profile;
  for (std::size_t i = 0; i < lemmas.size(); ++i) {
    RevealSet r = reveals_override ? *reveals_override : lemmas[i].reveals;
    auto& g = by_profile[r];
    g.reveals = r;
    g.members.push_back(i);
    results[i].name = lemmas[i].name;
    results[i].expected = lemmas[i].expected;
    results[i].reveals = r;
    results[i].verdict = lemmas[i].kind == LemmaKind::AllTraces ? Verdict::HoldsAtBound : Verdict::NoWitnessAtBound;
  }
  std::vector<Group> groups;
  for (auto& [_, g] : by_profile) groups.push_back(std::move(g));

  auto run_group = [&](const Group& g) {
    auto start = std::chrono::steady_clock::now();
    ScenarioBounds b = bounds;
    b.reveals = g.reveals;
    Explorer explorer(b, options);
    std::vector<bool> decided(g.members.size(), false);
    auto stats = explorer.run([&](Execution& ex, bool) {
      Evaluator ev(ex, explorer.rewrite_system());
      for (std::size_t k = 0; k < g.members.size(); ++k) {
        if (decided[k]) continue;
        const Lemma& lemma = lemmas[g.members[k]];
        bool sat = ev.holds(*lemma.formula);
        auto& r = results[g.members[k]];
        if (lemma.kind == LemmaKind::AllTraces && !sat) {
          r.verdict = Verdict::Counterexample;
          r.witness = capture(lemma, ex, ev);
          decided[k] = true;
        } else if (lemma.kind == LemmaKind::ExistsTrace && sat) {
          r.verdict = Verdict::Holds;
          r.witness = capture(lemma, ex, ev);
          decided[k] = true;
        }
      }
    });
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (auto i : g.members) {
      results[i].stats = stats;
      results[i].seconds = secs;
    }
  };

  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(groups.size())));
  if (jobs == 1) {
    for (const auto& g : groups) run_group(g);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  std::vector<std::thread> workers;
  for (unsigned w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i; (i = next++) < groups.size();) {
        try {
          run_group(groups[i]);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (error) std::rethrow_exception(error);
  return results;
}

LemmaResult check_lemma(const Lemma& lemma, ScenarioBounds bounds, const EngineOptions& options,
                        std::optional<RevealSet> reveals_override) {
  return check_lemmas({lemma}, bounds, options, reveals_override, 1).front();
}

}  // namespace findmy
