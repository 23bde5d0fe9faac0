#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "findmy/adversary.hpp"
#include "findmy/events.hpp"
#include "findmy/lemma.hpp"
#include "findmy/rewrite.hpp"
#include "findmy/term.hpp"

namespace findmy {

enum class FactKind {
  Owner,
  Lta,
  Finder,
  Server,     // persistent
  Okd,        // persistent
  Lkd,        // persistent
  LostMode,
  RevealD0,   // one-shot reveal tokens
  RevealSK0,
  RevealDi,
  RevealSKi,
  L2,
  Fin1,
  FUpload,
  Rep,
};

std::string_view fact_name(FactKind k);
bool is_persistent(FactKind k);
/// Role facts drawn from the initial agent pools.
bool is_pool(FactKind k);

struct Fact {
  FactKind kind;
  std::vector<Term> args;

  auto operator<=>(const Fact&) const = default;
  bool operator==(const Fact&) const = default;
};

std::string render(const Fact& f);

/// Which key-reveal rules are part of the model.
struct RevealSet {
  bool d0 = false;
  bool sk0 = false;
  bool di = false;
  bool ski = false;

  static RevealSet none() { return {}; }
  static RevealSet all() { return {true, true, true, true}; }
  bool empty() const { return !(d0 || sk0 || di || ski); }
  std::vector<EventKind> kinds() const;
  bool enables(EventKind reveal) const;
  void enable(EventKind reveal);

  auto operator<=>(const RevealSet&) const = default;
};

struct ScenarioBounds {
  std::uint32_t sessions = 1;
  std::uint32_t epochs = 3;
  std::uint32_t reports = 2;
  RevealSet reveals;
  /// Proof height allowed for messages the intruder feeds to In slots.
  std::uint32_t injection_bound = 4;
  /// Proof height used for K atoms.
  std::uint32_t deduction_depth = 6;

  bool operator==(const ScenarioBounds&) const = default;
};

struct EngineOptions {
  /// Agents are drawn lowest-index-first from their pools.
  bool symmetry_reduction = true;
  /// Sleep sets over steps with disjoint linear premises.
  bool partial_order_reduction = true;
  bool ecdh_canonicalization = true;
};

enum class RuleKind { GenKeys, Reveal_d0, Reveal_SK0, L_1, L_2, Reveal_di, Reveal_ski, F_1, S_recv, Owner_1, Owner_2 };
std::string_view rule_name(RuleKind r);

/// A fully instantiated rule firing.
struct StepInstance {
  RuleKind rule;
  std::vector<Fact> consumed;
  std::vector<Fact> read;
  std::vector<Fact> produced;
  std::vector<Term> inputs;
  std::vector<Term> outputs;
  std::vector<TraceEvent> events;  // timestamps set by apply()
  /// Identity used by partial-order reduction; the agent drawn from a pool
  /// is left out when symmetry reduction is on.
  std::string key;
};

struct SystemState {
  std::multiset<Fact> linear;
  std::set<Fact> persistent;
  KnowledgeBase kb;
  std::vector<TraceEvent> log;
  std::size_t steps = 0;
};

SystemState initial_state(const ScenarioBounds& bounds);

/// All rule instances enabled in `state`, in a canonical order.
std::vector<StepInstance> enabled_steps(const SystemState& state, const ScenarioBounds& bounds,
                                        const EngineOptions& options = {});

/// Fires `step`; its events are stamped with the new step index.
SystemState apply(const SystemState& state, const StepInstance& step, const RewriteSystem& rs);

/// Steps enabled together in `state` that commute: disjoint linear premises,
/// with pool draws counted as disjoint while the pool has two or more agents.
bool independent(const StepInstance& a, const StepInstance& b, const SystemState& state, const EngineOptions& options);

/// The steps of one execution, events stamped.
using Trace = std::vector<StepInstance>;

/// The execution currently under exploration.
class Execution : public TraceView {
 public:
  Execution(std::uint32_t deduction_depth, const RewriteSystem& rs);
  ~Execution() override;

  std::size_t length() const override { return steps_.size(); }
  const std::vector<TraceEvent>& events() const override { return states_.back().log; }
  bool knows(const Term& t, std::size_t j) override;
  ProofPtr proof(const Term& t, std::size_t j) override;

  const SystemState& state() const { return states_.back(); }
  const Trace& trace() const { return steps_; }

  void reset(SystemState initial);
  void push(const StepInstance& step);
  void pop();

 private:
  Deducer& deducer(std::size_t j);

  std::uint32_t depth_;
  const RewriteSystem& rs_;
  std::vector<SystemState> states_;
  Trace steps_;
  std::vector<std::unique_ptr<Deducer>> deducers_;
};

struct ExplorationStats {
  std::size_t executions = 0;      // every explored prefix, the empty one included
  std::size_t maximal_traces = 0;  // executions with no enabled step
  std::size_t trace_steps = 0;     // records in a trace dump: max(length, 1) per maximal trace

  bool operator==(const ExplorationStats&) const = default;
};

/// Depth-first enumeration of the bounded executions. The visitor sees every
/// explored prefix; `maximal` marks executions with nothing left to fire.
class Explorer {
 public:
  using Visitor = std::function<void(Execution& execution, bool maximal)>;

  Explorer(ScenarioBounds bounds, EngineOptions options);

  const ScenarioBounds& bounds() const { return bounds_; }
  const EngineOptions& options() const { return options_; }
  const RewriteSystem& rewrite_system() const { return rs_; }

  ExplorationStats run(const Visitor& visit);

 private:
  void dfs(Execution& ex, std::vector<StepInstance> sleep, const Visitor& visit, ExplorationStats& stats);

  ScenarioBounds bounds_;
  EngineOptions options_;
  RewriteSystem rs_;
};

/// Streams every maximal trace.
ExplorationStats enumerate_traces(const ScenarioBounds& bounds, const EngineOptions& options,
                                  const std::function<void(const Trace&)>& sink);

// ------------------------------------------------------------------ lemmas

enum class LemmaKind { AllTraces, ExistsTrace };
/// What a lemma run is expected to produce: a proof (at the bound), only a
/// bounded result, or an attack.
enum class Expectation { Verified, TimedOut, Counterexample };

std::string_view lemma_kind_name(LemmaKind k);
std::string_view expectation_name(Expectation e);
std::optional<LemmaKind> parse_lemma_kind(std::string_view s);
std::optional<Expectation> parse_expectation(std::string_view s);

struct Lemma {
  std::string name;
  std::string description;
  LemmaKind kind = LemmaKind::AllTraces;
  std::string text;
  FormulaPtr formula;
  /// Reveal rules this lemma is checked under unless the scenario overrides.
  RevealSet reveals;
  Expectation expected = Expectation::Verified;
};

/// Parses and guard-checks `text`; throws LemmaError.
Lemma make_lemma(std::string name, std::string text, LemmaKind kind, RevealSet reveals,
                 Expectation expected = Expectation::Verified, std::string description = {});

enum class Verdict { Holds, HoldsAtBound, Counterexample, NoWitnessAtBound };
std::string_view verdict_name(Verdict v);

struct KnowledgeWitness {
  Term term;
  std::size_t time = 0;
  ProofPtr proof;
};

/// The execution and assignment that falsify an AllTraces lemma or satisfy
/// an ExistsTrace one, with proofs for the intruder knowledge involved.
struct Witness {
  Trace trace;
  Env assignment;
  std::vector<KnowledgeWitness> knowledge;
};

struct LemmaResult {
  std::string name;
  Verdict verdict = Verdict::HoldsAtBound;
  Expectation expected = Expectation::Verified;
  RevealSet reveals;
  ExplorationStats stats;
  std::optional<Witness> witness;
  double seconds = 0;

  /// Verified: holds or holds at the bound. TimedOut: holds at the bound.
  /// Counterexample: a counterexample was found.
  bool as_expected() const;
};

/// Checks each lemma under its own reveal profile, or under `reveals_override`
/// when given. Lemmas sharing a profile share one exploration; up to `jobs`
/// explorations run concurrently. Results come back in input order.
std::vector<LemmaResult> check_lemmas(const std::vector<Lemma>& lemmas, ScenarioBounds bounds,
                                      const EngineOptions& options, std::optional<RevealSet> reveals_override = {},
                                      unsigned jobs = 1);

LemmaResult check_lemma(const Lemma& lemma, ScenarioBounds bounds, const EngineOptions& options,
                        std::optional<RevealSet> reveals_override = {});

}  // namespace findmy
