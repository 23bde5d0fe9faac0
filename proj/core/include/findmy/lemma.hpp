#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "findmy/adversary.hpp"
#include "findmy/events.hpp"
#include "findmy/term.hpp"

namespace findmy {

class LemmaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Message pattern inside a formula: a variable, the wildcard `_`, a quoted
/// public constant, a pair, or a constructor/destructor application.
struct Pattern {
  enum class Kind { Var, Wildcard, Const, App };
  Kind kind = Kind::Wildcard;
  std::string name;           // Var / Const
  Symbol symbol = Symbol::Pair;  // App
  std::vector<Pattern> args;
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct QuantVar {
  std::string name;
  bool time = false;
};

struct Formula {
  enum class Kind { All, Ex, Implies, Or, And, Not, Event, Know, Less, TimeEq, TermEq };
  Kind kind;
  std::vector<QuantVar> vars;        // All / Ex
  std::vector<FormulaPtr> children;  // connectives and quantifier body
  EventKind event = EventKind::KeyEst;
  std::vector<Pattern> patterns;  // Event params, Know term, TermEq sides
  std::string time;               // Event / Know timepoint
  std::string lhs_time, rhs_time;  // Less / TimeEq
};

/// Parses Tamarin-style trace formulas:
///
///   All O L d0 #i. LPFS1(L, O, d0, _, _, _) @ #i ==>
///     (not (Ex #j. K(d0) @ #j)) | (Ex #k. LtkReveal_d0(O, L, d0) @ #k)
///
/// Connectives by increasing binding strength: ==>, |, &, not. Quantifier
/// bodies extend as far right as possible. Timepoint variables carry a `#`
/// at declaration and may drop it at use.
FormulaPtr parse_formula(std::string_view text);
std::string render(const Formula& f);

/// Rejects formulas with free variables or with quantified variables that
/// no event atom, K atom or equation can bind.
void check_guarded(const Formula& f);

/// Read access to one execution for formula evaluation. Timepoints are
/// step indices 1..length(); K atoms may also refer to 0, the initial state.
class TraceView {
 public:
  virtual ~TraceView() = default;
  virtual std::size_t length() const = 0;
  virtual const std::vector<TraceEvent>& events() const = 0;
  /// Knowledge after step `j` (0 = before any step) within the deduction bound.
  virtual bool knows(const Term& t, std::size_t j) = 0;
  /// Earliest `j` with knows(t, j), if any. Knowledge only grows.
  virtual std::optional<std::size_t> earliest_knowledge(const Term& t);
  virtual ProofPtr proof(const Term& t, std::size_t j) = 0;
};

struct Value {
  bool is_time = false;
  Term term = Term::pub("_");
  std::size_t time = 0;

  bool operator==(const Value&) const = default;
};

using Env = std::map<std::string, Value>;

std::string render(const Value& v);

/// Guarded evaluator: event atoms, unanchored K atoms and equations with one
/// unbound side act as generators for existential search; universal
/// quantifiers are evaluated as negated existentials.
class Evaluator {
 public:
  Evaluator(TraceView& trace, const RewriteSystem& rs = RewriteSystem::standard()) : trace_(trace), rs_(rs) {}

  bool holds(const Formula& f, const Env& env = {});
  /// For a top-level All: an assignment of its variables that falsifies
  /// the body. For a top-level Ex: an assignment that satisfies it.
  std::optional<Env> witness(const Formula& f, const Env& env = {});

  Term instantiate(const Pattern& p, const Env& env) const;

 private:
  using Sink = std::function<bool(const Env&)>;

  bool search(std::vector<FormulaPtr> conjuncts, const Env& env, const Sink& sink);
  bool match(const Pattern& p, const Term& t, Env& env) const;

  TraceView& trace_;
  const RewriteSystem& rs_;
};

/// Free variable names of a formula (timepoints included).
std::vector<std::string> free_variables(const Formula& f);
bool pattern_bound(const Pattern& p, const Env& env);

}  // namespace findmy
