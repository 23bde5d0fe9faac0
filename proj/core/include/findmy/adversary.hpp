#pragma once

#include <cstddef>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "findmy/events.hpp"
#include "findmy/rewrite.hpp"
#include "findmy/term.hpp"

namespace findmy {

/// Everything the intruder has seen. Public names are known implicitly and
/// are not stored.
class KnowledgeBase {
 public:
  KnowledgeBase() = default;

  /// Adds the normal form of `msg`.
  void observe(const Term& msg, const RewriteSystem& rs = RewriteSystem::standard());
  bool contains(const Term& t) const { return base_.count(t) > 0; }
  const TermSet& terms() const { return base_; }
  std::size_t size() const { return base_.size(); }
  bool subset_of(const KnowledgeBase& other) const;

  bool operator==(const KnowledgeBase&) const = default;

 private:
  TermSet base_;
};

struct RevealEvent {
  EventKind kind;  // LtkReveal_d0, LtkReveal_SK0, Reveal_di or Reveal_ski
  Term owner;
  Term lta;
  Term key;
  std::size_t timestamp = 0;
};

/// True if the key named by `ev` was established earlier in `log`: a KeyEst
/// for master keys, an LPFS1/LPFS2 carrying it for epoch keys.
bool reveal_enabled(const RevealEvent& ev, const std::vector<TraceEvent>& log);

/// Leaks the key to the intruder and logs the reveal. Returns nullopt when
/// the rule is not enabled; neither `kb` nor `log` is touched then.
std::optional<KnowledgeBase> reveal(const KnowledgeBase& kb, const RevealEvent& ev, std::vector<TraceEvent>& log);

enum class ProofRule {
  Known,       // member of the knowledge base
  Public,      // public name
  Fst,         // <x,y> |- x
  Snd,         // <x,y> |- y
  Sdec,        // senc(m,k), k |- m
  AeadDec,     // AEADenc(k,m,a), k |- m
  Compose,     // x1..xn |- f(x1..xn) for a constructor f
};

struct ProofNode;
using ProofPtr = std::shared_ptr<const ProofNode>;

struct ProofNode {
  Term conclusion;
  ProofRule rule;
  Symbol symbol = Symbol::Pair;  // Compose only
  std::vector<ProofPtr> premises;
  std::size_t height = 0;
};

const char* proof_rule_name(ProofRule r);

/// Bounded derivability for one knowledge base. Height of a proof is the
/// length of its longest branch: knowledge-base and public leaves are 0 and
/// every analysis or composition step adds 1. Queries answer whether a
/// proof of height at most the bound exists and return a minimal one.
class Deducer {
 public:
  static constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max();

  Deducer(const KnowledgeBase& kb, std::size_t depth_bound, const RewriteSystem& rs = RewriteSystem::standard());

  std::size_t depth_bound() const { return bound_; }
  /// Minimal proof height, or nullopt if above the bound.
  std::optional<std::size_t> height(const Term& target);
  bool can_derive(const Term& target) { return height(target).has_value(); }
  /// Minimal proof, or null if not derivable within the bound.
  ProofPtr prove(const Term& target);

  /// Terms reachable by analysis alone, with their heights.
  std::map<Term, std::size_t> analyzed() const;

 private:
  struct Best {
    std::size_t height = kUnreachable;
    ProofPtr proof;
  };

  void saturate();
  const Best& synth(const Term& t);
  bool offer(const Term& t, ProofPtr proof);

  const RewriteSystem* rs_;
  std::size_t bound_;
  std::map<Term, Best> analysis_;
  std::map<Term, Best> memo_;
};

struct Derivation {
  bool derivable = false;
  ProofPtr proof;
};

Derivation can_derive(const KnowledgeBase& kb, const Term& target, std::size_t depth_bound,
                      const RewriteSystem& rs = RewriteSystem::standard());

/// Checks that every node of `proof` is a legal step from `kb`, that node
/// heights are consistent, and that the root is `target` modulo the theory.
bool replay_proof(const ProofNode& proof, const KnowledgeBase& kb, const Term& target,
                  const RewriteSystem& rs = RewriteSystem::standard());

}  // namespace findmy
