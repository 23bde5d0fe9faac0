#include "findmy/adversary.hpp"

#include <algorithm>

namespace findmy {

void KnowledgeBase::observe(const Term& msg, const RewriteSystem& rs) { base_.insert(rs.normalize(msg)); }

bool KnowledgeBase::subset_of(const KnowledgeBase& other) const {
  return std::includes(other.base_.begin(), other.base_.end(), base_.begin(), base_.end());
}

bool reveal_enabled(const RevealEvent& ev, const std::vector<TraceEvent>& log) {
  for (const auto& e : log) {
    switch (ev.kind) {
      case EventKind::LtkReveal_d0:
      case EventKind::LtkReveal_SK0:
        if (e.kind == EventKind::KeyEst && e.params[0] == ev.owner && e.params[1] == ev.lta &&
            e.params[ev.kind == EventKind::LtkReveal_d0 ? 2 : 3] == ev.key) {
          return true;
        }
        break;
      case EventKind::Reveal_di:
      case EventKind::Reveal_ski:
        if ((e.kind == EventKind::LPFS1 || e.kind == EventKind::LPFS2) && e.params[0] == ev.lta &&
            e.params[1] == ev.owner && e.params[ev.kind == EventKind::Reveal_di ? 4 : 5] == ev.key) {
          return true;
        }
        break;
      default:
        return false;
    }
  }
  return false;
}

std::optional<KnowledgeBase> reveal(const KnowledgeBase& kb, const RevealEvent& ev, std::vector<TraceEvent>& log) {
  if (!reveal_enabled(ev, log)) return std::nullopt;
  KnowledgeBase out = kb;
  out.observe(ev.key);
  log.push_back({ev.kind, {ev.owner, ev.lta, ev.key}, ev.timestamp});
  return out;
}

const char* proof_rule_name(ProofRule r) {
  switch (r) {
    case ProofRule::Known: return "known";
    case ProofRule::Public: return "public";
    case ProofRule::Fst: return "fst";
    case ProofRule::Snd: return "snd";
    case ProofRule::Sdec: return "sdec";
    case ProofRule::AeadDec: return "AEAD_dec";
    case ProofRule::Compose: return "compose";
  }
  return "?";
}

namespace {

ProofPtr node(Term conclusion, ProofRule rule, std::vector<ProofPtr> premises, Symbol symbol = Symbol::Pair) {
  std::size_t h = 0;
  for (const auto& p : premises) h = std::max(h, p->height + 1);
  return std::make_shared<const ProofNode>(ProofNode{std::move(conclusion), rule, symbol, std::move(premises), h});
}

}  // namespace

Deducer::Deducer(const KnowledgeBase& kb, std::size_t depth_bound, const RewriteSystem& rs)
    : rs_(&rs), bound_(depth_bound) {
  for (const auto& t : kb.terms()) analysis_[t] = {0, node(t, ProofRule::Known, {})};
  saturate();
}

bool Deducer::offer(const Term& t, ProofPtr proof) {
  if (proof->height > bound_) return false;
  auto& slot = analysis_[t];
  if (proof->height >= slot.height) return false;
  slot = {proof->height, std::move(proof)};
  return true;
}

// Decomposition to a fixpoint. A decryption key may itself need composing,
// and newly analyzed terms can make keys cheaper, so rounds repeat until no
// height improves.
void Deducer::saturate() {
  for (bool changed = true; changed;) {
    changed = false;
    memo_.clear();
    std::vector<std::pair<Term, ProofPtr>> snapshot;
    for (const auto& [t, best] : analysis_) {
      if (best.height < bound_) snapshot.emplace_back(t, best.proof);
    }
    for (const auto& [t, proof] : snapshot) {
      if (t.is(Symbol::Pair)) {
        changed |= offer(t.arg(0), node(t.arg(0), ProofRule::Fst, {proof}));
        changed |= offer(t.arg(1), node(t.arg(1), ProofRule::Snd, {proof}));
      } else if (t.is(Symbol::Senc) || t.is(Symbol::AeadEnc)) {
        const Term& key = t.is(Symbol::Senc) ? t.arg(1) : t.arg(0);
        const Term& body = t.is(Symbol::Senc) ? t.arg(0) : t.arg(1);
        const Best& k = synth(key);
        if (k.height == kUnreachable) continue;
        auto rule = t.is(Symbol::Senc) ? ProofRule::Sdec : ProofRule::AeadDec;
        changed |= offer(body, node(body, rule, {proof, k.proof}));
      }
    }
  }
  memo_.clear();
}

const Deducer::Best& Deducer::synth(const Term& t) {
  if (auto it = memo_.find(t); it != memo_.end()) return it->second;
  Best best;
  if (auto it = analysis_.find(t); it != analysis_.end()) best = it->second;
  if (t.is(Symbol::PublicName)) best = {0, node(t, ProofRule::Public, {})};

  auto consider = [&](Symbol f, const std::vector<Term>& args) {
    std::vector<ProofPtr> premises;
    std::size_t h = 0;
    for (const auto& a : args) {
      const Best& b = synth(a);
      if (b.height == kUnreachable || b.height + 1 > bound_) return;
      h = std::max(h, b.height + 1);
      premises.push_back(b.proof);
    }
    if (h < best.height) best = {h, node(t, ProofRule::Compose, std::move(premises), f)};
  };

  if (best.height > 0 && !t.is_name() && symbol_info(t.symbol()).constructor) {
    std::vector<Term> args(t.args().begin(), t.args().end());
    consider(t.symbol(), args);
    // SS_fn(b, pk(a)) normalizes to the canonical SS_fn(a, pk(b)).
    if (t.is(Symbol::SsFn) && rs_->ecdh_canonicalization() && t.arg(1).is(Symbol::Pk)) {
      consider(Symbol::SsFn, {t.arg(1).arg(0), terms::pk(t.arg(0))});
    }
  }
  return memo_[t] = std::move(best);
}

std::optional<std::size_t> Deducer::height(const Term& target) {
  const Best& b = synth(rs_->normalize(target));
  if (b.height == kUnreachable) return std::nullopt;
  return b.height;
}

ProofPtr Deducer::prove(const Term& target) { return synth(rs_->normalize(target)).proof; }

std::map<Term, std::size_t> Deducer::analyzed() const {
  std::map<Term, std::size_t> out;
  for (const auto& [t, b] : analysis_) out.emplace(t, b.height);
  return out;
}

Derivation can_derive(const KnowledgeBase& kb, const Term& target, std::size_t depth_bound,
                      const RewriteSystem& rs) {
  Deducer d(kb, depth_bound, rs);
  auto proof = d.prove(target);
  return {proof != nullptr, std::move(proof)};
}

namespace {

bool replay_node(const ProofNode& n, const KnowledgeBase& kb, const RewriteSystem& rs) {
  std::size_t h = 0;
  for (const auto& p : n.premises) {
    if (!p || !replay_node(*p, kb, rs)) return false;
    h = std::max(h, p->height + 1);
  }
  if (n.height != h) return false;
  auto premise = [&](std::size_t i) -> const Term& { return n.premises[i]->conclusion; };
  switch (n.rule) {
    case ProofRule::Known:
      return n.premises.empty() && kb.contains(n.conclusion);
    case ProofRule::Public:
      return n.premises.empty() && n.conclusion.is(Symbol::PublicName);
    case ProofRule::Fst:
    case ProofRule::Snd: {
      if (n.premises.size() != 1) return false;
      Term app = n.rule == ProofRule::Fst ? terms::fst(premise(0)) : terms::snd(premise(0));
      return rs.reducible_at_root(app) && rs.normalize(app) == n.conclusion;
    }
    case ProofRule::Sdec:
    case ProofRule::AeadDec: {
      if (n.premises.size() != 2) return false;
      Term app = n.rule == ProofRule::Sdec ? terms::sdec(premise(0), premise(1))
                                           : terms::aead_dec(premise(1), premise(0));
      return rs.reducible_at_root(app) && rs.normalize(app) == n.conclusion;
    }
    case ProofRule::Compose: {
      const auto& info = symbol_info(n.symbol);
      if (!info.constructor || static_cast<int>(n.premises.size()) != info.arity) return false;
      std::vector<Term> args;
      for (std::size_t i = 0; i < n.premises.size(); ++i) args.push_back(premise(i));
      return rs.normalize(Term::apply(n.symbol, std::move(args))) == n.conclusion;
    }
  }
  return false;
}

}  // namespace

bool replay_proof(const ProofNode& proof, const KnowledgeBase& kb, const Term& target, const RewriteSystem& rs) {
  return replay_node(proof, kb, rs) && rs.equal_mod_e(proof.conclusion, target);
}

}  // namespace findmy
