#include "findmy/rewrite.hpp"

namespace findmy {

const RewriteSystem& RewriteSystem::standard() {
  static const RewriteSystem rs;
  return rs;
}

// Arguments are already in normal form; any rule result is either one of
// them (normal) or an SS_fn whose arguments are normal and already ordered.
Term RewriteSystem::rewrite_root(const Term& t) const {
  switch (t.symbol()) {
    case Symbol::Sdec:
      if (t.arg(0).is(Symbol::Senc) && t.arg(0).arg(1) == t.arg(1)) return t.arg(0).arg(0);
      break;
    case Symbol::Fst:
      if (t.arg(0).is(Symbol::Pair)) return t.arg(0).arg(0);
      break;
    case Symbol::Snd:
      if (t.arg(0).is(Symbol::Pair)) return t.arg(0).arg(1);
      break;
    case Symbol::AeadAuthDec: {
      const Term& c = t.arg(1);
      if (c.is(Symbol::AeadEnc) && c.arg(0) == t.arg(0) && c.arg(2) == t.arg(2)) return c.arg(1);
      break;
    }
    case Symbol::AeadDec: {
      const Term& c = t.arg(1);
      if (c.is(Symbol::AeadEnc) && c.arg(0) == t.arg(0)) return c.arg(1);
      break;
    }
    case Symbol::SsFn:
      if (ecdh_canonicalization_ && t.arg(1).is(Symbol::Pk)) {
        const Term& a = t.arg(0);
        const Term& b = t.arg(1).arg(0);
        if (b < a) return terms::ss_fn(b, terms::pk(a));
      }
      break;
    default:
      break;
  }
  return t;
}

bool RewriteSystem::reducible_at_root(const Term& t) const { return !(rewrite_root(t) == t); }

Term RewriteSystem::normalize(const Term& t) const {
  if (t.is_name()) return t;
  std::vector<Term> args;
  args.reserve(t.args().size());
  bool changed = false;
  for (const auto& a : t.args()) {
    args.push_back(normalize(a));
    changed = changed || !(args.back() == a);
  }
  Term rebuilt = !changed ? t
                 : t.is(Symbol::Pair) ? Term::pair(args[0], args[1])
                                      : Term::apply(t.symbol(), std::move(args));
  return rewrite_root(rebuilt);
}

bool RewriteSystem::equal_mod_e(const Term& a, const Term& b) const {
  return normalize(a) == normalize(b);
}

void collect_subterms(const Term& t, TermSet& out) {
  if (!out.insert(t).second) return;
  for (const auto& a : t.args()) collect_subterms(a, out);
}

TermSet subterm_set(const Term& t, const RewriteSystem& rs) {
  TermSet out;
  collect_subterms(rs.normalize(t), out);
  return out;
}

bool is_stuck_destructor(const Term& t) {
  switch (t.symbol()) {
    case Symbol::Sdec:
    case Symbol::Fst:
    case Symbol::Snd:
    case Symbol::AeadAuthDec:
    case Symbol::AeadDec:
      return true;
    default:
      return false;
  }
}

}  // namespace findmy
