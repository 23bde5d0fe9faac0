#pragma once

#include "findmy/term.hpp"

namespace findmy {

/// The oriented equational theory of the protocol model:
///
///   sdec(senc(u, v), v)                      -> u
///   fst(<x, y>) -> x,  snd(<x, y>) -> y
///   AEADauthdec(k, AEADenc(k, pt, aad), aad) -> pt
///   AEAD_dec(k, AEADenc(k, pt, aad))         -> pt
///   SS_fn(a, pk(b))                          -> SS_fn(min(a,b), pk(max(a,b)))
///
/// The last rule internalizes ECDH agreement; it can be switched off to
/// study the model without it.
class RewriteSystem {
 public:
  RewriteSystem() = default;
  explicit RewriteSystem(bool ecdh_canonicalization)
      : ecdh_canonicalization_(ecdh_canonicalization) {}

  static const RewriteSystem& standard();

  bool ecdh_canonicalization() const { return ecdh_canonicalization_; }

  Term normalize(const Term& t) const;
  bool equal_mod_e(const Term& a, const Term& b) const;
  /// True if `t` (assumed normal) has a redex at its root.
  bool reducible_at_root(const Term& t) const;

 private:
  Term rewrite_root(const Term& t) const;

  bool ecdh_canonicalization_ = true;
};

inline Term normalize(const Term& t) { return RewriteSystem::standard().normalize(t); }
inline bool equal_mod_e(const Term& a, const Term& b) {
  return RewriteSystem::standard().equal_mod_e(a, b);
}

/// All subterms of the normal form of `t`, including itself.
TermSet subterm_set(const Term& t, const RewriteSystem& rs = RewriteSystem::standard());
/// Subterms of an already-normal term, no normalization performed.
void collect_subterms(const Term& t, TermSet& out);

/// A destructor application left in normal form (failed decryption or
/// projection of a non-pair).
bool is_stuck_destructor(const Term& t);

}  // namespace findmy
