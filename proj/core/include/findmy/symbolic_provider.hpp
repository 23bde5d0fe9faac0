#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "findmy/protocol.hpp"
#include "findmy/rewrite.hpp"
#include "findmy/term.hpp"

namespace findmy {

/// CryptoProvider over symbolic terms. Every value is a Term kept in normal
/// form under the configured rewrite system; failed decryptions show up as
/// stuck destructor applications and are reported as nullopt.
class SymbolicProvider {
 public:
  using Secret = Term;
  using Pub = Term;
  using SymKey = Term;
  using Shared = Term;
  using EncKey = Term;
  using Iv = Term;
  using Plain = Term;
  using Cipher = Term;
  using Digest = Term;
  using Timestamp = Term;
  using Param = Term;

  SymbolicProvider() = default;
  explicit SymbolicProvider(RewriteSystem rs) : rs_(rs) {}

  const RewriteSystem& rewrite_system() const { return rs_; }

  /// Id given to the next fresh name; incremented after each use.
  void set_next_fresh_id(std::uint32_t id) { next_id_ = id; }

  Term fresh_secret(std::string_view hint) { return fresh(hint.empty() ? "x" : hint); }
  Term fresh_symkey(std::string_view hint) { return fresh(hint.empty() ? "k" : hint); }
  Term fresh(std::string_view label) { return Term::fresh(std::string(label), next_id_++); }

  Term pub_of(const Term& d) const { return n(terms::pk(d)); }
  Term sk_next(const Term& sk) const { return n(terms::sk_fn(sk)); }
  Term d_next(const Term& d0, const Term& sk) const { return n(terms::di_fn(d0, sk)); }
  Term ecdh(const Term& d, const Term& p) const { return n(terms::ss_fn(d, p)); }
  Term key_of(const Term& ss, const Term& p) const { return n(terms::key_gen(ss, p)); }
  Term iv_of(const Term& ss, const Term& p) const { return n(terms::nonce_gen(ss, p)); }
  Term sym_seal(const Term& m, const Term& k) const { return n(terms::senc(m, k)); }
  std::optional<Term> sym_open(const Term& c, const Term& k) const { return unstuck(terms::sdec(c, k)); }
  Term pack(const Term& c, const Term& ts) const { return n(terms::pair(c, ts)); }
  std::optional<std::pair<Term, Term>> unpack(const Term& pt) const {
    auto first = unstuck(terms::fst(pt));
    auto second = unstuck(terms::snd(pt));
    if (!first || !second) return std::nullopt;
    return std::pair{*first, *second};
  }
  Term aead_seal(const Term& k, const Term& pt, const Term& iv) const { return n(terms::aead_enc(k, pt, iv)); }
  std::optional<Term> aead_open(const Term& k, const Term& c, const Term& iv) const {
    return unstuck(terms::aead_authdec(k, c, iv));
  }
  Term hash(const Term& p) const { return n(terms::h(p)); }

  Term param(const protocol::AgentId& a) const { return Term::pub(a.name); }
  Term param(const Term& t) const { return t; }

 private:
  Term n(const Term& t) const { return rs_.normalize(t); }
  // Applies a destructor to normal arguments; nullopt if no equation fires.
  std::optional<Term> unstuck(const Term& t) const {
    std::vector<Term> args;
    for (const auto& a : t.args()) args.push_back(rs_.normalize(a));
    Term app = Term::apply(t.symbol(), std::move(args));
    if (!rs_.reducible_at_root(app)) return std::nullopt;
    return rs_.normalize(app);
  }

  RewriteSystem rs_;
  std::uint32_t next_id_ = 1;
};

static_assert(protocol::CryptoProvider<SymbolicProvider>);

}  // namespace findmy
