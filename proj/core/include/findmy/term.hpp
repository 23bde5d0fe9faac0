#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace findmy {

/// Function symbols of the message algebra. Declaration order is the
/// primary key of the total term order.
enum class Symbol : std::uint8_t {
  PublicName,
  FreshName,
  Pair,
  Pk,
  H,
  Senc,
  Sdec,
  Fst,
  Snd,
  SkFn,
  DiFn,
  SsFn,
  KeyGen,
  NonceGen,
  AeadEnc,
  AeadAuthDec,
  AeadDec,
};

struct SymbolInfo {
  Symbol symbol;
  std::string_view name;
  int arity;
  /// Applicable by the intruder during synthesis.
  bool constructor;
};

const SymbolInfo& symbol_info(Symbol s);
/// Looks up an application symbol by its printed name (pk, senc, ...).
/// Names and pairs are not applications and are not found here.
const SymbolInfo* find_symbol(std::string_view name);
std::span<const SymbolInfo> all_symbols();

/// Raised for arity violations and other malformed terms.
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Immutable, structurally shared message term.
class Term {
 public:
  static Term pub(std::string label);
  static Term fresh(std::string label, std::uint32_t id);
  static Term pair(Term first, Term second);
  static Term apply(Symbol f, std::vector<Term> args);

  Symbol symbol() const { return node_->symbol; }
  const std::string& label() const { return node_->label; }
  std::uint32_t fresh_id() const { return node_->id; }
  std::span<const Term> args() const { return node_->args; }
  const Term& arg(std::size_t i) const { return node_->args.at(i); }

  bool is_name() const {
    return symbol() == Symbol::PublicName || symbol() == Symbol::FreshName;
  }
  bool is(Symbol s) const { return symbol() == s; }

  /// Node count.
  std::size_t size() const { return node_->size; }
  std::size_t depth() const { return node_->depth; }
  std::size_t hash() const { return node_->hash; }

  friend bool operator==(const Term& a, const Term& b);
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

 private:
  struct Node {
    Symbol symbol;
    std::string label;
    std::uint32_t id = 0;
    std::vector<Term> args;
    std::size_t size = 1;
    std::size_t depth = 1;
    std::size_t hash = 0;
  };

  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Term make(Node node);

  std::shared_ptr<const Node> node_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const noexcept { return t.hash(); }
};

using TermSet = std::set<Term>;

/// Shorthand constructors named after the printed symbols.
namespace terms {
inline Term pub(std::string label) { return Term::pub(std::move(label)); }
inline Term fresh(std::string label, std::uint32_t id) { return Term::fresh(std::move(label), id); }
inline Term pair(Term a, Term b) { return Term::pair(std::move(a), std::move(b)); }
/// Right-nested tuple <a, <b, c>>.
Term tuple(std::vector<Term> items);
inline Term pk(Term x) { return Term::apply(Symbol::Pk, {std::move(x)}); }
inline Term h(Term x) { return Term::apply(Symbol::H, {std::move(x)}); }
inline Term senc(Term m, Term k) { return Term::apply(Symbol::Senc, {std::move(m), std::move(k)}); }
inline Term sdec(Term c, Term k) { return Term::apply(Symbol::Sdec, {std::move(c), std::move(k)}); }
inline Term fst(Term p) { return Term::apply(Symbol::Fst, {std::move(p)}); }
inline Term snd(Term p) { return Term::apply(Symbol::Snd, {std::move(p)}); }
inline Term sk_fn(Term sk) { return Term::apply(Symbol::SkFn, {std::move(sk)}); }
inline Term di_fn(Term d0, Term sk) { return Term::apply(Symbol::DiFn, {std::move(d0), std::move(sk)}); }
inline Term ss_fn(Term d, Term p) { return Term::apply(Symbol::SsFn, {std::move(d), std::move(p)}); }
inline Term key_gen(Term ss, Term p) { return Term::apply(Symbol::KeyGen, {std::move(ss), std::move(p)}); }
inline Term nonce_gen(Term ss, Term p) { return Term::apply(Symbol::NonceGen, {std::move(ss), std::move(p)}); }
inline Term aead_enc(Term k, Term pt, Term aad) {
  return Term::apply(Symbol::AeadEnc, {std::move(k), std::move(pt), std::move(aad)});
}
inline Term aead_authdec(Term k, Term c, Term aad) {
  return Term::apply(Symbol::AeadAuthDec, {std::move(k), std::move(c), std::move(aad)});
}
inline Term aead_dec(Term k, Term c) { return Term::apply(Symbol::AeadDec, {std::move(k), std::move(c)}); }
}  // namespace terms

}  // namespace findmy
