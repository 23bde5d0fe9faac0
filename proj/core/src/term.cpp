#include "findmy/term.hpp"

#include <algorithm>
#include <array>
#include <functional>

namespace findmy {
namespace {

constexpr std::array<SymbolInfo, 17> kSymbols{{
    {Symbol::PublicName, "", 0, false},
    {Symbol::FreshName, "~", 0, false},
    {Symbol::Pair, "pair", 2, true},
    {Symbol::Pk, "pk", 1, true},
    {Symbol::H, "h", 1, true},
    {Symbol::Senc, "senc", 2, true},
    {Symbol::Sdec, "sdec", 2, false},
    {Symbol::Fst, "fst", 1, false},
    {Symbol::Snd, "snd", 1, false},
    {Symbol::SkFn, "SK_fn", 1, true},
    {Symbol::DiFn, "di_fn", 2, true},
    {Symbol::SsFn, "SS_fn", 2, true},
    {Symbol::KeyGen, "KeyGen", 2, true},
    {Symbol::NonceGen, "NonceGen", 2, true},
    {Symbol::AeadEnc, "AEADenc", 3, true},
    {Symbol::AeadAuthDec, "AEADauthdec", 3, false},
    {Symbol::AeadDec, "AEAD_dec", 2, false},
}};

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

const SymbolInfo& symbol_info(Symbol s) { return kSymbols[static_cast<std::size_t>(s)]; }

const SymbolInfo* find_symbol(std::string_view name) {
  for (const auto& info : kSymbols) {
    if (info.arity > 0 && info.symbol != Symbol::Pair && info.name == name) return &info;
  }
  return nullptr;
}

std::span<const SymbolInfo> all_symbols() { return kSymbols; }

Term Term::make(Node node) {
  std::size_t h = mix(static_cast<std::size_t>(node.symbol), std::hash<std::string>{}(node.label));
  h = mix(h, node.id);
  for (const auto& a : node.args) {
    node.size += a.size();
    node.depth = std::max(node.depth, a.depth() + 1);
    h = mix(h, a.hash());
  }
  node.hash = h;
  return Term(std::make_shared<const Node>(std::move(node)));
}

Term Term::pub(std::string label) {
  if (label.empty()) throw StructuralError("public name with empty label");
  return make(Node{Symbol::PublicName, std::move(label), 0, {}});
}

Term Term::fresh(std::string label, std::uint32_t id) {
  if (label.empty()) throw StructuralError("fresh name with empty label");
  return make(Node{Symbol::FreshName, std::move(label), id, {}});
}

Term Term::pair(Term first, Term second) {
  return make(Node{Symbol::Pair, {}, 0, {std::move(first), std::move(second)}});
}

Term Term::apply(Symbol f, std::vector<Term> args) {
  const auto& info = symbol_info(f);
  if (f == Symbol::PublicName || f == Symbol::FreshName) {
    throw StructuralError("names are not applications");
  }
  if (static_cast<int>(args.size()) != info.arity) {
    throw StructuralError(std::string(info.name) + " expects " + std::to_string(info.arity) +
                          " argument(s), got " + std::to_string(args.size()));
  }
  return make(Node{f, {}, 0, std::move(args)});
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.size() != b.size()) return false;
  return (a <=> b) == std::strong_ordering::equal;
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.symbol() <=> b.symbol(); c != 0) return c;
  if (auto c = a.label().compare(b.label()); c != 0) {
    return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  if (auto c = a.fresh_id() <=> b.fresh_id(); c != 0) return c;
  const auto& xs = a.node_->args;
  const auto& ys = b.node_->args;
  for (std::size_t i = 0; i < std::min(xs.size(), ys.size()); ++i) {
    if (auto c = xs[i] <=> ys[i]; c != 0) return c;
  }
  return xs.size() <=> ys.size();
}

namespace terms {
Term tuple(std::vector<Term> items) {
  if (items.empty()) throw StructuralError("empty tuple");
  Term acc = items.back();
  for (std::size_t i = items.size() - 1; i-- > 0;) acc = Term::pair(items[i], acc);
  return acc;
}
}  // namespace terms

}  // namespace findmy
