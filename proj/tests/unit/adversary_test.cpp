#include <doctest.h>

#include "findmy/adversary.hpp"
#include "findmy/term_io.hpp"

using namespace findmy;
using namespace findmy::terms;

namespace {

KnowledgeBase kb_of(std::initializer_list<const char*> items, const RewriteSystem& rs = RewriteSystem::standard()) {
  KnowledgeBase kb;
  for (const auto* s : items) kb.observe(parse_term(s), rs);
  return kb;
}

std::optional<std::size_t> height(const KnowledgeBase& kb, const char* target, std::size_t bound = 6) {
  Deducer d(kb, bound);
  return d.height(parse_term(target));
}

}  // namespace

TEST_CASE("knowledge stores normal forms") {
  KnowledgeBase kb;
  kb.observe(parse_term("fst(<~a.1,~b.1>)"));
  CHECK(kb.contains(parse_term("~a.1")));
  CHECK(kb.size() == 1);
  auto bigger = kb;
  bigger.observe(parse_term("~c.1"));
  CHECK(kb.subset_of(bigger));
  CHECK_FALSE(bigger.subset_of(kb));
}

TEST_CASE("proof heights") {
  auto kb = kb_of({"<~a.1,senc(~m.1,~k.1)>", "~k.1"});
  CHECK(height(kb, "~k.1") == 0u);
  CHECK(height(kb, "x") == 0u);
  CHECK(height(kb, "~a.1") == 1u);
  CHECK(height(kb, "~m.1") == 2u);
  CHECK(height(kb, "<~m.1,~k.1>") == 3u);
  CHECK(height(kb, "h(<~m.1,x>)") == 4u);
  CHECK_FALSE(height(kb, "~z.1").has_value());
  CHECK_FALSE(height(kb, "h(<~m.1,x>)", 3).has_value());
}

TEST_CASE("decryption keys may themselves be composed") {
  auto kb = kb_of({"senc(~m.1,h(~k.1))", "~k.1"});
  CHECK(height(kb, "~m.1") == 2u);
  auto aead = kb_of({"AEADenc(KeyGen(~s.1,x),~m.1,iv)", "~s.1"});
  CHECK(height(aead, "~m.1") == 2u);
}

TEST_CASE("destructors are not composed") {
  auto kb = kb_of({"~a.1", "~k.1"});
  CHECK_FALSE(height(kb, "sdec(~a.1,~k.1)").has_value());
  CHECK(height(kb, "senc(~a.1,~k.1)") == 1u);
}

TEST_CASE("ECDH either way round") {
  auto kb = kb_of({"~b.1", "pk(~a.1)"});
  CHECK(height(kb, "SS_fn(~a.1,pk(~b.1))") == 1u);
  CHECK(height(kb, "SS_fn(~b.1,pk(~a.1))") == 1u);
  RewriteSystem plain(false);
  Deducer d(kb_of({"~b.1", "pk(~a.1)"}, plain), 6, plain);
  CHECK_FALSE(d.can_derive(parse_term("SS_fn(~a.1,pk(~b.1))")));
  CHECK(d.can_derive(parse_term("SS_fn(~b.1,pk(~a.1))")));
}

TEST_CASE("proof trees replay") {
  auto kb = kb_of({"<~a.1,senc(~m.1,~k.1)>", "~k.1"});
  auto target = parse_term("<~m.1,h(~a.1)>");
  auto d = can_derive(kb, target, 6);
  REQUIRE(d.derivable);
  REQUIRE(d.proof);
  CHECK(d.proof->rule == ProofRule::Compose);
  CHECK(d.proof->height == 3);
  CHECK(replay_proof(*d.proof, kb, target));
  CHECK_FALSE(replay_proof(*d.proof, kb_of({"~k.1"}), target));
  CHECK_FALSE(replay_proof(*d.proof, kb, parse_term("~a.1")));
  CHECK_FALSE(can_derive(kb, parse_term("~q.1"), 6).derivable);
}

TEST_CASE("reveals need the key to have been established") {
  Term o = pub("O"), l = pub("L"), d0 = fresh("d0", 1), sk0 = fresh("SK0", 1);
  std::vector<TraceEvent> log;
  KnowledgeBase kb;
  CHECK_FALSE(reveal(kb, {EventKind::LtkReveal_d0, o, l, d0, 1}, log).has_value());
  CHECK(log.empty());
  log.push_back({EventKind::KeyEst, {o, l, d0, sk0}, 1});
  auto leaked = reveal(kb, {EventKind::LtkReveal_d0, o, l, d0, 2}, log);
  REQUIRE(leaked.has_value());
  CHECK(leaked->contains(d0));
  CHECK(log.back() == TraceEvent{EventKind::LtkReveal_d0, {o, l, d0}, 2});
  CHECK_FALSE(reveal(kb, {EventKind::LtkReveal_SK0, o, l, d0, 3}, log).has_value());

  Term d1 = di_fn(d0, sk_fn(sk0));
  CHECK_FALSE(reveal(kb, {EventKind::Reveal_di, o, l, d1, 3}, log).has_value());
  log.push_back({EventKind::LPFS1, {l, o, d0, sk0, d1, sk_fn(sk0)}, 3});
  CHECK(reveal(kb, {EventKind::Reveal_di, o, l, d1, 4}, log).has_value());
  CHECK(reveal(kb, {EventKind::Reveal_ski, o, l, sk_fn(sk0), 5}, log).has_value());
}

TEST_CASE("later symmetric keys follow from an earlier one") {
  auto kb = kb_of({"SK_fn(~SK0.1)"});
  CHECK(height(kb, "SK_fn(SK_fn(~SK0.1))") == 1u);
  CHECK_FALSE(height(kb, "~SK0.1").has_value());
  CHECK_FALSE(height(kb, "di_fn(~d0.1,SK_fn(SK_fn(~SK0.1)))").has_value());
}
