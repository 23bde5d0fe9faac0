#include <doctest.h>

#include "findmy/rewrite.hpp"
#include "findmy/term_io.hpp"
#include "term_gen.hpp"

using namespace findmy;

namespace {

bool redex_free(const Term& t, const RewriteSystem& rs) {
  if (rs.reducible_at_root(t)) return false;
  for (const auto& a : t.args()) {
    if (!redex_free(a, rs)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("render then parse is the identity") {
  oracle::TermGen gen(11);
  for (int i = 0; i < 1000; ++i) {
    Term t = gen.term(6);
    CHECK(parse_term(render(t)) == t);
  }
}

TEST_CASE("normalization is idempotent and leaves no redex") {
  for (bool ecdh : {true, false}) {
    RewriteSystem rs(ecdh);
    oracle::TermGen gen(ecdh ? 12 : 13);
    for (int i = 0; i < 1000; ++i) {
      Term t = gen.term(8);
      Term n = rs.normalize(t);
      CHECK(rs.normalize(n) == n);
      CHECK(redex_free(n, rs));
      CHECK(n.size() <= t.size());
    }
  }
}

TEST_CASE("equality modulo the theory is an equivalence") {
  oracle::TermGen gen(14);
  auto variant = [&](const Term& t) {
    // Rebuild with swapped ECDH operands and wrapped projections.
    if (t.is(Symbol::SsFn) && t.arg(1).is(Symbol::Pk)) return terms::ss_fn(t.arg(1).arg(0), terms::pk(t.arg(0)));
    return terms::fst(terms::pair(t, gen.term(2)));
  };
  for (int i = 0; i < 500; ++i) {
    Term a = gen.term(4);
    Term b = variant(a);
    Term c = terms::snd(terms::pair(gen.term(2), b));
    CHECK(equal_mod_e(a, a));
    CHECK(equal_mod_e(a, b) == equal_mod_e(b, a));
    CHECK(equal_mod_e(a, b));
    CHECK(equal_mod_e(b, c));
    CHECK(equal_mod_e(a, c));
    Term d = gen.term(4);
    if (equal_mod_e(a, d) && equal_mod_e(d, c)) CHECK(equal_mod_e(a, c));
  }
}

TEST_CASE("ECDH agreement holds for every scalar pair") {
  oracle::TermGen gen(15, false);
  for (int i = 0; i < 300; ++i) {
    Term x = gen.term(3), y = gen.term(3);
    CHECK(equal_mod_e(terms::ss_fn(x, terms::pk(y)), terms::ss_fn(y, terms::pk(x))));
  }
}
