#include <doctest.h>

#include <algorithm>

#include "findmy/lemma.hpp"
#include "findmy/term_io.hpp"

using namespace findmy;
using namespace findmy::terms;

namespace {

/// Fixed execution: events and the knowledge after each step.
class FixedTrace : public TraceView {
 public:
  FixedTrace(std::vector<TraceEvent> events, std::vector<KnowledgeBase> kbs)
      : events_(std::move(events)), kbs_(std::move(kbs)) {}
  std::size_t length() const override { return kbs_.size() - 1; }
  const std::vector<TraceEvent>& events() const override { return events_; }
  bool knows(const Term& t, std::size_t j) override { return Deducer(kbs_.at(j), 6).can_derive(t); }
  ProofPtr proof(const Term& t, std::size_t j) override { return Deducer(kbs_.at(j), 6).prove(t); }

 private:
  std::vector<TraceEvent> events_;
  std::vector<KnowledgeBase> kbs_;
};

const Term O = pub("O"), L = pub("L"), d0 = fresh("d0", 1), sk0 = fresh("SK0", 1);

FixedTrace leaky(bool with_reveal) {
  KnowledgeBase empty, leaked;
  leaked.observe(d0);
  std::vector<TraceEvent> ev{{EventKind::KeyEst, {O, L, d0, sk0}, 1},
                             {EventKind::LPFS1, {L, O, d0, sk0, pub("d1"), pub("s1")}, 2}};
  if (with_reveal) ev.push_back({EventKind::LtkReveal_d0, {O, L, d0}, 3});
  return FixedTrace(ev, {empty, empty, empty, leaked});
}

constexpr const char* kD0Sec =
    "All O L d0 #i. LPFS1(L, O, d0, _, _, _) @ #i ==> (not (Ex #j. K(d0) @ #j)) | (Ex #k. LtkReveal_d0(O, L, d0) @ #k)";

}  // namespace

TEST_CASE("parse and render") {
  auto f = parse_formula(kD0Sec);
  CHECK(f->kind == Formula::Kind::All);
  CHECK(f->vars.size() == 4);
  CHECK(f->vars[3].time);
  auto again = parse_formula(render(*f));
  CHECK(render(*again) == render(*f));
  CHECK_NOTHROW(check_guarded(*f));
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(parse_formula("All x. Nope(x) @ #i"), LemmaError);
  CHECK_THROWS_AS(parse_formula("All L #i. KeyEst(L) @ #i ==> L = L"), LemmaError);
  CHECK_THROWS_AS(parse_formula("All L #i. Ok_s(L, L, L, L) @ #i ==> "), LemmaError);
  CHECK_THROWS_AS(parse_formula("Ex #i. K(y) @ #i"), LemmaError);
}

TEST_CASE("guardedness") {
  CHECK_THROWS_AS(check_guarded(*parse_formula("Ex x #i. not (K(x) @ #i)")), LemmaError);
  CHECK_NOTHROW(check_guarded(*parse_formula("Ex x p #i. Floc(x, _, p) @ #i")));
  CHECK_NOTHROW(check_guarded(*parse_formula("Ex #i. K('S') @ #i")));
}

TEST_CASE("secrecy with a reveal exception") {
  auto f = parse_formula(kD0Sec);
  auto honest = leaky(false);
  // d0 is known at step 3 without a reveal event: violated.
  Evaluator ev(honest);
  CHECK_FALSE(ev.holds(*f));
  auto w = ev.witness(*f);
  REQUIRE(w.has_value());
  CHECK(render(w->at("d0")) == "~d0.1");
  CHECK(render(w->at("i")) == "#2");

  auto revealed = leaky(true);
  Evaluator ev2(revealed);
  CHECK(ev2.holds(*f));
  CHECK_FALSE(ev2.witness(*f).has_value());
}

TEST_CASE("ordering, equations and existential witnesses") {
  auto t = leaky(false);
  Evaluator ev(t);
  CHECK(ev.holds(*parse_formula("Ex a b c d #i #j. KeyEst(a, b, c, d) @ #i & LPFS1(_, _, _, _, _, _) @ #j & #i < #j")));
  CHECK_THROWS_AS(check_guarded(*parse_formula("Ex #i #j. KeyEst(_, _, _, _) @ #i & Ok_s(_, _, _, _) @ #j | #i < #j")),
                  LemmaError);
  CHECK(ev.holds(*parse_formula(
      "All L O d0 SK0 d SK #i. LPFS1(L, O, d0, SK0, d, SK) @ #i ==> Ex #j. KeyEst(O, L, d0, SK0) @ #j & #j < #i")));
  CHECK_FALSE(ev.holds(*parse_formula(
      "All L O d0 SK0 d SK #i. LPFS1(L, O, d0, SK0, d, SK) @ #i ==> Ex #j. KeyEst(O, L, d0, SK0) @ #j & #i < #j")));
  CHECK(ev.holds(*parse_formula("Ex d p #i. LPFS1(_, _, _, _, d, _) @ #i & p = pk(d)")));
  CHECK(ev.holds(*parse_formula("Ex #i. K('anything') @ #i")));
  auto w = ev.witness(*parse_formula("Ex x #i #j. KeyEst(_, _, x, _) @ #i & K(x) @ #j"));
  REQUIRE(w.has_value());
  CHECK(render(w->at("j")) == "#3");
}

TEST_CASE("knowledge at the initial state") {
  KnowledgeBase kb;
  kb.observe(d0);
  FixedTrace t({{EventKind::KeyEst, {O, L, d0, sk0}, 1}}, {kb, kb});
  Evaluator ev(t);
  CHECK(ev.holds(*parse_formula("Ex x #i #j. KeyEst(_, _, x, _) @ #i & K(x) @ #j & #j < #i")));
}

TEST_CASE("free variables of a quantifier body") {
  auto f = parse_formula("All x #i. KeyEst(x, _, _, _) @ #i ==> Ex #j. K(x) @ #j");
  CHECK(free_variables(*f).empty());
  auto body = free_variables(*f->children[0]);
  CHECK(std::find(body.begin(), body.end(), "x") != body.end());
  CHECK(std::find(body.begin(), body.end(), "i") != body.end());
  CHECK(std::find(body.begin(), body.end(), "j") == body.end());
}
