#include "findmy/builtin_lemmas.hpp"

namespace findmy {

namespace {

constexpr RevealSet kMaster{true, true, false, false};
constexpr RevealSet kMasterAndDi{true, true, true, false};
constexpr RevealSet kMasterAndSki{true, true, false, true};

std::vector<Lemma> build() {
  std::vector<Lemma> out;
  auto add = [&](const char* name, LemmaKind kind, RevealSet reveals, Expectation expected, const char* description,
                 const char* text) { out.push_back(make_lemma(name, text, kind, reveals, expected, description)); };

  add("sanity_check", LemmaKind::ExistsTrace, kMaster, Expectation::Verified,
      "an owner can pair, have a beacon picked up and decrypt the resulting report",
      "Ex L O d0 SK0 loc df p tF #i #j #k. Ok_s(L, O, d0, SK0) @ #i & Floc(loc, df, p) @ #j"
      " & OwnerDecrypt(O, L, loc, tF) @ #k & #i < #j & #j < #k");

  add("epochs_start1", LemmaKind::AllTraces, kMaster, Expectation::Verified,
      "the first epoch only starts after pairing",
      "All L O d0 SK0 d1 SK1 #i. LPFS1(L, O, d0, SK0, d1, SK1) @ #i"
      " ==> Ex #j. KeyEst(O, L, d0, SK0) @ #j & #j < #i");

  add("epochs_start2", LemmaKind::AllTraces, kMaster, Expectation::Verified,
      "a later epoch is always preceded by the first epoch of the same pairing",
      "All L O d0 SK0 di SKi #i. LPFS2(L, O, d0, SK0, di, SKi) @ #i"
      " ==> Ex d1 SK1 #j. LPFS1(L, O, d0, SK0, d1, SK1) @ #j & #j < #i");

  add("epochs_end", LemmaKind::AllTraces, kMaster, Expectation::Verified,
      "finders only encrypt to beacon keys some lost device emitted earlier",
      "All loc df p #i. Floc(loc, df, p) @ #i"
      " ==> (Ex L O d0 SK0 d SK #j. LPFS1(L, O, d0, SK0, d, SK) @ #j & p = pk(d) & #j < #i)"
      " | (Ex L O d0 SK0 d SK #j. LPFS2(L, O, d0, SK0, d, SK) @ #j & p = pk(d) & #j < #i)");

  add("d0_sec", LemmaKind::AllTraces, kMaster, Expectation::Verified,
      "the master private key stays secret unless revealed",
      "All O L d0 #i. LPFS1(L, O, d0, _, _, _) @ #i"
      " ==> (not (Ex #j. K(d0) @ #j)) | (Ex #k. LtkReveal_d0(O, L, d0) @ #k)");

  add("SK0_sec", LemmaKind::AllTraces, kMaster, Expectation::Verified,
      "the master symmetric key stays secret unless revealed",
      "All O L SK0 #i. LPFS1(L, O, _, SK0, _, _) @ #i"
      " ==> (not (Ex #j. K(SK0) @ #j)) | (Ex #k. LtkReveal_SK0(O, L, SK0) @ #k)");

  add("di_sec", LemmaKind::AllTraces, kMaster, Expectation::Verified,
      "later epoch private keys stay secret unless both master keys leak",
      "All O L d0 SK0 d_i SKi #i #j #k. LPFS2(L, O, d0, SK0, d_i, SKi) @ #i"
      " & LPFS1(L, O, d0, _, _, _) @ #j & LPFS1(L, O, _, SK0, _, _) @ #k & j < i & k < i"
      " ==> (not (Ex #t. K(d_i) @ #t))"
      " | ((Ex #r. LtkReveal_d0(O, L, d0) @ #r) & (Ex #s. LtkReveal_SK0(O, L, SK0) @ #s))");

  add("ski_sec", LemmaKind::AllTraces, kMaster, Expectation::TimedOut,
      "later epoch symmetric keys stay secret unless the master symmetric key leaks",
      "All O L d0 SK0 d_i SKi #i #j #k. LPFS2(L, O, d0, SK0, d_i, SKi) @ #i"
      " & LPFS1(L, O, d0, _, _, _) @ #j & LPFS1(L, O, _, SK0, _, _) @ #k & j < i & k < i"
      " ==> (not (Ex #t. K(SKi) @ #t)) | (Ex #s. LtkReveal_SK0(O, L, SK0) @ #s)");

  add("pfs_init_d", LemmaKind::AllTraces, kMasterAndDi, Expectation::Verified,
      "leaking the first epoch private key does not expose a later one",
      "All L O d0 SK0 d1 SK1 di SKi #i #j #r. LPFS1(L, O, d0, SK0, d1, SK1) @ #i"
      " & LPFS2(L, O, d0, SK0, di, SKi) @ #j & Reveal_di(O, L, d1) @ #r & #i < #j"
      " ==> (not (Ex #t. K(di) @ #t)) | (Ex #s. Reveal_di(O, L, di) @ #s)"
      " | ((Ex #a. LtkReveal_d0(O, L, d0) @ #a) & (Ex #b. LtkReveal_SK0(O, L, SK0) @ #b))");

  add("pfs_d", LemmaKind::AllTraces, kMasterAndDi, Expectation::Verified,
      "leaking one later epoch private key does not expose a subsequent one",
      "All L O d0 SK0 dj SKj di SKi #i #j #r. LPFS2(L, O, d0, SK0, dj, SKj) @ #i"
      " & LPFS2(L, O, d0, SK0, di, SKi) @ #j & Reveal_di(O, L, dj) @ #r & #i < #j"
      " ==> (not (Ex #t. K(di) @ #t)) | (Ex #s. Reveal_di(O, L, di) @ #s)"
      " | ((Ex #a. LtkReveal_d0(O, L, d0) @ #a) & (Ex #b. LtkReveal_SK0(O, L, SK0) @ #b))");

  add("pfs_init_sk", LemmaKind::AllTraces, kMasterAndSki, Expectation::Verified,
      "leaking the first epoch symmetric key does not expose a later one",
      "All L O d0 SK0 d1 SK1 di SKi #i #j #r. LPFS1(L, O, d0, SK0, d1, SK1) @ #i"
      " & LPFS2(L, O, d0, SK0, di, SKi) @ #j & Reveal_ski(O, L, SK1) @ #r & #i < #j"
      " ==> (not (Ex #t. K(SKi) @ #t)) | (Ex #s. Reveal_ski(O, L, SKi) @ #s)"
      " | (Ex #a. LtkReveal_SK0(O, L, SK0) @ #a)");

  add("pfs_sk", LemmaKind::AllTraces, kMasterAndSki, Expectation::TimedOut,
      "leaking one later epoch symmetric key does not expose a subsequent one",
      "All L O d0 SK0 dj SKj di SKi #i #j #r. LPFS2(L, O, d0, SK0, dj, SKj) @ #i"
      " & LPFS2(L, O, d0, SK0, di, SKi) @ #j & Reveal_ski(O, L, SKj) @ #r & #i < #j"
      " ==> (not (Ex #t. K(SKi) @ #t)) | (Ex #s. Reveal_ski(O, L, SKi) @ #s)"
      " | (Ex #a. LtkReveal_SK0(O, L, SK0) @ #a)");
  return out;
}

}  // namespace

const std::vector<Lemma>& builtin_lemmas() {
  static const std::vector<Lemma> lemmas = build();
  return lemmas;
}

const Lemma* find_builtin_lemma(std::string_view name) {
  for (const auto& l : builtin_lemmas()) {
    if (l.name == name) return &l;
  }
  return nullptr;
}

}  // namespace findmy
