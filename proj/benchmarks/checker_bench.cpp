#include <benchmark/benchmark.h>

#include "findmy/adversary.hpp"
#include "findmy/builtin_lemmas.hpp"
#include "findmy/trace_engine.hpp"

using namespace findmy;
using namespace findmy::terms;

namespace {

// A report as the server sees it, nested `depth` times under sdec/fst.
Term report_term(int depth) {
  Term d = fresh("d", 1), df = fresh("d_f", 1);
  Term ss = ss_fn(df, pk(d));
  Term k = key_gen(ss, pk(d));
  Term t = aead_enc(k, pair(senc(fresh("loc", 1), k), fresh("tF", 1)), nonce_gen(ss, pk(d)));
  for (int i = 0; i < depth; ++i) t = fst(sdec(senc(pair(t, pub("x")), fresh("k", 2)), fresh("k", 2)));
  return t;
}

void BM_Normalize(benchmark::State& state) {
  Term t = report_term(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(normalize(t));
}
BENCHMARK(BM_Normalize)->Arg(0)->Arg(4)->Arg(16);

void BM_CanDerive(benchmark::State& state) {
  KnowledgeBase kb;
  Term d = fresh("d", 1), df = fresh("d_f", 1);
  kb.observe(pk(d));
  kb.observe(pair(aead_enc(key_gen(ss_fn(df, pk(d)), pk(d)), fresh("loc", 1), nonce_gen(ss_fn(df, pk(d)), pk(d))),
                  pk(df)));
  kb.observe(d);
  Term target = fresh("loc", 1);
  for (auto _ : state) benchmark::DoNotOptimize(can_derive(kb, target, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_CanDerive)->Arg(2)->Arg(6);

void BM_EnumerateTraces(benchmark::State& state) {
  ScenarioBounds b;
  b.epochs = static_cast<std::uint32_t>(state.range(0));
  b.reports = static_cast<std::uint32_t>(state.range(1));
  b.reveals = RevealSet::all();
  for (auto _ : state) {
    auto stats = enumerate_traces(b, {}, [](const Trace&) {});
    state.counters["executions"] = static_cast<double>(stats.executions);
  }
}
BENCHMARK(BM_EnumerateTraces)->Args({1, 1})->Args({2, 1})->Args({3, 2})->Unit(benchmark::kMillisecond);

void BM_CheckLemma(benchmark::State& state) {
  const Lemma& l = *find_builtin_lemma("di_sec");
  for (auto _ : state) benchmark::DoNotOptimize(check_lemma(l, ScenarioBounds{}, {}));
}
BENCHMARK(BM_CheckLemma)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
