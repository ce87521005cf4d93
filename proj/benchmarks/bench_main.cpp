#include <benchmark/benchmark.h>

#include "musep/families.hpp"
#include "musep/synthesis.hpp"

using namespace musep;

static void BM_CompileCounterTrees(benchmark::State& state) {
  auto fam = gen_benchmark_family(FamilyKind::CounterTrees, static_cast<unsigned>(state.range(0)));
  for (auto _ : state) {
    auto a = compile(fam.left, fam.sig.actions(), fam.sig.props());
    benchmark::DoNotOptimize(a.size());
  }
}
BENCHMARK(BM_CompileCounterTrees)->DenseRange(1, 3);

static void BM_DecideCounterWords(benchmark::State& state) {
  auto fam = gen_benchmark_family(FamilyKind::CounterWords, static_cast<unsigned>(state.range(0)));
  EngineOptions o;
  o.model_class = fam.model_class;
  o.hint = fam.sig;
  for (auto _ : state) {
    SeparabilityProblem p(fam.left, fam.right, o);
    benchmark::DoNotOptimize(p.tallness());
  }
}
BENCHMARK(BM_DecideCounterWords)->DenseRange(2, 8, 2)->Unit(benchmark::kMillisecond);

static void BM_EvenRunPredicate(benchmark::State& state) {
  auto a = even_automaton();
  for (auto _ : state) {
    FormulaDag dag;
    WordUniformBuilder b(a, dag);
    benchmark::DoNotOptimize(b.run(static_cast<std::uint64_t>(state.range(0)), 0, 0));
  }
}
BENCHMARK(BM_EvenRunPredicate)->RangeMultiplier(2)->Range(64, 1024);

static void BM_EvenUniformConsequence(benchmark::State& state) {
  auto a = even_automaton();
  for (auto _ : state) {
    auto d = uniform_consequence_words(a, static_cast<std::uint64_t>(state.range(0)));
    benchmark::DoNotOptimize(d.reachable_count());
  }
}
BENCHMARK(BM_EvenUniformConsequence)->RangeMultiplier(4)->Range(16, 1024)->Unit(benchmark::kMillisecond);

static void BM_SeparateEvenOdd(benchmark::State& state) {
  auto fam = gen_benchmark_family(FamilyKind::EvenOdd, static_cast<unsigned>(state.range(0)));
  EngineOptions o;
  o.model_class = fam.model_class;
  o.hint = fam.sig;
  for (auto _ : state) {
    SeparabilityProblem p(fam.left, fam.right, o);
    auto d = uniform_consequence_words(p.left(), *p.verdict().n_min);
    benchmark::DoNotOptimize(d.reachable_count());
  }
}
BENCHMARK(BM_SeparateEvenOdd)->DenseRange(2, 8, 2)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
