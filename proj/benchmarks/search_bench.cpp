#include <benchmark/benchmark.h>

#include "pluralis/audit.hpp"
#include "pluralis/principles.hpp"
#include "pluralis/search.hpp"
#include "pluralis/syntax.hpp"

using namespace pluralis;

namespace {

void BM_Parse(benchmark::State& state) {
  const char* text = "[] forall x. (x in xx + a <-> (x in xx | x = a)) & exists yy. (xx == yy & ~FF(yy))";
  for (auto _ : state) benchmark::DoNotOptimize(parse_formula(text));
}
BENCHMARK(BM_Parse);

void BM_Print(benchmark::State& state) {
  const Formula f = get_principle({"PartialRigidificationV", DomainMode::Variable});
  for (auto _ : state) benchmark::DoNotOptimize(print_formula(f));
}
BENCHMARK(BM_Print);

void BM_CountModels(benchmark::State& state) {
  const Signature sig = standard_signature();
  const SearchBounds b{static_cast<int>(state.range(0)), static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(count_models(sig, b));
}
BENCHMARK(BM_CountModels)->Arg(2)->Arg(3);

// Full sweeps of valid principles: the search cannot stop early.
void BM_ValidPrinciple(benchmark::State& state, const char* name, int size, FrameClass fc, DomainMode mode) {
  const Formula f = get_principle({name, mode});
  const SearchBounds b{size, size, fc, mode};
  std::uint64_t examined = 0;
  for (auto _ : state) {
    const Verdict v = check_validity(f, b);
    examined = v.models_examined;
    benchmark::DoNotOptimize(v);
  }
  state.counters["models"] = static_cast<double>(examined);
}
BENCHMARK_CAPTURE(BM_ValidPrinciple, UniAdj_2, "UniAdj", 2, FrameClass::K, DomainMode::Fixed);
BENCHMARK_CAPTURE(BM_ValidPrinciple, NecId_3, "NecId", 3, FrameClass::K, DomainMode::Fixed);
BENCHMARK_CAPTURE(BM_ValidPrinciple, PartialRigidification_2, "PartialRigidification", 2, FrameClass::K,
                  DomainMode::Fixed);
BENCHMARK_CAPTURE(BM_ValidPrinciple, VComprehension_3, "VComprehension", 3, FrameClass::K, DomainMode::Variable);

void BM_FirstCountermodel(benchmark::State& state, const char* name, DomainMode mode) {
  const Formula f = get_principle({name, mode});
  const SearchBounds b{2, 2, FrameClass::K, mode};
  for (auto _ : state) benchmark::DoNotOptimize(check_validity(f, b));
}
BENCHMARK_CAPTURE(BM_FirstCountermodel, NecInc_fixed, "NecInc", DomainMode::Fixed);
BENCHMARK_CAPTURE(BM_FirstCountermodel, NecInc_variable, "NecInc", DomainMode::Variable);
BENCHMARK_CAPTURE(BM_FirstCountermodel, Cov, "Cov", DomainMode::Fixed);

void BM_TraversalEntailmentT(benchmark::State& state) {
  const AuditQuery q{{traversal("aa", {"a", "b", "c"}, true), parse_formula("y in aa")},
                     parse_formula("[] y in aa"),
                     SearchBounds{3, 3, FrameClass::T, DomainMode::Fixed}};
  for (auto _ : state) benchmark::DoNotOptimize(check_entailment(q));
}
BENCHMARK(BM_TraversalEntailmentT)->Unit(benchmark::kMillisecond);

void BM_AuditBuiltin(benchmark::State& state) {
  const auto scripts = builtin_scripts();
  const ArgumentScript& s = scripts[static_cast<std::size_t>(state.range(0))];
  state.SetLabel(s.name);
  for (auto _ : state) benchmark::DoNotOptimize(audit(s, default_bounds(s)));
}
BENCHMARK(BM_AuditBuiltin)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
