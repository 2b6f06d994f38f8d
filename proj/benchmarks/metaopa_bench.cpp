#include <benchmark/benchmark.h>

#include <string>

#include "metaopa/deciders.hpp"
#include "metaopa/model.hpp"
#include "metaopa/pda.hpp"
#include "metaopa/presburger.hpp"
#include "metaopa/regions.hpp"
#include "metaopa/semilinear.hpp"
#include "metaopa/transforms.hpp"

using namespace metaopa;

namespace {

GuardedMeta fixture(const std::string& name) { return load_model(std::string(METAOPA_MODELS_DIR) + "/" + name); }

// Ring of n states over {inc, dec, a}; every third state is accepting.
Nfa ring(std::size_t n) {
  Nfa a;
  a.alphabet = {"inc", "dec", "a"};
  for (std::size_t i = 0; i < n; ++i) a.add_state(i % 3 == 0);
  for (std::size_t i = 0; i < n; ++i) {
    a.add_transition(i, static_cast<int>(i % 3), (i + 1) % n);
    a.add_transition(i, 0, i);
  }
  return a;
}

void BM_OneClockRegionChain(benchmark::State& st) {
  const MaxConstants m{static_cast<int>(st.range(0))};
  for (auto _ : st) benchmark::DoNotOptimize(time_successors(zero_region(1), m));
}
BENCHMARK(BM_OneClockRegionChain)->Arg(4)->Arg(64)->Arg(512);

void BM_RegionAutomaton(benchmark::State& st) {
  const GuardedMeta ta = strip_energies(split_and_relabel(fixture("priv_loop_en.json")));
  for (auto _ : st) benchmark::DoNotOptimize(build_region_automaton(ta).nfa.size());
}
BENCHMARK(BM_RegionAutomaton);

void BM_ParikhOfNfa(benchmark::State& st) {
  const Nfa a = ring(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(parikh_of_nfa(a, {"inc", "dec", "a"}));
}
BENCHMARK(BM_ParikhOfNfa)->Arg(3)->Arg(6)->Arg(9);

void BM_ParikhOfEnergyPda(benchmark::State& st) {
  const Pda p = energy_pda_of_nfa(ring(static_cast<std::size_t>(st.range(0))));
  for (auto _ : st) benchmark::DoNotOptimize(parikh_of_pda(p, {"a"}));
}
BENCHMARK(BM_ParikhOfEnergyPda)->Arg(3)->Arg(6);

void BM_SemilinearInclusion(benchmark::State& st) {
  const auto a = parse_semilinear("α1(2,0) + α2(0,3) ∪ (1,1) + α(1,1)");
  const auto b = parse_semilinear("(4,6) + α1(2,3) + α2(6,0)");
  for (auto _ : st) benchmark::DoNotOptimize(includes(a, b).included);
}
BENCHMARK(BM_SemilinearInclusion);

void BM_PresburgerSolve(benchmark::State& st) {
  namespace pb = metaopa::presburger;
  const auto x = pb::Term::var(0), y = pb::Term::var(1);
  const auto f = pb::land({pb::eq(x * BigInt(7) + y * BigInt(11), pb::Term::num(st.range(0))),
                           pb::ge(x, pb::Term::num(0)), pb::ge(y, pb::Term::num(0))});
  for (auto _ : st) benchmark::DoNotOptimize(pb::solve({0, 1}, f).has_value());
}
BENCHMARK(BM_PresburgerSolve)->Arg(100)->Arg(1000);

void BM_Decide(benchmark::State& st, const std::string& model, Property p, Variant v) {
  const GuardedMeta m = fixture(model);
  const OpacityQuery q{p, v};
  for (auto _ : st) benchmark::DoNotOptimize(decide(m, q).status);
}
BENCHMARK_CAPTURE(BM_Decide, en_full_priv_loop, "priv_loop_en.json", Property::EN, Variant::FULL);
BENCHMARK_CAPTURE(BM_Decide, de_weak_deo_example, "deo_example.json", Property::DE, Variant::WEAK);
BENCHMARK_CAPTURE(BM_Decide, bde_full_buffered, "buffered_eta.json", Property::BDE, Variant::FULL);
BENCHMARK_CAPTURE(BM_Decide, en_weak_guarded, "guarded_eta.json", Property::EN, Variant::WEAK);

}  // namespace

BENCHMARK_MAIN();
