#include "lambdad/desugar.hpp"
#include "lambdad/harness.hpp"
#include "lambdad/machine.hpp"
#include "lambdad/mode.hpp"
#include "lambdad/prelude.hpp"
#include "lambdad/typecheck.hpp"

#include <benchmark/benchmark.h>

#include <stdexcept>
#include <string>

using namespace lambdad;

namespace {

// Left-nested joins of k singleton lists, as in the step-count tests.
std::string joins(int k, bool dlist) {
  std::string acc = dlist ? "dsingle 0" : "(0 :: [])";
  for (int i = 1; i < k; ++i) {
    std::string x = std::to_string(i % 10);
    acc = dlist ? "concat (" + acc + ") (dsingle " + x + ")" : "app (" + acc + ") (" + x + " :: [])";
  }
  return "def joined : List Nat = " + (dlist ? "toList (" + acc + ")" : acc);
}

const Environment &prelude() {
  static const Environment base = [] {
    auto env = load_prelude();
    if (!ok(env)) throw std::runtime_error(error(env).str());
    return value(env);
  }();
  return base;
}

TermP linked(const std::string &src, const std::string &name) {
  Environment env = prelude();
  auto p = parse_program(src);
  if (!ok(p)) throw std::runtime_error(error(p).str());
  env.add(value(p));
  auto t = env.link_def(name);
  if (!ok(t)) throw std::runtime_error(error(t).str());
  return desugar(value(t));
}

void BM_Run(benchmark::State &state, bool dlist) {
  TermP t = linked(joins(static_cast<int>(state.range(0)), dlist), "joined");
  std::uint64_t steps = 0;
  for (auto _ : state) {
    auto r = run(initial(t), 10000000, false);
    steps = r.steps;
    benchmark::DoNotOptimize(r.value);
  }
  state.counters["steps"] = static_cast<double>(steps);
  state.counters["steps/s"] = benchmark::Counter(static_cast<double>(steps), benchmark::Counter::kIsIterationInvariantRate);
}

void BM_DListConcat(benchmark::State &state) { BM_Run(state, true); }
void BM_NaiveAppend(benchmark::State &state) { BM_Run(state, false); }

void BM_CheckRelabel(benchmark::State &state) {
  TermP t = linked("def t : Tree 1 = Inr ((), (Inr ((), (Inl (), Inl ())), Inl ()))\n"
                   "def s : Tree Nat = relabelDps t",
                   "s");
  for (auto _ : state) benchmark::DoNotOptimize(check_term(prelude().types(), {}, t));
}

void BM_ModeSetPlus(benchmark::State &state) {
  auto bound = static_cast<std::uint32_t>(state.range(0));
  auto a = ModeSet::discard(bound).plus(ModeSet::use(bound));
  auto b = ModeSet::use(bound).scale(m1up(3));
  for (auto _ : state) benchmark::DoNotOptimize(a.plus(b));
}

}  // namespace

BENCHMARK(BM_DListConcat)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NaiveAppend)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CheckRelabel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ModeSetPlus)->Arg(16)->Arg(100);

BENCHMARK_MAIN();
