#include <doctest.h>

#include "lambdad/desugar.hpp"
#include "lambdad/harness.hpp"
#include "lambdad/machine.hpp"
#include "lambdad/parser.hpp"
#include "lambdad/printer.hpp"
#include "support.hpp"

using namespace lambdad;

namespace {

TermP parsed(const std::string &src) {
  auto t = parse_term(src);
  REQUIRE_MESSAGE(ok(t), error(t).str());
  return desugar(value(t));
}

}  // namespace

TEST_CASE("golden trace of the cons example") {
  auto b = testing::build("def c : List 1 = () :: Inl ()", "c", true);
  auto r = testing::run_built(b, true);
  CHECK(print(r.value) == "Inr ((), Inl ())");
  auto &steps = r.trace.steps;
  REQUIRE(steps.size() >= 8);
  std::vector<std::string> head, tail;
  for (std::size_t i = 0; i < 5; ++i) head.push_back(steps[i].rule);
  for (std::size_t i = steps.size() - 3; i < steps.size(); ++i) tail.push_back(steps[i].rule);
  CHECK(head == std::vector<std::string>{"⋉FROM′F", "⋉UPDF", "⋉newC", "⋉UPDU", "⋉OP"});
  CHECK(tail == std::vector<std::string>{"⋉CL", "⋉FROM′U", "⋉FROM′C"});
}

TEST_CASE("beta reduction and case on sums") {
  auto r = run(initial(parsed("(\\x [w] -> (x, x)) (Inl ())")), 100);
  REQUIRE(r.outcome == RunResult::Outcome::Finished);
  CHECK(print(r.value) == "(Inl (), Inl ())");
  r = run(initial(parsed("case Inr () of { Inl a -> Inl a, Inr b -> Inl b }")), 100);
  REQUIRE(r.outcome == RunResult::Outcome::Finished);
  CHECK(print(r.value) == "Inl ()");
}

TEST_CASE("ill-typed terms get stuck") {
  auto r = run(initial(parsed("() ()")), 100);
  CHECK(r.outcome == RunResult::Outcome::Stuck);
  CHECK_FALSE(r.reason.empty());
  r = run(initial(parsed("case () of (a, b) -> a")), 100);
  CHECK(r.outcome == RunResult::Outcome::Stuck);
}

TEST_CASE("fuel bounds the run") {
  auto b = testing::build("def l : List Nat = map succ (1 :: 2 :: 3 :: [])", "l");
  auto r = run(initial(b.term), 5);
  CHECK(r.outcome == RunResult::Outcome::OutOfFuel);
  CHECK(r.steps == 5);
  auto full = testing::run_built(b, false);
  CHECK(decode_nat_list(full.value) == std::vector<std::uint64_t>{2, 3, 4});
}

TEST_CASE("each non-final command has exactly one applicable rule") {
  auto b = testing::build("def s : List Nat = sharing", "s");
  auto r = testing::run_built(b, true);
  for (auto *c : trace_commands(r.trace))
    if (!is_final(*c)) REQUIRE(applicable_rules(*c).size() == 1);
}

TEST_CASE("canonical hole names follow first occurrence") {
  auto v = parse_value("{3, 9} / Inl (h9, h3), ()/");
  if (ok(v)) CHECK(print(canonicalize(value(v))) == print(canonicalize(canonicalize(value(v)))));
}
