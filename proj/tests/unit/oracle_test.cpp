#include <doctest.h>

#include "lambdad/desugar.hpp"
#include "lambdad/harness.hpp"
#include "lambdad/parser.hpp"
#include "lambdad/typecheck.hpp"
#include "support.hpp"

#include <stdexcept>

using namespace lambdad;

namespace {

bool oracle(const std::string &src) {
  auto t = parse_term(src);
  REQUIRE_MESSAGE(ok(t), error(t).str());
  return oracle_declarative_check(testing::prelude().types(), value(t), {});
}

bool checker(const std::string &src) {
  auto t = parse_term(src);
  REQUIRE(ok(t));
  return ok(check_term(testing::prelude().types(), {}, value(t)));
}

}  // namespace

TEST_CASE("small verdicts") {
  CHECK(oracle("(\\x [w] -> (x, x)) ()"));
  CHECK_FALSE(oracle("(\\x [1] -> (x, x)) ()"));
  CHECK_FALSE(oracle("(\\x [1] -> ()) ()"));
  CHECK(oracle("(\\x [1 inf] -> x) ()"));
}

TEST_CASE("the oracle refuses terms over its bound") {
  auto t = parse_term("((), ((), ((), ((), ((), ((), ((), ())))))))");
  REQUIRE(ok(t));
  CHECK_THROWS_AS(oracle_declarative_check(testing::prelude().types(), value(t), {}, 4), std::length_error);
}

TEST_CASE("oracle and checker agree on the pool") {
  auto pool = testing::oracle_pool();
  CHECK(pool.size() >= 200);
  for (auto &src : pool) {
    CAPTURE(src);
    CHECK(oracle(src) == checker(src));
  }
}
