#include <doctest.h>

#include "lambdad/harness.hpp"
#include "lambdad/prelude.hpp"
#include "support.hpp"

using namespace lambdad;

TEST_CASE("every prelude entry checks, and the escapes are rejected") {
  auto env = prelude_environment();
  REQUIRE_MESSAGE(ok(env), error(env).str());
  auto reports = check_environment(value(env));
  CHECK(reports.size() > 10);
  std::size_t rejected = 0;
  for (auto &r : reports) {
    CHECK_MESSAGE(r.ok, r.name << ": " << r.message);
    rejected += r.expect_failure;
  }
  CHECK(rejected == prelude_expected_failures().size());
}

TEST_CASE("macros need all their arguments") {
  auto &env = testing::prelude();
  CHECK_FALSE(ok(env.link_def("alloc")));
  CHECK_FALSE(ok(env.link_def("no_such_definition")));
}

TEST_CASE("prelude programs give the expected values") {
  auto nat_list = [](const std::string &src) {
    auto b = testing::build("def r : List Nat = " + src, "r");
    return decode_nat_list(testing::run_built(b, false).value);
  };
  CHECK(nat_list("sharing") == std::vector<std::uint64_t>{0, 1, 0, 2});
  CHECK(nat_list("map succ (3 :: 1 :: [])") == std::vector<std::uint64_t>{4, 2});
  CHECK(nat_list("toList (concat (dsingle 1) (dsingle 2))") == std::vector<std::uint64_t>{1, 2});
  CHECK(nat_list("app (1 :: []) (2 :: [])") == std::vector<std::uint64_t>{1, 2});
  auto b = testing::build("def r : Bool = scope_ok", "r");
  CHECK(decode_bool(testing::run_built(b, false).value) == true);
}

TEST_CASE("every suite program runs") {
  for (auto &p : testing::prelude_suite()) {
    CAPTURE(p.label);
    auto b = testing::build(p.source, p.main_def, p.from_prime_primitive);
    CHECK(testing::run_built(b, false).value);
  }
}
