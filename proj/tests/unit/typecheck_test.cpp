#include <doctest.h>

#include "lambdad/parser.hpp"
#include "lambdad/printer.hpp"
#include "lambdad/typecheck.hpp"
#include "support.hpp"

using namespace lambdad;

namespace {

Result<TypeP> check_src(const std::string &src) {
  auto t = parse_term(src);
  REQUIRE_MESSAGE(ok(t), error(t).str());
  auto linked = testing::prelude().link(value(t));
  REQUIRE_MESSAGE(ok(linked), error(linked).str());
  return check_term(testing::prelude().types(), {}, value(linked));
}

}  // namespace

TEST_CASE("linear functions may not duplicate their argument") {
  auto r = check_src("(\\x [1] -> (x, x)) ()");
  REQUIRE_FALSE(ok(r));
  CHECK(error(r).kind == ErrorKind::ModeNotAchievable);
  CHECK(ok(check_src("(\\x [w] -> (x, x)) ()")));
}

TEST_CASE("linear functions may not drop their argument") {
  CHECK_FALSE(ok(check_src("(\\x [1] -> ()) ()")));
  CHECK(ok(check_src("(\\x [1] -> x ; ()) ()")));
  CHECK(ok(check_src("(\\x [w] -> ()) ()")));
}

TEST_CASE("the cons example checks at a list of units") {
  auto r = check_src("() :: Inl ()");
  REQUIRE_MESSAGE(ok(r), error(r).str());
  auto list = parse_type("List 1");
  REQUIRE(ok(list));
  CheckOptions opts;
  opts.expected = value(list);
  auto t = parse_term("() :: Inl ()");
  CHECK(ok(check_term(testing::prelude().types(), {}, value(t), opts)));
}

TEST_CASE("storing a younger destination into an older one is an age escape") {
  for (const char *name : {"scope_escape2", "scope_escape3"}) {
    CAPTURE(name);
    auto r = check_src(name);
    REQUIRE_FALSE(ok(r));
    CHECK(error(r).kind == ErrorKind::AgeEscape);
  }
  CHECK(ok(check_src("scope_ok")));
}

TEST_CASE("an ampar with a unit right side can be released") {
  CHECK(ok(check_src("from'* (upd new* with d -> d <! ())")));
}
