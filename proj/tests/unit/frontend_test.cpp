#include <doctest.h>

#include "lambdad/desugar.hpp"
#include "lambdad/parser.hpp"
#include "lambdad/prelude.hpp"
#include "lambdad/printer.hpp"

using namespace lambdad;

namespace {

void round_trip_term(const std::string &src) {
  CAPTURE(src);
  auto t = parse_term(src);
  REQUIRE_MESSAGE(ok(t), error(t).str());
  std::string printed = print(value(t));
  auto again = parse_term(printed);
  REQUIRE_MESSAGE(ok(again), printed);
  CHECK(print(value(again)) == printed);
  CHECK(term_eq(*value(t), *value(again)));
}

}  // namespace

TEST_CASE("modes parse in every spelling") {
  CHECK(value(parse_mode("[1]")) == m1nu());
  CHECK(value(parse_mode("[w]")) == mwnu());
  CHECK(value(parse_mode("[1 inf]")) == m1inf());
  CHECK(value(parse_mode("[w ^3]")) == mwup(3));
  CHECK(value(parse_mode("[1 ^1]")) == m1up());
}

TEST_CASE("terms survive print and parse") {
  for (const char *src : {
           "()",
           "\\x -> x",
           "\\x [w ^1] -> (x, x)",
           "case x of { Inl a -> a, Inr b -> b }",
           "case [1 inf] p of (a, b) -> a ; b",
           "upd new* with d -> d <| Inl",
           "from'* (upd new* with d -> d <! ())", "to* ()",
           "fix f : Nat -o Nat -> \\n -> f n",
           "() :: Inl ()",
           "d <o e",
       })
    round_trip_term(src);
}

TEST_CASE("every prelude file survives print and parse") {
  for (auto &[stem, src] : prelude_sources()) {
    CAPTURE(stem);
    auto p = parse_program(src);
    REQUIRE_MESSAGE(ok(p), error(p).str());
    auto again = parse_program(print(value(p)));
    REQUIRE_MESSAGE(ok(again), error(again).str());
    CHECK(program_eq(value(p), value(again)));
  }
}

TEST_CASE("parse errors carry a position") {
  auto t = parse_term("(()");
  REQUIRE_FALSE(ok(t));
  CHECK(error(t).kind == ErrorKind::ParseError);
  CHECK(error(t).pos.line == 1);
  CHECK_FALSE(ok(parse_program("def x : 1 = ")));
  CHECK_FALSE(ok(parse_type("1 -o")));
}

TEST_CASE("desugaring removes all sugar") {
  auto t = parse_term("from'* (upd new* with d -> d <! ())");
  REQUIRE(ok(t));
  auto d = desugar(value(t));
  auto p = print(d);
  CHECK(p.find("from'*") == std::string::npos);
  CHECK(p.find("from*") != std::string::npos);
}
