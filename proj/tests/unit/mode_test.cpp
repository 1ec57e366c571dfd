#include <doctest.h>

#include "lambdad/mode.hpp"

using namespace lambdad;

namespace {

std::vector<Mode> small_universe() {
  std::vector<Mode> u;
  for (Mult p : {Mult::One, Mult::Many}) {
    for (std::uint32_t k = 0; k <= 8; ++k) u.push_back(Mode{p, Age::fin(k)});
    u.push_back(Mode{p, Age::infinite()});
  }
  return u;
}

}  // namespace

TEST_CASE("mode sums are omega and keep only equal ages") {
  CHECK(mode_plus(m1nu(), m1nu()) == mwnu());
  CHECK(mode_plus(m1up(), m1up()) == mwup());
  CHECK(mode_plus(m1nu(), m1up()) == mwinf());
  CHECK(mode_plus(m1inf(), m1inf()) == mwinf());
}

TEST_CASE("mode products multiply and add ages") {
  CHECK(mode_times(m1up(), m1up()) == m1up(2));
  CHECK(mode_times(mwnu(), m1up()) == mwup());
  CHECK(mode_times(m1inf(), m1up()) == m1inf());
  CHECK(mode_times(m1nu(), mwinf()) == mwinf());
}

TEST_CASE("semiring laws hold on the bounded universe") {
  auto u = small_universe();
  for (Mode a : u)
    for (Mode b : u) {
      CHECK(mode_plus(a, b) == mode_plus(b, a));
      for (Mode c : u) {
        REQUIRE(mode_plus(mode_plus(a, b), c) == mode_plus(a, mode_plus(b, c)));
        REQUIRE(mode_times(mode_times(a, b), c) == mode_times(a, mode_times(b, c)));
        REQUIRE(mode_times(a, mode_plus(b, c)) == mode_plus(mode_times(a, b), mode_times(a, c)));
      }
    }
  for (Mode a : u) CHECK(mode_times(m1nu(), a) == a);
}

TEST_CASE("order: 1nu sits below omega and infinity, ages are otherwise incomparable") {
  CHECK(mode_leq(m1nu(), mwnu()));
  CHECK(mode_leq(m1nu(), m1inf()));
  CHECK(mode_leq(m1nu(), mwinf()));
  CHECK_FALSE(mode_leq(m1nu(), m1up()));
  CHECK_FALSE(mode_leq(mwnu(), m1nu()));
  auto u = small_universe();
  for (Mode a : u)
    for (Mode b : u)
      if (mode_leq(a, b))
        for (Mode c : u) {
          REQUIRE(mode_leq(mode_times(c, a), mode_times(c, b)));
          REQUIRE(mode_leq(mode_plus(a, c), mode_plus(b, c)));
        }
}

TEST_CASE("mode sets") {
  const std::uint32_t bound = 70;
  auto s = ModeSet::single(bound, m1nu());
  CHECK(s.contains(m1nu()));
  CHECK_FALSE(s.has_absent());

  SUBCASE("scaling shifts ages, past a word boundary too") {
    auto t = s.scale(m1up(65));
    CHECK(t.contains(m1up(65)));
    CHECK_FALSE(t.contains(m1nu()));
    CHECK(t.preimage(m1up(65)).contains(m1nu()));
  }
  SUBCASE("sum of two uses") {
    auto t = s.plus(s);
    CHECK(t.contains(mwnu()));
    CHECK_FALSE(t.contains(m1nu()));
    CHECK_FALSE(t.contains(mwinf()));
  }
  SUBCASE("absent is neutral for sums") {
    auto a = ModeSet::absent(bound);
    CHECK(a.plus(s) == s);
  }
  SUBCASE("discard contains absent and every omega mode") {
    auto d = ModeSet::discard(bound);
    CHECK(d.has_absent());
    CHECK(d.contains(mwup(3)));
    CHECK(d.contains(mwinf()));
    CHECK_FALSE(d.contains(m1nu()));
  }
  CHECK(ModeSet::use(bound).str() == "{[1 ^0], [1 inf], [w ^0], [w inf]}");
}
