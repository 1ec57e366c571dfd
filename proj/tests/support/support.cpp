#include "support.hpp"

#include "lambdad/desugar.hpp"
#include "lambdad/printer.hpp"
#include "lambdad/typecheck.hpp"

#include <stdexcept>

namespace lambdad::testing {

const Environment &prelude() {
  static const Environment env = [] {
    auto e = load_prelude();
    if (!ok(e)) throw std::runtime_error("prelude: " + error(e).str());
    return value(e);
  }();
  return env;
}

Built build(const std::string &src, const std::string &name, bool from_prime_primitive) {
  Built b{prelude(), nullptr, nullptr};
  auto p = parse_program(src);
  if (!ok(p)) throw std::runtime_error("parse: " + error(p).str());
  if (auto e = b.env.add(value(p))) throw std::runtime_error("add: " + e->str());
  auto linked = b.env.link_def(name);
  if (!ok(linked)) throw std::runtime_error("link: " + error(linked).str());
  DesugarOptions d;
  d.from_prime_primitive = from_prime_primitive;
  b.term = desugar(value(linked), d);
  CheckOptions opts;
  opts.expected = b.env.find(name)->annotation;
  auto ty = check_term(b.env.types(), {}, b.term, opts);
  if (!ok(ty)) throw std::runtime_error("check " + name + ": " + error(ty).str());
  b.type = value(ty);
  return b;
}

RunResult run_built(const Built &b, bool record, std::uint64_t fuel) {
  auto r = run(initial(b.term), fuel, record);
  if (r.outcome != RunResult::Outcome::Finished)
    throw std::runtime_error("run did not finish after " + std::to_string(r.steps) + " steps: " + r.reason);
  return r;
}

TermP prelude_function(const std::string &name) {
  auto linked = prelude().link_def(name);
  if (!ok(linked)) throw std::runtime_error("link: " + error(linked).str());
  return desugar(value(linked));
}

std::vector<std::string> oracle_pool() {
  // A and B are replaced by every pair of annotation modes.
  static const char *const templates[] = {
      "(\\x [A] -> (x, x)) ()",
      "(\\x [A] -> ()) ()",
      "(\\x [A] -> x ; x) ()",
      "(\\f [A] -> f ()) (\\y [B] -> y)",
      "(\\x [A] -> (\\y [B] -> x ; y) ()) ()",
      "(\\x [A] -> case [B] x of (a, b) -> a ; b) ((), ())",
      "(\\x [A] -> case [B] x of {Inl a -> a, Inr b -> b}) (Inl ())",
      "(\\x [A] -> case x of Mod[B] y -> y ; y) (Mod[B] ())",
      "case [A] Mod[B] () of Mod[B] y -> y",
      "(\\x [A] -> from' (upd new* with d -> d <! x)) ()",
      "(\\x [A] -> upd new* with d -> d <! x) ()",
      "(\\x [A] -> upd new* with d -> d <| Fun y [B] -> x) ()",
      "(\\x [A] -> Mod[B] x) ()",
      "(\\x [A] -> (\\y [B] -> y) x) ()",
      "upd (new* : 1 >< Dest 1) with d -> (\\x [A] -> d <| Unit) ()",
      "upd (new* : 1 >< Dest 1) with d -> (\\x [A] -> x <| Unit) d",
      "upd (new* : 1 >< Dest 1) with d -> case [A] (d, ()) of (e, u) -> e <| Unit ; u",
  };
  static const char *const modes[] = {"1", "w", "1 inf", "w inf", "1 ^1"};
  std::vector<std::string> out;
  for (std::string t : templates) {
    const bool has_b = t.find('B') != std::string::npos;
    for (const char *a : modes)
      for (const char *b : modes) {
        if (!has_b && b != modes[0]) continue;
        std::string s = t;
        for (std::size_t i; (i = s.find('A')) != std::string::npos;) s.replace(i, 1, a);
        for (std::size_t i; (i = s.find('B')) != std::string::npos;) s.replace(i, 1, b);
        out.push_back(s);
      }
  }
  return out;
}

std::string dlist_concat_program(int k) {
  std::string s = "dsingle 0";
  for (int i = 1; i < k; ++i) s = "concat (" + s + ") (dsingle " + std::to_string(i % 10) + ")";
  return "def joined : List Nat = toList (" + s + ")";
}

std::string naive_append_program(int k) {
  std::string s = "0 :: []";
  for (int i = 1; i < k; ++i) s = "app (" + s + ") (" + std::to_string(i % 10) + " :: [])";
  return "def joined : List Nat = " + s;
}

std::vector<SuiteProgram> prelude_suite() {
  return {
      {"cons-from-prime", "def cons_example : List 1 = () :: Inl ()", "cons_example", true},
      {"cons", "def cons_example : List 1 = () :: Inl ()", "cons_example", false},
      {"scope_ok", "def s : Bool = scope_ok", "s", false},
      {"sharing", "def s : List Nat = sharing", "s", false},
      {"happ", "def s : List Nat = happ_demo", "s", false},
      {"hcomp", "def s : List Nat = hcomp_demo", "s", false},
      {"map", "def s : List Nat = map succ (3 :: 0 :: [])", "s", false},
      {"dlist", dlist_concat_program(3), "joined", false},
      {"naive-append", naive_append_program(3), "joined", false},
      {"relabel",
       "def t : Tree 1 = Inr ((), (Inr ((), (Inl (), Inl ())), Inl ()))\n"
       "def s : Tree Nat = relabelDps t",
       "s", false},
      {"queue",
       "def s : List (1 + Nat) * List Nat = runQueue (Inr 1 :: Inl () :: Inl () :: Inr 2 :: [])", "s", false},
  };
}

}  // namespace lambdad::testing
