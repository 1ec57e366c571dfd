#pragma once

#include "lambdad/harness.hpp"
#include "lambdad/prelude.hpp"

#include <string>
#include <vector>

namespace lambdad::testing {

// The checked prelude, loaded once.
const Environment &prelude();

struct Built {
  Environment env;
  TermP term;  // linked and desugared
  TypeP type;
};

// Adds the definitions in `src` to the prelude and links, desugars and
// checks `name` at its annotation. Throws std::runtime_error on failure.
Built build(const std::string &src, const std::string &name, bool from_prime_primitive = false);

// Runs `b` to completion; throws unless it finishes within `fuel`.
RunResult run_built(const Built &b, bool record, std::uint64_t fuel = 1000000);

// Closed terms of at most 12 nodes, annotated with modes from
// {1nu, wnu, 1inf, winf, 1up}, in a fixed order.
std::vector<std::string> oracle_pool();

// k singleton lists joined left-nested, through difference lists or through
// naive append; both evaluate to [0, 1, ..., 9, 0, 1, ...] of length k.
std::string dlist_concat_program(int k);
std::string naive_append_program(int k);

struct SuiteProgram {
  std::string label;
  std::string source;  // defines `main_def`
  std::string main_def;
  bool from_prime_primitive = false;
};

// Small instances of every prelude program, run by the metatheory checks.
std::vector<SuiteProgram> prelude_suite();

// Linked and desugared closed function `name` from the prelude.
TermP prelude_function(const std::string &name);

}  // namespace lambdad::testing
