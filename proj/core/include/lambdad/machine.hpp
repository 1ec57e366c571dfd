#pragma once

#include "lambdad/command.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lambdad {

struct StepResult {
  enum class Kind : std::uint8_t { Stepped, Final, Stuck };
  Kind kind = Kind::Stuck;
  std::string rule;
  Command next;
  ValueP value;        // Final
  std::string reason;  // Stuck
};

StepResult step(const Command &c);

// Every rule whose left-hand side matches `c`, each tested on its own.
std::vector<std::string> applicable_rules(const Command &c);

struct TraceStep {
  std::string rule;
  Command cmd;
};

struct Trace {
  Command origin;
  std::vector<TraceStep> steps;
};

struct RunResult {
  enum class Outcome : std::uint8_t { Finished, OutOfFuel, Stuck };
  Outcome outcome = Outcome::Stuck;
  ValueP value;
  Trace trace;
  std::uint64_t steps = 0;
  std::string reason;
  Command last;
};

RunResult run(const Command &c, std::uint64_t fuel, bool record = true);
inline Command initial(TermP t) { return Command{{}, std::move(t)}; }

bool is_final(const Command &c);

// Special substitution: writes `v` into hole h of the innermost open ampar
// binding h and replaces h by `fresh` in its hole set.
std::optional<EvalContext> hole_subst(const EvalContext &e, HoleName h, const HoleSet &fresh, const ValueP &v);

// Renames names in `hs` by +d, leaving names rebound by inner ampars alone.
ValueP cond_shift(const ValueP &v, const HoleSet &hs, HoleName d);
TermP cond_shift(const TermP &t, const HoleSet &hs, HoleName d);

// Renumbers ampar-bound names in depth-first order of first occurrence.
ValueP canonicalize(const ValueP &v);

}  // namespace lambdad
