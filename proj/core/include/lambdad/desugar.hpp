#pragma once

#include "lambdad/ast.hpp"

namespace lambdad {

struct DesugarOptions {
  // Keep from'* as a primitive with its own reduction rules instead of
  // expanding it through from*.
  bool from_prime_primitive = false;
};

// Expands every sugar constructor; core constructors are kept as they are.
TermP desugar(const TermP &t, const DesugarOptions &opts = {});
ValueP desugar(const ValueP &v, const DesugarOptions &opts = {});

}  // namespace lambdad
