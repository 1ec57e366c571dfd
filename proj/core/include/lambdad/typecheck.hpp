#pragma once

#include "lambdad/ast.hpp"
#include "lambdad/command.hpp"
#include "lambdad/context.hpp"

#include <map>

namespace lambdad {

struct CheckOptions {
  // Destination values may only be consumed at outer mode 1nu, i.e. the
  // destination rule without its mode coercion.
  bool strict_dest = false;
  // Unified with the synthesized type before leftover unknowns are defaulted.
  TypeP expected;
};

// Sugar in `t` is expanded first (from'* through from*).
Result<TypeP> check_term(const TypeDefs &defs, const TypingContext &gamma, const TermP &t,
                         const CheckOptions &opts = {});

// First phase only, on a term without sugar: the arrow mode of every
// application and the inner mode of every leaf or function fill.
Result<std::map<const Term *, Mode>> infer_node_modes(const TypeDefs &defs, const TypingContext &gamma,
                                                     const TermP &t, const CheckOptions &opts = {});

Result<TypeP> check_value(const TypeDefs &defs, const TypingContext &theta, const ValueP &v,
                          const CheckOptions &opts = {});

struct EvalCtxTyping {
  TypingContext delta;  // destination bindings handed to the focus
  TypeP focus;
  TypeP final;
};

Result<EvalCtxTyping> check_evalctx(const TypeDefs &defs, const EvalContext &e,
                                    const CheckOptions &opts = {});

Result<TypeP> check_command(const TypeDefs &defs, const Command &c, const CheckOptions &opts = {});

// Open components must bind names unused by the components around them.
std::optional<TypeError> check_disjointness(const EvalContext &e);

}  // namespace lambdad
