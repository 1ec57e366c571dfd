#pragma once

#include "lambdad/ast.hpp"

#include <set>
#include <string>
#include <vector>

namespace lambdad {

enum class CompKind : std::uint8_t {
  AppFun,     // t' []      (argument under focus)
  AppArg,     // [] v       (function under focus)
  SeqL,       // [] ; u
  CaseSum,
  CasePair,
  CaseBang,
  Upd,        // upd [] with x -> t'
  To,
  From,
  FromPrime,
  FillUnit,
  FillInl,
  FillInr,
  FillPair,
  FillBang,
  FillFun,
  FillCompL,  // [] <o t'
  FillCompR,  // v <o []
  FillLeafL,  // [] <! t'
  FillLeafR,  // v <! []
  Ann,
  Open,       // {H}open/v2, []/
};

const char *comp_name(CompKind k);

// `frame` is the enclosing term with the focused slot set to null.
// Open components carry the hole set and the structure being built instead.
struct Comp {
  CompKind kind = CompKind::SeqL;
  TermP frame;
  HoleSet holes;
  ValueP left;
};

// Outermost component first.
using EvalContext = std::vector<Comp>;

struct Command {
  EvalContext ctx;
  TermP focus;
};

// True when the focus of this component sits in the second child slot.
bool focus_in_b(CompKind k);

TermP plug(const Comp &c, TermP focus);
TermP plug(const EvalContext &e, TermP focus);
TermP plug(const Command &c);

void hnames(const Comp &c, std::set<HoleName> &out);
void hnames(const EvalContext &e, std::set<HoleName> &out);
void hnames(const Command &c, std::set<HoleName> &out);

// The plugged term; open components print as {H}open/v, t/.
std::string print(const Command &c);

}  // namespace lambdad
