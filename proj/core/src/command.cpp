#include "lambdad/command.hpp"

#include "lambdad/printer.hpp"

namespace lambdad {

const char *comp_name(CompKind k) {
  switch (k) {
    case CompKind::AppFun: return "AppFun";
    case CompKind::AppArg: return "AppArg";
    case CompKind::SeqL: return "SeqL";
    case CompKind::CaseSum: return "CaseSum";
    case CompKind::CasePair: return "CasePair";
    case CompKind::CaseBang: return "CaseBang";
    case CompKind::Upd: return "Upd";
    case CompKind::To: return "To";
    case CompKind::From: return "From";
    case CompKind::FromPrime: return "FromPrime";
    case CompKind::FillUnit: return "FillUnit";
    case CompKind::FillInl: return "FillInl";
    case CompKind::FillInr: return "FillInr";
    case CompKind::FillPair: return "FillPair";
    case CompKind::FillBang: return "FillBang";
    case CompKind::FillFun: return "FillFun";
    case CompKind::FillCompL: return "FillCompL";
    case CompKind::FillCompR: return "FillCompR";
    case CompKind::FillLeafL: return "FillLeafL";
    case CompKind::FillLeafR: return "FillLeafR";
    case CompKind::Ann: return "Ann";
    case CompKind::Open: return "Open";
  }
  return "?";
}

bool focus_in_b(CompKind k) {
  return k == CompKind::AppFun || k == CompKind::FillCompR || k == CompKind::FillLeafR;
}

TermP plug(const Comp &c, TermP focus) {
  if (c.kind == CompKind::Open) return tm::open(c.holes, c.left, std::move(focus));
  auto t = std::make_shared<Term>(*c.frame);
  if (focus_in_b(c.kind))
    t->b = std::move(focus);
  else
    t->a = std::move(focus);
  return t;
}

TermP plug(const EvalContext &e, TermP focus) {
  for (auto it = e.rbegin(); it != e.rend(); ++it) focus = plug(*it, std::move(focus));
  return focus;
}

TermP plug(const Command &c) { return plug(c.ctx, c.focus); }

void hnames(const Comp &c, std::set<HoleName> &out) {
  if (c.kind == CompKind::Open) {
    out.insert(c.holes.begin(), c.holes.end());
    hnames(c.left, out);
    return;
  }
  hnames(c.frame, out);
}

void hnames(const EvalContext &e, std::set<HoleName> &out) {
  for (auto &c : e) hnames(c, out);
}

void hnames(const Command &c, std::set<HoleName> &out) {
  hnames(c.ctx, out);
  hnames(c.focus, out);
}

std::string print(const Command &c) { return print(plug(c)); }

}  // namespace lambdad
