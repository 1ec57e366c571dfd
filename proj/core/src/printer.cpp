#include "lambdad/printer.hpp"

#include <sstream>

namespace lambdad {

namespace {

enum TyLevel { TArrow, TAmpar, TSum, TProd, TPrefix, TApp, TAtom };

std::string ty_str(const TypeP &t, int level) {
  auto wrap = [&](int own, std::string s) { return level > own ? "(" + s + ")" : s; };
  switch (t->kind) {
    case TypeKind::Unit:
      return "1";
    case TypeKind::Arrow: {
      std::string arrow = t->m == m1nu() ? " -o " : " -o" + to_string(t->m) + " ";
      return wrap(TArrow, ty_str(t->a, TAmpar) + arrow + ty_str(t->b, TArrow));
    }
    case TypeKind::Ampar:
      return wrap(TAmpar, ty_str(t->a, TSum) + " >< " + ty_str(t->b, TSum));
    case TypeKind::Sum:
      return wrap(TSum, ty_str(t->a, TProd) + " + " + ty_str(t->b, TSum));
    case TypeKind::Prod:
      return wrap(TProd, ty_str(t->a, TPrefix) + " * " + ty_str(t->b, TProd));
    case TypeKind::Dest: {
      std::string head = t->m == m1nu() ? "Dest " : "Dest" + to_string(t->m) + " ";
      return wrap(TPrefix, head + ty_str(t->a, TPrefix));
    }
    case TypeKind::Bang:
      return wrap(TPrefix, "!" + to_string(t->m) + " " + ty_str(t->a, TPrefix));
    case TypeKind::Named: {
      if (t->args.empty()) return t->name;
      std::string s = t->name;
      for (auto &a : t->args) s += " " + ty_str(a, TAtom);
      return wrap(TApp, s);
    }
  }
  return "?";
}

enum Level { LSeq, LCons, LFill, LApp, LAtom };

std::string mode_suffix(const Mode &m) { return m == m1nu() ? "" : " " + to_string(m); }

std::string term_str(const TermP &t, int level, bool tail);

enum VLevel { VTop, VApp, VAtom };

std::string value_str(const ValueP &v, int level) {
  auto wrap = [&](int own, std::string s) { return level > own ? "(" + s + ")" : s; };
  switch (v->kind) {
    case ValueKind::Unit:
      return "()";
    case ValueKind::Hole:
      return "[]" + std::to_string(v->h);
    case ValueKind::Dest:
      return "->" + std::to_string(v->h);
    case ValueKind::Ampar: {
      std::string s = "{";
      for (std::size_t i = 0; i < v->holes.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(v->holes[i]);
      }
      return s + "}/" + value_str(v->a, VTop) + ", " + value_str(v->b, VTop) + "/";
    }
    case ValueKind::Inl:
      return wrap(VApp, "Inl " + value_str(v->a, VAtom));
    case ValueKind::Inr:
      return wrap(VApp, "Inr " + value_str(v->a, VAtom));
    case ValueKind::Mod:
      return wrap(VApp, "Mod" + to_string(v->m) + " " + value_str(v->a, VAtom));
    case ValueKind::Pair:
      return "(" + value_str(v->a, VTop) + ", " + value_str(v->b, VTop) + ")";
    case ValueKind::Lam:
      return "(\\" + v->x + mode_suffix(v->m) + " -> " + term_str(v->body, LSeq, true) + ")";
  }
  return "?";
}

std::string term_str(const TermP &t, int level, bool tail) {
  auto wrap = [&](int own, std::string s) { return level > own ? "(" + s + ")" : s; };
  // Binding forms extend as far right as possible.
  auto open_ended = [&](std::string s) { return tail ? s : "(" + s + ")"; };
  auto case_head = [&]() {
    return "case" + mode_suffix(t->m) + " " + term_str(t->a, LSeq, true) + " of ";
  };
  switch (t->kind) {
    case TermKind::Var:
      return t->x1;
    case TermKind::Seq:
      return wrap(LSeq, term_str(t->a, LCons, false) + " ; " + term_str(t->b, LSeq, tail || level > LSeq));
    case TermKind::ConsS:
      return wrap(LCons, term_str(t->a, LFill, false) + " :: " + term_str(t->b, LCons, tail || level > LCons));
    case TermKind::FillUnit:
      return wrap(LFill, term_str(t->a, LFill, false) + " <| Unit");
    case TermKind::FillInl:
      return wrap(LFill, term_str(t->a, LFill, false) + " <| Inl");
    case TermKind::FillInr:
      return wrap(LFill, term_str(t->a, LFill, false) + " <| Inr");
    case TermKind::FillPair:
      return wrap(LFill, term_str(t->a, LFill, false) + " <| Pair");
    case TermKind::FillBang:
      return wrap(LFill, term_str(t->a, LFill, false) + " <| Mod" + to_string(t->m));
    case TermKind::FillLeaf:
      return wrap(LFill, term_str(t->a, LFill, false) + " <! " + term_str(t->b, LApp, tail || level > LFill));
    case TermKind::FillComp:
      return wrap(LFill, term_str(t->a, LFill, false) + " <o " + term_str(t->b, LApp, tail || level > LFill));
    case TermKind::FillFun: {
      std::string s = term_str(t->a, LFill, false) + " <| Fun " + t->x1 + mode_suffix(t->m) + " -> " +
                      term_str(t->b, LSeq, true);
      return level > LFill ? "(" + s + ")" : open_ended(s);
    }
    case TermKind::App:
      return wrap(LApp, term_str(t->a, LApp, false) + " " + term_str(t->b, LAtom, tail || level > LApp));
    case TermKind::InlS:
      return wrap(LApp, "Inl " + term_str(t->a, LAtom, tail || level > LApp));
    case TermKind::InrS:
      return wrap(LApp, "Inr " + term_str(t->a, LAtom, tail || level > LApp));
    case TermKind::ModS:
      return wrap(LApp, "Mod" + to_string(t->m) + " " + term_str(t->a, LAtom, tail || level > LApp));
    case TermKind::To:
      return wrap(LApp, "to* " + term_str(t->a, LAtom, tail || level > LApp));
    case TermKind::From:
      return wrap(LApp, "from* " + term_str(t->a, LAtom, tail || level > LApp));
    case TermKind::FromPrime:
    case TermKind::FromPrimeS:
      return wrap(LApp, "from'* " + term_str(t->a, LAtom, tail || level > LApp));
    case TermKind::New:
      if (t->ty) return "(new* : " + ty_str(ty::ampar(t->ty, ty::dest(m1nu(), t->ty)), TArrow) + ")";
      return "new*";
    case TermKind::Ann:
      return "(" + term_str(t->a, LSeq, true) + " : " + ty_str(t->ty, TArrow) + ")";
    case TermKind::UnitS:
      return "()";
    case TermKind::NilS:
      return "[]";
    case TermKind::NatS:
      return std::to_string(t->nat);
    case TermKind::PairS:
      return "(" + term_str(t->a, LSeq, true) + ", " + term_str(t->b, LSeq, true) + ")";
    case TermKind::Val: {
      auto k = t->v->kind;
      if (k == ValueKind::Hole || k == ValueKind::Dest || k == ValueKind::Ampar) return value_str(t->v, VTop);
      if (k == ValueKind::Unit || k == ValueKind::Pair || k == ValueKind::Lam) return "@" + value_str(t->v, VTop);
      return "@(" + value_str(t->v, VTop) + ")";
    }
    case TermKind::LamS:
      return open_ended("\\" + t->x1 + mode_suffix(t->m) + " -> " + term_str(t->a, LSeq, true));
    case TermKind::Fix:
      return open_ended("fix " + t->x1 + " : " + ty_str(t->ty, TArrow) + " -> " + term_str(t->a, LSeq, true));
    case TermKind::Upd:
      return open_ended("upd " + term_str(t->a, LSeq, true) + " with " + t->x1 + " -> " +
                        term_str(t->b, LSeq, true));
    case TermKind::CaseSum:
      return case_head() + "{Inl " + t->x1 + " -> " + term_str(t->b, LSeq, true) + ", Inr " + t->x2 + " -> " +
             term_str(t->c, LSeq, true) + "}";
    case TermKind::CasePair:
      return open_ended(case_head() + "(" + t->x1 + ", " + t->x2 + ") -> " + term_str(t->b, LSeq, true));
    case TermKind::CaseBang:
      return open_ended(case_head() + "Mod" + to_string(t->n) + " " + t->x1 + " -> " +
                        term_str(t->b, LSeq, true));
    case TermKind::Open: {
      std::string s = "{";
      for (std::size_t i = 0; i < t->holes.size(); ++i) s += (i ? "," : "") + std::to_string(t->holes[i]);
      return s + "}open/" + value_str(t->v, VTop) + ", " + term_str(t->a, LSeq, true) + "/";
    }
  }
  return "?";
}

}  // namespace

std::string print(const Mode &m) { return to_string(m); }
std::string print(const TypeP &t) { return ty_str(t, TArrow); }
std::string print(const TermP &t) { return term_str(t, LSeq, true); }
std::string print(const ValueP &v) { return value_str(v, VTop); }

std::string print(const Program &p) {
  std::ostringstream os;
  for (auto &name : p.type_order) {
    auto &d = p.type_defs.at(name);
    os << "type " << name;
    for (auto &prm : d.params) os << " " << prm;
    os << " = " << print(d.body) << "\n";
  }
  for (auto &d : p.defs) {
    os << "def " << d.name;
    for (auto &prm : d.params) os << " " << prm;
    if (d.annotation) os << " : " << print(d.annotation);
    os << " =\n  " << print(d.body) << "\n";
  }
  if (p.main) os << "main = " << *p.main << "\n";
  return os.str();
}

}  // namespace lambdad
