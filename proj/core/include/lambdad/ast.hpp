#pragma once

#include "lambdad/mode.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace lambdad {

using HoleName = std::uint32_t;
using HoleSet = std::vector<HoleName>;  // sorted, no duplicates

struct Pos {
  int line = 0;
  int col = 0;
};

struct Type;
struct Term;
struct Value;
using TypeP = std::shared_ptr<const Type>;
using TermP = std::shared_ptr<const Term>;
using ValueP = std::shared_ptr<const Value>;

// ---------------------------------------------------------------- types

enum class TypeKind : std::uint8_t { Unit, Sum, Prod, Bang, Arrow, Dest, Ampar, Named };

struct Type {
  TypeKind kind = TypeKind::Unit;
  TypeP a, b;  // Sum/Prod/Ampar: left, right. Arrow: dom, cod. Bang/Dest: inner in a.
  Mode m;      // Bang, Arrow, Dest
  std::string name;
  std::vector<TypeP> args;  // Named
};

namespace ty {
TypeP unit();
TypeP sum(TypeP l, TypeP r);
TypeP prod(TypeP l, TypeP r);
TypeP bang(Mode m, TypeP t);
TypeP arrow(TypeP dom, Mode m, TypeP cod);
TypeP dest(Mode n, TypeP t);
TypeP ampar(TypeP l, TypeP r);
TypeP named(std::string name, std::vector<TypeP> args = {});
}  // namespace ty

// Purely structural: Named types are compared by name and arguments.
bool type_eq(const Type &a, const Type &b);

struct TypeDef {
  std::vector<std::string> params;
  TypeP body;
};
using TypeDefs = std::map<std::string, TypeDef>;

// Replace parameter names (as Named with no args) by the given types.
TypeP subst_type_params(const TypeP &t, const std::map<std::string, TypeP> &sub);
// One-level unfolding of a Named type, nullptr if it is not declared.
TypeP unfold_named(const TypeDefs &defs, const Type &t);
// Equality up to unfolding of recursive definitions.
bool type_equiv(const TypeDefs &defs, const TypeP &a, const TypeP &b);

// ---------------------------------------------------------------- terms

enum class TermKind : std::uint8_t {
  Var, App, Seq, CaseSum, CasePair, CaseBang, Upd, To, From, New,
  FillUnit, FillInl, FillInr, FillPair, FillBang, FillFun, FillComp, FillLeaf,
  Val, Fix, FromPrime, Ann,
  // internal: an open ampar plugged back as a term while checking a command
  Open,
  // sugar
  UnitS, InlS, InrS, PairS, ModS, LamS, FromPrimeS, NatS, ConsS, NilS,
};

bool is_sugar(TermKind k);
const char *kind_name(TermKind k);

//  Var        x1
//  App        a = function, b = argument
//  Seq        a ; b
//  CaseSum    case[m] a of {Inl x1 -> b, Inr x2 -> c}
//  CasePair   case[m] a of (x1, x2) -> b
//  CaseBang   case[m] a of Mod[n] x1 -> b
//  Upd        upd a with x1 -> b
//  New        optional ty: the type T in T >< Dest T
//  FillBang   a <| Mod[m]
//  FillFun    a <| Fun x1 [m] -> b
//  FillComp   a <o b      FillLeaf   a <! b
//  Fix        fix x1 : ty -> a
//  Ann        (a : ty)
//  Open       holes/v (left value) around body a
//  ModS       Mod[m] a    LamS  \x1 [m] -> a    NatS  nat
struct Term {
  TermKind kind = TermKind::Var;
  Pos pos;
  std::string x1, x2;
  Mode m, n;
  TermP a, b, c;
  ValueP v;
  TypeP ty;
  std::uint64_t nat = 0;
  HoleSet holes;
};

// ---------------------------------------------------------------- values

enum class ValueKind : std::uint8_t { Hole, Dest, Ampar, Unit, Inl, Inr, Mod, Pair, Lam };

//  Ampar  {holes}/a, b/   a is the structure with holes, b the right side
//  Lam    \x [m] -> body
struct Value {
  ValueKind kind = ValueKind::Unit;
  HoleName h = 0;
  HoleSet holes;
  ValueP a, b;
  Mode m;
  std::string x;
  TermP body;
};

namespace val {
ValueP hole(HoleName h);
ValueP dest(HoleName h);
ValueP ampar(HoleSet hs, ValueP left, ValueP right);
ValueP unit();
ValueP inl(ValueP v);
ValueP inr(ValueP v);
ValueP mod(Mode m, ValueP v);
ValueP pair(ValueP l, ValueP r);
ValueP lam(std::string x, Mode m, TermP body);
}  // namespace val

namespace tm {
TermP var(std::string x, Pos p = {});
TermP app(TermP f, TermP arg, Pos p = {});
TermP seq(TermP l, TermP r, Pos p = {});
TermP case_sum(Mode m, TermP s, std::string x1, TermP b1, std::string x2, TermP b2, Pos p = {});
TermP case_pair(Mode m, TermP s, std::string x1, std::string x2, TermP body, Pos p = {});
TermP case_bang(Mode m, TermP s, Mode n, std::string x, TermP body, Pos p = {});
TermP upd(TermP s, std::string x, TermP body, Pos p = {});
TermP to(TermP t, Pos p = {});
TermP from(TermP t, Pos p = {});
TermP new_(TypeP t = nullptr, Pos p = {});
TermP fill_unit(TermP t, Pos p = {});
TermP fill_inl(TermP t, Pos p = {});
TermP fill_inr(TermP t, Pos p = {});
TermP fill_pair(TermP t, Pos p = {});
TermP fill_bang(TermP t, Mode m, Pos p = {});
TermP fill_fun(TermP t, std::string x, Mode m, TermP body, Pos p = {});
TermP fill_comp(TermP d, TermP t, Pos p = {});
TermP fill_leaf(TermP d, TermP t, Pos p = {});
TermP val(ValueP v, Pos p = {});
TermP fix(std::string x, TypeP t, TermP body, Pos p = {});
TermP from_prime(TermP t, Pos p = {});
TermP ann(TermP t, TypeP ty, Pos p = {});
TermP open(HoleSet hs, ValueP left, TermP body);
TermP unit_s(Pos p = {});
TermP inl_s(TermP t, Pos p = {});
TermP inr_s(TermP t, Pos p = {});
TermP pair_s(TermP l, TermP r, Pos p = {});
TermP mod_s(Mode m, TermP t, Pos p = {});
TermP lam_s(std::string x, Mode m, TermP body, Pos p = {});
TermP from_prime_s(TermP t, Pos p = {});
TermP nat_s(std::uint64_t k, Pos p = {});
TermP cons_s(TermP hd, TermP tl, Pos p = {});
TermP nil_s(Pos p = {});
}  // namespace tm

// Positions are ignored.
bool term_eq(const Term &a, const Term &b);
bool value_eq(const Value &a, const Value &b);

std::set<std::string> free_vars(const TermP &t);
// Every hole or destination name, free or bound.
void hnames(const ValueP &v, std::set<HoleName> &out);
void hnames(const TermP &t, std::set<HoleName> &out);
std::size_t term_size(const TermP &t);

// Capture-avoiding substitution of a term for a variable. The replacement
// is either a value or a closed fix, so no renaming is ever needed.
TermP subst(const TermP &t, const std::string &x, const TermP &r);
TermP subst_val(const TermP &t, const std::string &x, const ValueP &v);

// Copies every term node outside values. Reduction shares untouched
// subtrees between copies, and such a node may need different types; a
// shared value stems from one substituted variable and keeps one type.
TermP unshare(const TermP &t);

// Set helpers for sorted hole-name vectors.
HoleSet hs_union(const HoleSet &a, const HoleSet &b);
HoleSet hs_minus(const HoleSet &a, const HoleSet &b);
bool hs_contains(const HoleSet &s, HoleName h);
HoleSet hs_shift(const HoleSet &s, HoleName d);
HoleSet hs_from(const std::set<HoleName> &s);

}  // namespace lambdad
