#include "lambdad/ast.hpp"

#include <algorithm>
#include <functional>

namespace lambdad {

namespace ty {
namespace {
TypeP mk(TypeKind k, TypeP a = nullptr, TypeP b = nullptr, Mode m = {}) {
  auto t = std::make_shared<Type>();
  t->kind = k;
  t->a = std::move(a);
  t->b = std::move(b);
  t->m = m;
  return t;
}
}  // namespace

TypeP unit() {
  static const TypeP u = mk(TypeKind::Unit);
  return u;
}
TypeP sum(TypeP l, TypeP r) { return mk(TypeKind::Sum, std::move(l), std::move(r)); }
TypeP prod(TypeP l, TypeP r) { return mk(TypeKind::Prod, std::move(l), std::move(r)); }
TypeP bang(Mode m, TypeP t) { return mk(TypeKind::Bang, std::move(t), nullptr, m); }
TypeP arrow(TypeP dom, Mode m, TypeP cod) {
  return mk(TypeKind::Arrow, std::move(dom), std::move(cod), m);
}
TypeP dest(Mode n, TypeP t) { return mk(TypeKind::Dest, std::move(t), nullptr, n); }
TypeP ampar(TypeP l, TypeP r) { return mk(TypeKind::Ampar, std::move(l), std::move(r)); }
TypeP named(std::string name, std::vector<TypeP> args) {
  auto t = std::make_shared<Type>();
  t->kind = TypeKind::Named;
  t->name = std::move(name);
  t->args = std::move(args);
  return t;
}
}  // namespace ty

bool type_eq(const Type &a, const Type &b) {
  if (&a == &b) return true;
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case TypeKind::Unit:
      return true;
    case TypeKind::Sum:
    case TypeKind::Prod:
    case TypeKind::Ampar:
      return type_eq(*a.a, *b.a) && type_eq(*a.b, *b.b);
    case TypeKind::Bang:
    case TypeKind::Dest:
      return a.m == b.m && type_eq(*a.a, *b.a);
    case TypeKind::Arrow:
      return a.m == b.m && type_eq(*a.a, *b.a) && type_eq(*a.b, *b.b);
    case TypeKind::Named:
      if (a.name != b.name || a.args.size() != b.args.size()) return false;
      for (std::size_t i = 0; i < a.args.size(); ++i)
        if (!type_eq(*a.args[i], *b.args[i])) return false;
      return true;
  }
  return false;
}

TypeP subst_type_params(const TypeP &t, const std::map<std::string, TypeP> &sub) {
  if (!t || sub.empty()) return t;
  switch (t->kind) {
    case TypeKind::Unit:
      return t;
    case TypeKind::Named: {
      if (t->args.empty()) {
        auto it = sub.find(t->name);
        if (it != sub.end()) return it->second;
        return t;
      }
      std::vector<TypeP> args;
      for (auto &x : t->args) args.push_back(subst_type_params(x, sub));
      return ty::named(t->name, std::move(args));
    }
    default: {
      auto c = std::make_shared<Type>(*t);
      c->a = subst_type_params(t->a, sub);
      c->b = subst_type_params(t->b, sub);
      return c;
    }
  }
}

TypeP unfold_named(const TypeDefs &defs, const Type &t) {
  auto it = defs.find(t.name);
  if (it == defs.end() || it->second.params.size() != t.args.size()) return nullptr;
  std::map<std::string, TypeP> sub;
  for (std::size_t i = 0; i < t.args.size(); ++i) sub[it->second.params[i]] = t.args[i];
  return subst_type_params(it->second.body, sub);
}

namespace {

std::string type_key(const Type &t) {
  switch (t.kind) {
    case TypeKind::Unit:
      return "1";
    case TypeKind::Sum:
      return "(" + type_key(*t.a) + "+" + type_key(*t.b) + ")";
    case TypeKind::Prod:
      return "(" + type_key(*t.a) + "*" + type_key(*t.b) + ")";
    case TypeKind::Ampar:
      return "(" + type_key(*t.a) + "><" + type_key(*t.b) + ")";
    case TypeKind::Bang:
      return "!" + to_string(t.m) + type_key(*t.a);
    case TypeKind::Dest:
      return "D" + to_string(t.m) + type_key(*t.a);
    case TypeKind::Arrow:
      return "(" + type_key(*t.a) + "-o" + to_string(t.m) + type_key(*t.b) + ")";
    case TypeKind::Named: {
      std::string s = t.name;
      for (auto &a : t.args) s += " " + type_key(*a);
      return "(" + s + ")";
    }
  }
  return "?";
}

bool equiv(const TypeDefs &defs, const TypeP &a, const TypeP &b,
           std::set<std::pair<std::string, std::string>> &assumed) {
  if (a == b) return true;
  if (a->kind == TypeKind::Named || b->kind == TypeKind::Named) {
    if (type_eq(*a, *b)) return true;
    auto key = std::make_pair(type_key(*a), type_key(*b));
    if (assumed.count(key)) return true;
    assumed.insert(key);
    TypeP ua = a, ub = b;
    if (a->kind == TypeKind::Named) {
      ua = unfold_named(defs, *a);
      if (!ua) return false;
    }
    if (b->kind == TypeKind::Named) {
      ub = unfold_named(defs, *b);
      if (!ub) return false;
    }
    return equiv(defs, ua, ub, assumed);
  }
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case TypeKind::Unit:
      return true;
    case TypeKind::Sum:
    case TypeKind::Prod:
    case TypeKind::Ampar:
      return equiv(defs, a->a, b->a, assumed) && equiv(defs, a->b, b->b, assumed);
    case TypeKind::Bang:
    case TypeKind::Dest:
      return a->m == b->m && equiv(defs, a->a, b->a, assumed);
    case TypeKind::Arrow:
      return a->m == b->m && equiv(defs, a->a, b->a, assumed) &&
             equiv(defs, a->b, b->b, assumed);
    case TypeKind::Named:
      break;
  }
  return false;
}

}  // namespace

bool type_equiv(const TypeDefs &defs, const TypeP &a, const TypeP &b) {
  std::set<std::pair<std::string, std::string>> assumed;
  return equiv(defs, a, b, assumed);
}

bool is_sugar(TermKind k) { return k >= TermKind::UnitS; }

const char *kind_name(TermKind k) {
  switch (k) {
    case TermKind::Var: return "Var";
    case TermKind::App: return "App";
    case TermKind::Seq: return "Seq";
    case TermKind::CaseSum: return "CaseSum";
    case TermKind::CasePair: return "CasePair";
    case TermKind::CaseBang: return "CaseBang";
    case TermKind::Upd: return "Upd";
    case TermKind::To: return "To";
    case TermKind::From: return "From";
    case TermKind::New: return "New";
    case TermKind::FillUnit: return "FillUnit";
    case TermKind::FillInl: return "FillInl";
    case TermKind::FillInr: return "FillInr";
    case TermKind::FillPair: return "FillPair";
    case TermKind::FillBang: return "FillBang";
    case TermKind::FillFun: return "FillFun";
    case TermKind::FillComp: return "FillComp";
    case TermKind::FillLeaf: return "FillLeaf";
    case TermKind::Val: return "Val";
    case TermKind::Fix: return "Fix";
    case TermKind::FromPrime: return "FromPrime";
    case TermKind::Ann: return "Ann";
    case TermKind::Open: return "Open";
    case TermKind::UnitS: return "UnitS";
    case TermKind::InlS: return "InlS";
    case TermKind::InrS: return "InrS";
    case TermKind::PairS: return "PairS";
    case TermKind::ModS: return "ModS";
    case TermKind::LamS: return "LamS";
    case TermKind::FromPrimeS: return "FromPrimeS";
    case TermKind::NatS: return "NatS";
    case TermKind::ConsS: return "ConsS";
    case TermKind::NilS: return "NilS";
  }
  return "?";
}

// ---------------------------------------------------------------- builders

namespace val {
namespace {
std::shared_ptr<Value> mk(ValueKind k) {
  auto v = std::make_shared<Value>();
  v->kind = k;
  return v;
}
}  // namespace

ValueP hole(HoleName h) {
  auto v = mk(ValueKind::Hole);
  v->h = h;
  return v;
}
ValueP dest(HoleName h) {
  auto v = mk(ValueKind::Dest);
  v->h = h;
  return v;
}
ValueP ampar(HoleSet hs, ValueP left, ValueP right) {
  auto v = mk(ValueKind::Ampar);
  v->holes = std::move(hs);
  v->a = std::move(left);
  v->b = std::move(right);
  return v;
}
ValueP unit() {
  static const ValueP u = mk(ValueKind::Unit);
  return u;
}
ValueP inl(ValueP x) {
  auto v = mk(ValueKind::Inl);
  v->a = std::move(x);
  return v;
}
ValueP inr(ValueP x) {
  auto v = mk(ValueKind::Inr);
  v->a = std::move(x);
  return v;
}
ValueP mod(Mode m, ValueP x) {
  auto v = mk(ValueKind::Mod);
  v->m = m;
  v->a = std::move(x);
  return v;
}
ValueP pair(ValueP l, ValueP r) {
  auto v = mk(ValueKind::Pair);
  v->a = std::move(l);
  v->b = std::move(r);
  return v;
}
ValueP lam(std::string x, Mode m, TermP body) {
  auto v = mk(ValueKind::Lam);
  v->x = std::move(x);
  v->m = m;
  v->body = std::move(body);
  return v;
}
}  // namespace val

namespace tm {
namespace {
std::shared_ptr<Term> mk(TermKind k, Pos p) {
  auto t = std::make_shared<Term>();
  t->kind = k;
  t->pos = p;
  return t;
}
std::shared_ptr<Term> un(TermKind k, TermP a, Pos p) {
  auto t = mk(k, p);
  t->a = std::move(a);
  return t;
}
std::shared_ptr<Term> bin(TermKind k, TermP a, TermP b, Pos p) {
  auto t = mk(k, p);
  t->a = std::move(a);
  t->b = std::move(b);
  return t;
}
}  // namespace

TermP var(std::string x, Pos p) {
  auto t = mk(TermKind::Var, p);
  t->x1 = std::move(x);
  return t;
}
TermP app(TermP f, TermP arg, Pos p) { return bin(TermKind::App, std::move(f), std::move(arg), p); }
TermP seq(TermP l, TermP r, Pos p) { return bin(TermKind::Seq, std::move(l), std::move(r), p); }
TermP case_sum(Mode m, TermP s, std::string x1, TermP b1, std::string x2, TermP b2, Pos p) {
  auto t = bin(TermKind::CaseSum, std::move(s), std::move(b1), p);
  t->m = m;
  t->x1 = std::move(x1);
  t->x2 = std::move(x2);
  t->c = std::move(b2);
  return t;
}
TermP case_pair(Mode m, TermP s, std::string x1, std::string x2, TermP body, Pos p) {
  auto t = bin(TermKind::CasePair, std::move(s), std::move(body), p);
  t->m = m;
  t->x1 = std::move(x1);
  t->x2 = std::move(x2);
  return t;
}
TermP case_bang(Mode m, TermP s, Mode n, std::string x, TermP body, Pos p) {
  auto t = bin(TermKind::CaseBang, std::move(s), std::move(body), p);
  t->m = m;
  t->n = n;
  t->x1 = std::move(x);
  return t;
}
TermP upd(TermP s, std::string x, TermP body, Pos p) {
  auto t = bin(TermKind::Upd, std::move(s), std::move(body), p);
  t->x1 = std::move(x);
  return t;
}
TermP to(TermP a, Pos p) { return un(TermKind::To, std::move(a), p); }
TermP from(TermP a, Pos p) { return un(TermKind::From, std::move(a), p); }
TermP new_(TypeP ty, Pos p) {
  auto t = mk(TermKind::New, p);
  t->ty = std::move(ty);
  return t;
}
TermP fill_unit(TermP a, Pos p) { return un(TermKind::FillUnit, std::move(a), p); }
TermP fill_inl(TermP a, Pos p) { return un(TermKind::FillInl, std::move(a), p); }
TermP fill_inr(TermP a, Pos p) { return un(TermKind::FillInr, std::move(a), p); }
TermP fill_pair(TermP a, Pos p) { return un(TermKind::FillPair, std::move(a), p); }
TermP fill_bang(TermP a, Mode m, Pos p) {
  auto t = un(TermKind::FillBang, std::move(a), p);
  t->m = m;
  return t;
}
TermP fill_fun(TermP a, std::string x, Mode m, TermP body, Pos p) {
  auto t = bin(TermKind::FillFun, std::move(a), std::move(body), p);
  t->x1 = std::move(x);
  t->m = m;
  return t;
}
TermP fill_comp(TermP d, TermP a, Pos p) { return bin(TermKind::FillComp, std::move(d), std::move(a), p); }
TermP fill_leaf(TermP d, TermP a, Pos p) { return bin(TermKind::FillLeaf, std::move(d), std::move(a), p); }
TermP val(ValueP v, Pos p) {
  auto t = mk(TermKind::Val, p);
  t->v = std::move(v);
  return t;
}
TermP fix(std::string x, TypeP ty, TermP body, Pos p) {
  auto t = un(TermKind::Fix, std::move(body), p);
  t->x1 = std::move(x);
  t->ty = std::move(ty);
  return t;
}
TermP from_prime(TermP a, Pos p) { return un(TermKind::FromPrime, std::move(a), p); }
TermP ann(TermP a, TypeP ty, Pos p) {
  auto t = un(TermKind::Ann, std::move(a), p);
  t->ty = std::move(ty);
  return t;
}
TermP open(HoleSet hs, ValueP left, TermP body) {
  auto t = un(TermKind::Open, std::move(body), {});
  t->holes = std::move(hs);
  t->v = std::move(left);
  return t;
}
TermP unit_s(Pos p) { return mk(TermKind::UnitS, p); }
TermP inl_s(TermP a, Pos p) { return un(TermKind::InlS, std::move(a), p); }
TermP inr_s(TermP a, Pos p) { return un(TermKind::InrS, std::move(a), p); }
TermP pair_s(TermP l, TermP r, Pos p) { return bin(TermKind::PairS, std::move(l), std::move(r), p); }
TermP mod_s(Mode m, TermP a, Pos p) {
  auto t = un(TermKind::ModS, std::move(a), p);
  t->m = m;
  return t;
}
TermP lam_s(std::string x, Mode m, TermP body, Pos p) {
  auto t = un(TermKind::LamS, std::move(body), p);
  t->x1 = std::move(x);
  t->m = m;
  return t;
}
TermP from_prime_s(TermP a, Pos p) { return un(TermKind::FromPrimeS, std::move(a), p); }
TermP nat_s(std::uint64_t k, Pos p) {
  auto t = mk(TermKind::NatS, p);
  t->nat = k;
  return t;
}
TermP cons_s(TermP hd, TermP tl, Pos p) { return bin(TermKind::ConsS, std::move(hd), std::move(tl), p); }
TermP nil_s(Pos p) { return mk(TermKind::NilS, p); }
}  // namespace tm

// ---------------------------------------------------------------- equality

namespace {
bool opt_term_eq(const TermP &a, const TermP &b) {
  if (!a || !b) return !a && !b;
  return term_eq(*a, *b);
}
bool opt_value_eq(const ValueP &a, const ValueP &b) {
  if (!a || !b) return !a && !b;
  return value_eq(*a, *b);
}
bool opt_type_eq(const TypeP &a, const TypeP &b) {
  if (!a || !b) return !a && !b;
  return type_eq(*a, *b);
}
}  // namespace

bool term_eq(const Term &a, const Term &b) {
  if (&a == &b) return true;
  return a.kind == b.kind && a.x1 == b.x1 && a.x2 == b.x2 && a.m == b.m && a.n == b.n &&
         a.nat == b.nat && a.holes == b.holes && opt_term_eq(a.a, b.a) &&
         opt_term_eq(a.b, b.b) && opt_term_eq(a.c, b.c) && opt_value_eq(a.v, b.v) &&
         opt_type_eq(a.ty, b.ty);
}

bool value_eq(const Value &a, const Value &b) {
  if (&a == &b) return true;
  return a.kind == b.kind && a.h == b.h && a.holes == b.holes && a.m == b.m && a.x == b.x &&
         opt_value_eq(a.a, b.a) && opt_value_eq(a.b, b.b) && opt_term_eq(a.body, b.body);
}

// ---------------------------------------------------------------- traversals

namespace {

void fv(const TermP &t, std::set<std::string> &bound, std::set<std::string> &out) {
  if (!t) return;
  auto under = [&](const std::vector<std::string> &xs, const TermP &body) {
    std::vector<std::string> added;
    for (auto &x : xs)
      if (bound.insert(x).second) added.push_back(x);
    fv(body, bound, out);
    for (auto &x : added) bound.erase(x);
  };
  switch (t->kind) {
    case TermKind::Var:
      if (!bound.count(t->x1)) out.insert(t->x1);
      return;
    case TermKind::CaseSum:
      fv(t->a, bound, out);
      under({t->x1}, t->b);
      under({t->x2}, t->c);
      return;
    case TermKind::CasePair:
      fv(t->a, bound, out);
      under({t->x1, t->x2}, t->b);
      return;
    case TermKind::CaseBang:
    case TermKind::Upd:
    case TermKind::FillFun:
      fv(t->a, bound, out);
      under({t->x1}, t->b);
      return;
    case TermKind::Fix:
    case TermKind::LamS:
      under({t->x1}, t->a);
      return;
    case TermKind::Val:
      return;
    default:
      fv(t->a, bound, out);
      fv(t->b, bound, out);
      fv(t->c, bound, out);
  }
}

}  // namespace

TermP unshare(const TermP &t) {
  if (!t) return t;
  auto n = std::make_shared<Term>(*t);
  n->a = unshare(t->a);
  n->b = unshare(t->b);
  n->c = unshare(t->c);
  return n;
}

std::set<std::string> free_vars(const TermP &t) {
  std::set<std::string> bound, out;
  fv(t, bound, out);
  return out;
}

void hnames(const ValueP &v, std::set<HoleName> &out) {
  if (!v) return;
  switch (v->kind) {
    case ValueKind::Hole:
    case ValueKind::Dest:
      out.insert(v->h);
      return;
    case ValueKind::Ampar:
      out.insert(v->holes.begin(), v->holes.end());
      break;
    case ValueKind::Lam:
      hnames(v->body, out);
      return;
    default:
      break;
  }
  hnames(v->a, out);
  hnames(v->b, out);
}

void hnames(const TermP &t, std::set<HoleName> &out) {
  if (!t) return;
  if (t->v) hnames(t->v, out);
  out.insert(t->holes.begin(), t->holes.end());
  hnames(t->a, out);
  hnames(t->b, out);
  hnames(t->c, out);
}

std::size_t term_size(const TermP &t) {
  if (!t) return 0;
  return 1 + term_size(t->a) + term_size(t->b) + term_size(t->c);
}

TermP subst(const TermP &t, const std::string &x, const TermP &r) {
  if (!t) return t;
  auto rec = [&](const TermP &s) { return subst(s, x, r); };
  switch (t->kind) {
    case TermKind::Var:
      return t->x1 == x ? r : t;
    case TermKind::Val:
    case TermKind::New:
    case TermKind::UnitS:
    case TermKind::NatS:
    case TermKind::NilS:
      return t;
    default:
      break;
  }
  auto c = std::make_shared<Term>(*t);
  c->a = rec(t->a);
  switch (t->kind) {
    case TermKind::CaseSum:
      if (t->x1 != x) c->b = rec(t->b);
      if (t->x2 != x) c->c = rec(t->c);
      break;
    case TermKind::CasePair:
      if (t->x1 != x && t->x2 != x) c->b = rec(t->b);
      break;
    case TermKind::CaseBang:
    case TermKind::Upd:
    case TermKind::FillFun:
      if (t->x1 != x) c->b = rec(t->b);
      break;
    case TermKind::Fix:
    case TermKind::LamS:
      if (t->x1 == x) return t;
      break;
    default:
      c->b = rec(t->b);
      c->c = rec(t->c);
  }
  if (c->a == t->a && c->b == t->b && c->c == t->c) return t;
  return c;
}

TermP subst_val(const TermP &t, const std::string &x, const ValueP &v) {
  return subst(t, x, tm::val(v));
}

// ---------------------------------------------------------------- hole sets

HoleSet hs_union(const HoleSet &a, const HoleSet &b) {
  HoleSet r;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
  return r;
}

HoleSet hs_minus(const HoleSet &a, const HoleSet &b) {
  HoleSet r;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
  return r;
}

bool hs_contains(const HoleSet &s, HoleName h) {
  return std::binary_search(s.begin(), s.end(), h);
}

HoleSet hs_shift(const HoleSet &s, HoleName d) {
  HoleSet r = s;
  for (auto &h : r) h += d;
  return r;
}

HoleSet hs_from(const std::set<HoleName> &s) { return HoleSet(s.begin(), s.end()); }

}  // namespace lambdad
