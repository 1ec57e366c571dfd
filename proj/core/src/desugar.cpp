#include "lambdad/desugar.hpp"

namespace lambdad {

namespace {

std::string fresh(const std::string &base, const std::set<std::string> &avoid) {
  if (!avoid.count(base)) return base;
  for (int i = 1;; ++i) {
    std::string s = base + "_" + std::to_string(i);
    if (!avoid.count(s)) return s;
  }
}

std::set<std::string> fv_of(std::initializer_list<TermP> ts) {
  std::set<std::string> out;
  for (auto &t : ts) {
    if (!t) continue;
    auto s = free_vars(t);
    out.insert(s.begin(), s.end());
  }
  return out;
}

class Desugarer {
 public:
  explicit Desugarer(const DesugarOptions &o) : opts_(o) {}

  TermP term(const TermP &t) {
    if (!t) return t;
    const Pos p = t->pos;
    switch (t->kind) {
      case TermKind::UnitS: {
        return from_prime(tm::upd(tm::new_(ty::unit(), p), "d", tm::fill_unit(tm::var("d", p), p), p), p);
      }
      case TermKind::InlS:
      case TermKind::InrS:
      case TermKind::ModS: {
        TermP arg = term(t->a);
        std::string d = fresh("d", fv_of({arg}));
        TermP hollow = t->kind == TermKind::InlS   ? tm::fill_inl(tm::var(d, p), p)
                       : t->kind == TermKind::InrS ? tm::fill_inr(tm::var(d, p), p)
                                                   : tm::fill_bang(tm::var(d, p), t->m, p);
        return from_prime(tm::upd(tm::new_(nullptr, p), d, tm::fill_leaf(hollow, arg, p), p), p);
      }
      case TermKind::LamS: {
        TermP body = term(t->a);
        auto avoid = fv_of({body});
        avoid.insert(t->x1);
        std::string d = fresh("d", avoid);
        return from_prime(
            tm::upd(tm::new_(nullptr, p), d, tm::fill_fun(tm::var(d, p), t->x1, t->m, body, p), p), p);
      }
      case TermKind::PairS: {
        TermP l = term(t->a), r = term(t->b);
        auto avoid = fv_of({l, r});
        std::string d = fresh("d", avoid);
        std::string d1 = fresh("d1", avoid), d2 = fresh("d2", avoid);
        TermP body = tm::case_pair(
            m1nu(), tm::fill_pair(tm::var(d, p), p), d1, d2,
            tm::seq(tm::fill_leaf(tm::var(d1, p), l, p), tm::fill_leaf(tm::var(d2, p), r, p), p), p);
        return from_prime(tm::upd(tm::new_(nullptr, p), d, body, p), p);
      }
      case TermKind::ConsS: {
        TermP hd = term(t->a), tl = term(t->b);
        auto avoid = fv_of({hd, tl});
        std::string d = fresh("d", avoid);
        std::string dx = fresh("dx", avoid), dxs = fresh("dxs", avoid);
        TermP body = tm::case_pair(
            m1nu(), tm::fill_pair(tm::fill_inr(tm::var(d, p), p), p), dx, dxs,
            tm::seq(tm::fill_leaf(tm::var(dx, p), hd, p), tm::fill_leaf(tm::var(dxs, p), tl, p), p), p);
        return from_prime(tm::upd(tm::new_(nullptr, p), d, body, p), p);
      }
      case TermKind::NilS:
        return term(tm::inl_s(tm::unit_s(p), p));
      case TermKind::NatS: {
        TermP r = tm::inl_s(tm::unit_s(p), p);
        for (std::uint64_t i = 0; i < t->nat; ++i) r = tm::inr_s(r, p);
        return term(r);
      }
      case TermKind::FromPrimeS:
        return from_prime(term(t->a), p);
      case TermKind::Ann:
        // Annotations on new* are folded into the node itself.
        if (t->a->kind == TermKind::New && !t->a->ty && t->ty->kind == TypeKind::Ampar &&
            t->ty->b->kind == TypeKind::Dest && t->ty->b->m == m1nu() &&
            type_eq(*t->ty->a, *t->ty->b->a))
          return tm::new_(t->ty->a, t->a->pos);
        break;
      case TermKind::Val:
        return tm::val(value(t->v), p);
      case TermKind::Open: {
        return tm::open(t->holes, value(t->v), term(t->a));
      }
      default:
        break;
    }
    TermP a = term(t->a), b = term(t->b), c = term(t->c);
    if (a == t->a && b == t->b && c == t->c) return t;
    auto n = std::make_shared<Term>(*t);
    n->a = a;
    n->b = b;
    n->c = c;
    return n;
  }

  ValueP value(const ValueP &v) {
    if (!v) return v;
    switch (v->kind) {
      case ValueKind::Lam: {
        TermP body = term(v->body);
        if (body == v->body) return v;
        return val::lam(v->x, v->m, body);
      }
      case ValueKind::Hole:
      case ValueKind::Dest:
      case ValueKind::Unit:
        return v;
      default: {
        ValueP a = value(v->a), b = value(v->b);
        if (a == v->a && b == v->b) return v;
        auto n = std::make_shared<Value>(*v);
        n->a = a;
        n->b = b;
        return n;
      }
    }
  }

 private:
  // from'* t, either primitive or through from*:
  //   case (from* (upd t with un -> un ; Mod[1 inf] ())) of
  //     (st, ex) -> case ex of Mod[1 inf] un -> un ; st
  TermP from_prime(TermP t, Pos p) {
    if (opts_.from_prime_primitive) return tm::from_prime(std::move(t), p);
    auto avoid = fv_of({t});
    std::string un = fresh("un", avoid), st = fresh("st", avoid), ex = fresh("ex", avoid);
    TermP closed = tm::val(val::mod(m1inf(), val::unit()), p);
    TermP upd = tm::upd(std::move(t), un, tm::seq(tm::var(un, p), closed, p), p);
    TermP inner = tm::case_bang(m1nu(), tm::var(ex, p), m1inf(), un,
                                tm::seq(tm::var(un, p), tm::var(st, p), p), p);
    return tm::case_pair(m1nu(), tm::from(upd, p), st, ex, inner, p);
  }

  DesugarOptions opts_;
};

}  // namespace

TermP desugar(const TermP &t, const DesugarOptions &opts) { return Desugarer(opts).term(t); }

ValueP desugar(const ValueP &v, const DesugarOptions &opts) { return Desugarer(opts).value(v); }

}  // namespace lambdad
