#include "lambdad/desugar.hpp"
#include "lambdad/harness.hpp"
#include "lambdad/typecheck.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <stdexcept>

// Exhaustive search over typing derivations for small terms. Types come from
// the first checker phase; the search covers the part that carries the
// difficulty: which mode each variable occurrence is used at, where unused
// names are discarded, and how contexts are split and scaled by each rule.
//
// Every rule builds its context pointwise (sums, scalings and the equal
// contexts of case branches all act name by name), so the derivable contexts
// are exactly the products of what each name can reach. For every binder the
// search therefore enumerates every mode its variable can end up with.

namespace lambdad {

namespace {

using Slot = std::optional<Mode>;  // nullopt: the name is not in the context
using Slots = std::set<Slot>;

struct Search {
  const std::map<const Term *, Mode> &node_modes;
  std::vector<Mode> universe;

  explicit Search(const std::map<const Term *, Mode> &nm, std::uint32_t ages) : node_modes(nm) {
    for (Mult p : {Mult::One, Mult::Many}) {
      for (std::uint32_t k = 0; k <= ages; ++k) universe.push_back(Mode{p, Age::fin(k)});
      universe.push_back(Mode{p, Age::infinite()});
    }
  }

  bool in_universe(Mode m) const { return std::find(universe.begin(), universe.end(), m) != universe.end(); }

  // A variable read directly.
  Slots use() const {
    Slots s;
    for (Mode m : universe)
      if (mode_leq(m1nu(), m)) s.insert(m);
    return s;
  }

  // A name the leaf does not mention: absent, or weakened away at omega.
  Slots discard() const {
    Slots s{std::nullopt};
    for (Mode m : universe) s.insert(mode_times(mwnu(), m));
    return s;
  }

  static Slots absent() { return Slots{std::nullopt}; }

  Slots plus(const Slots &a, const Slots &b) const {
    Slots r;
    for (auto &x : a)
      for (auto &y : b) {
        if (!x) r.insert(y);
        else if (!y) r.insert(x);
        else r.insert(mode_plus(*x, *y));
      }
    return r;
  }

  Slots scale(Mode f, const Slots &a) const {
    Slots r;
    for (auto &x : a) {
      if (!x) {
        r.insert(x);
        continue;
      }
      Mode y = mode_times(f, *x);
      if (in_universe(y)) r.insert(y);
    }
    return r;
  }

  Slots preimage(Mode f, const Slots &a) const {
    Slots r;
    if (a.count(std::nullopt)) r.insert(std::nullopt);
    for (Mode y : universe)
      if (a.count(mode_times(f, y))) r.insert(y);
    return r;
  }

  static Slots meet(const Slots &a, const Slots &b) {
    Slots r;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(r, r.begin()));
    return r;
  }

  // Two contexts joined without overlap.
  static Slots disjoint(const Slots &a, const Slots &b) {
    Slots r;
    for (auto &x : a)
      for (auto &y : b) {
        if (!x) r.insert(y);
        else if (!y) r.insert(x);
      }
    return r;
  }

  Mode aux(const Term *t) const {
    auto it = node_modes.find(t);
    if (it == node_modes.end()) throw std::invalid_argument("missing phase-one mode");
    return it->second;
  }

  // Reachable modes of `x` in the context of `t`, treating a rebinding of
  // `x` as hiding it.
  Slots term(const TermP &t, const std::string &x) const {
    auto under = [&](const TermP &body, std::initializer_list<std::string> bound) {
      for (auto &b : bound)
        if (b == x) return discard();
      return term(body, x);
    };
    switch (t->kind) {
      case TermKind::Var:
        return t->x1 == x ? use() : discard();
      case TermKind::App:
        return plus(term(t->a, x), scale(aux(t.get()), term(t->b, x)));
      case TermKind::Seq:
        return plus(term(t->a, x), term(t->b, x));
      case TermKind::CaseSum:
        return plus(scale(t->m, term(t->a, x)), meet(under(t->b, {t->x1}), under(t->c, {t->x2})));
      case TermKind::CasePair:
        return plus(scale(t->m, term(t->a, x)), under(t->b, {t->x1, t->x2}));
      case TermKind::CaseBang:
        return plus(scale(t->m, term(t->a, x)), under(t->b, {t->x1}));
      case TermKind::Upd:
        return plus(term(t->a, x), preimage(m1up(), under(t->b, {t->x1})));
      case TermKind::To:
      case TermKind::From:
      case TermKind::FromPrime:
      case TermKind::FillUnit:
      case TermKind::FillInl:
      case TermKind::FillInr:
      case TermKind::FillPair:
      case TermKind::FillBang:
      case TermKind::Ann:
        return term(t->a, x);
      case TermKind::New:
        return discard();
      case TermKind::FillFun:
        return plus(term(t->a, x), scale(mode_times(m1up(), aux(t.get())), under(t->b, {t->x1})));
      case TermKind::FillComp:
        return plus(term(t->a, x), scale(m1up(), term(t->b, x)));
      case TermKind::FillLeaf:
        return plus(term(t->a, x), scale(mode_times(m1up(), aux(t.get())), term(t->b, x)));
      case TermKind::Fix:
        return scale(mwinf(), under(t->a, {t->x1}));
      case TermKind::Val:
        return disjoint(value(t->v, x), discard());
      default:
        throw std::invalid_argument(std::string("oracle: unsupported ") + kind_name(t->kind));
    }
  }

  Slots value(const ValueP &v, const std::string &x) const {
    switch (v->kind) {
      case ValueKind::Unit:
        return absent();
      case ValueKind::Inl:
      case ValueKind::Inr:
        return value(v->a, x);
      case ValueKind::Mod:
        return scale(v->m, value(v->a, x));
      case ValueKind::Pair:
        return plus(value(v->a, x), value(v->b, x));
      case ValueKind::Lam:
        return v->x == x ? discard() : term(v->body, x);
      default:
        throw std::invalid_argument("oracle: values with holes or destinations are not supported");
    }
  }

  // Every binder of `t` accepts its declared mode.
  bool binders_ok(const TermP &t) const {
    if (!t) return true;
    auto bind = [&](const TermP &body, const std::string &name, Mode declared) {
      return term(body, name).count(declared) > 0;
    };
    bool ok = true;
    switch (t->kind) {
      case TermKind::CaseSum:
        ok = bind(t->b, t->x1, t->m) && bind(t->c, t->x2, t->m);
        break;
      case TermKind::CasePair:
        ok = bind(t->b, t->x1, t->m) && (t->x2 == t->x1 || bind(t->b, t->x2, t->m));
        break;
      case TermKind::CaseBang:
        ok = bind(t->b, t->x1, mode_times(t->m, t->n));
        break;
      case TermKind::Upd:
        ok = bind(t->b, t->x1, m1nu());
        break;
      case TermKind::FillFun:
        ok = bind(t->b, t->x1, t->m);
        break;
      case TermKind::Fix:
        ok = bind(t->a, t->x1, mwinf());
        break;
      case TermKind::Val:
        return value_binders_ok(t->v);
      default:
        break;
    }
    return ok && binders_ok(t->a) && binders_ok(t->b) && binders_ok(t->c);
  }

  bool value_binders_ok(const ValueP &v) const {
    if (!v) return true;
    if (v->kind == ValueKind::Lam) return term(v->body, v->x).count(v->m) > 0 && binders_ok(v->body);
    return value_binders_ok(v->a) && value_binders_ok(v->b);
  }
};

// Ages worth enumerating. Uses have age 0 or inf, and a discard older than
// every declared mode plus the number of upd sites (each one lowers an age by
// one) can never meet a binder; above that, only the finite scalings on the
// way up add age.
struct AgeBudget {
  std::uint32_t declared = 0, lowering = 0, raising = 0;

  void mode(Mode m) { declared = std::max(declared, m.age.inf ? 0u : m.age.k); }
  void raise(Mode m) { raising += m.age.inf ? 0u : m.age.k; }

  void term(const TermP &t, const std::map<const Term *, Mode> &nm) {
    if (!t) return;
    mode(t->m);
    mode(t->n);
    switch (t->kind) {
      case TermKind::App:
        raise(nm.at(t.get()));
        break;
      case TermKind::CaseSum:
      case TermKind::CasePair:
        raise(t->m);
        break;
      case TermKind::CaseBang:
        raise(t->m);
        mode(mode_times(t->m, t->n));
        break;
      case TermKind::Upd:
        ++lowering;
        break;
      case TermKind::FillFun:
      case TermKind::FillLeaf:
        raise(mode_times(m1up(), nm.at(t.get())));
        break;
      case TermKind::FillComp:
        raise(m1up());
        break;
      default:
        break;
    }
    value(t->v, nm);
    term(t->a, nm);
    term(t->b, nm);
    term(t->c, nm);
  }

  void value(const ValueP &v, const std::map<const Term *, Mode> &nm) {
    if (!v) return;
    if (v->kind == ValueKind::Mod) raise(v->m);
    if (v->kind == ValueKind::Lam) {
      mode(v->m);
      term(v->body, nm);
    }
    value(v->a, nm);
    value(v->b, nm);
  }

  std::uint32_t total() const { return declared + lowering + raising + 1; }
};

}  // namespace

bool oracle_declarative_check(const TypeDefs &defs, const TermP &t, const TypingContext &gamma,
                              std::size_t size_bound) {
  if (term_size(t) > size_bound) throw std::length_error("term exceeds the oracle size bound");
  for (auto &[name, b] : gamma)
    if (b.kind != BindingKind::Var) throw std::invalid_argument("oracle: only variable bindings are supported");

  TermP core = desugar(t);
  auto modes = infer_node_modes(defs, gamma, core);
  if (!ok(modes)) return false;
  std::map<const Term *, Mode> nm = value(modes);

  AgeBudget budget;
  budget.term(core, nm);
  for (auto &[name, b] : gamma) budget.mode(b.m);
  std::uint32_t ages = budget.total();
  Search s(nm, ages);

  for (auto &[name, b] : gamma)
    if (!s.term(core, name.var).count(b.m)) return false;
  return s.binders_ok(core);
}

}  // namespace lambdad
