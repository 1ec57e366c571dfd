#include "lambdad/typecheck.hpp"

#include "lambdad/desugar.hpp"
#include "lambdad/printer.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <unordered_map>

namespace lambdad {

namespace {

// Stands for the term under focus when an evaluation context is checked alone.
const char *const kFocusVar = "%focus";

// ------------------------------------------------------------ type graph

enum class TK : std::uint8_t { Meta, Unit, Sum, Prod, Bang, Arrow, Dest, Ampar, Named };

struct TNode {
  TK k = TK::Meta;
  int a = -1, b = -1;
  int m = -1;  // mode node: Bang, Arrow, Dest
  std::string name;
  std::vector<int> args;
  int link = -1;       // bound meta
  std::string origin;  // name a meta defaults to
};

enum class MK : std::uint8_t { Const, Meta, Times };

// Times: a * c
struct MNode {
  MK k = MK::Meta;
  Mode c;
  int a = -1;
  int link = -1;
};

struct Fail {
  TypeError e;
};

// ------------------------------------------------------------ usage maps

struct Key {
  std::uint8_t kind;  // 0 var, 1 destination, 2 hole
  std::string var;
  HoleName h;
  bool operator<(const Key &o) const {
    if (kind != o.kind) return kind < o.kind;
    return kind == 0 ? var < o.var : h < o.h;
  }
};

Key kvar(const std::string &x) { return Key{0, x, 0}; }
Key kdest(HoleName h) { return Key{1, {}, h}; }
Key khole(HoleName h) { return Key{2, {}, h}; }

std::string key_str(const Key &k) {
  if (k.kind == 0) return k.var;
  return (k.kind == 1 ? "->" : "[]") + std::to_string(k.h);
}

// Achievable modes per name. `def` covers variables and destinations that are
// not listed, `hdef` covers holes.
struct Usage {
  std::map<Key, ModeSet> m;
  ModeSet def, hdef;

  const ModeSet &get(const Key &k) const {
    auto it = m.find(k);
    if (it != m.end()) return it->second;
    return k.kind == 2 ? hdef : def;
  }
};

template <class F>
Usage zip(const Usage &x, const Usage &y, F f) {
  Usage r;
  r.def = f(x.def, y.def);
  r.hdef = f(x.hdef, y.hdef);
  for (auto &[k, s] : x.m) r.m.emplace(k, f(s, y.get(k)));
  for (auto &[k, s] : y.m)
    if (!x.m.count(k)) r.m.emplace(k, f(x.get(k), s));
  return r;
}

template <class F>
Usage map_usage(const Usage &x, F f) {
  Usage r;
  r.def = f(x.def);
  r.hdef = f(x.hdef);
  for (auto &[k, s] : x.m) r.m.emplace(k, f(s));
  return r;
}

Usage u_plus(const Usage &x, const Usage &y) {
  return zip(x, y, [](const ModeSet &a, const ModeSet &b) { return a.plus(b); });
}
Usage u_meet(const Usage &x, const Usage &y) {
  return zip(x, y, [](const ModeSet &a, const ModeSet &b) { return a.meet(b); });
}
Usage u_disjoint(const Usage &x, const Usage &y) {
  return zip(x, y, [](const ModeSet &a, const ModeSet &b) { return a.disjoint(b); });
}
Usage u_scale(const Usage &x, Mode f) {
  if (f == m1nu()) return x;
  return map_usage(x, [&](const ModeSet &a) { return a.scale(f); });
}
Usage u_preimage(const Usage &x, Mode f) {
  return map_usage(x, [&](const ModeSet &a) { return a.preimage(f); });
}

// ------------------------------------------------------------ checker

struct ScopeEntry {
  HoleName h;
  int ty;  // hole type T
  int n;   // hole mode; the destination has type Dest n T
};

class Checker {
 public:
  Checker(const TypeDefs &defs, const CheckOptions &opts) : defs_(defs), opts_(opts) {}

  // When set, the variable kFocusVar has usage exactly `delta` and a fresh type.
  std::optional<std::map<HoleName, Mode>> focus_delta;
  int focus_ty = -1;

  TypeP run_term(const TypingContext &gamma, const TermP &t) {
    int ty = phase1(gamma, t);
    phase2(gamma, t);
    return to_type(ty);
  }

  int phase1(const TypingContext &gamma, const TermP &t) {
    setup_gamma(gamma);
    if (focus_delta) focus_ty = meta("");
    int ty = infer(t);
    if (opts_.expected) {
      // report the annotation's spelling rather than its unfolding
      int e = import(opts_.expected);
      unify_or_fail(e, ty, t->pos, "result");
      ty = e;
    }
    finish_phase1();
    return ty;
  }

  void phase2(const TypingContext &gamma, const TermP &t) {
    bound_ = compute_bound(gamma, t, nullptr);
    Usage u = usage(t);
    check_context(gamma, u);
  }

  std::map<const Term *, Mode> node_modes() {
    std::map<const Term *, Mode> out;
    for (auto &[t, m] : aux_mode_) out.emplace(t, mode_of(m));
    return out;
  }

  // Mode recorded for an application (arrow mode) or a fill (inner mode).
  Mode node_mode(const Term *t) {
    auto it = aux_mode_.find(t);
    return it == aux_mode_.end() ? m1nu() : mode_of(it->second);
  }

  TypeP run_value(const TypingContext &theta, const ValueP &v) {
    setup_gamma(theta);
    int ty = value_ty(v);
    if (opts_.expected) {
      int e = import(opts_.expected);
      unify_or_fail(e, ty, {}, "result");
      ty = e;
    }
    finish_phase1();
    bound_ = compute_bound(theta, nullptr, v);
    Usage u = value_usage(v);
    check_context(theta, u);
    return to_type(ty);
  }

  TypeP type_of_node(int i) { return to_type(i); }

  std::map<HoleName, std::pair<int, int>> open_scopes;

  Mode mode_of(int i) { return mval(i).value_or(m1nu()); }

 private:
  const TypeDefs &defs_;
  CheckOptions opts_;
  std::uint32_t bound_ = 1;

  std::vector<TNode> tn_;
  std::vector<MNode> mn_;
  std::map<std::string, int> flex_;
  std::vector<std::pair<int, int>> deferred_;
  std::set<std::pair<std::string, std::string>> assumed_;
  std::unordered_map<int, int> unfold_cache_;

  // environments
  std::vector<std::pair<std::string, int>> vars_;
  std::size_t barrier_ = 0;
  std::vector<ScopeEntry> scopes_;
  std::map<HoleName, ScopeEntry> gamma_dests_;
  std::map<HoleName, ScopeEntry> gamma_holes_;

  // per-node records
  std::unordered_map<const Term *, int> term_ty_;
  // A value reached twice was copied by a substitution and has one type.
  std::unordered_map<const Value *, int> val_ty_;
  std::unordered_map<const Value *, int> value_ty_;
  std::unordered_map<const Term *, int> aux_mode_;
  std::unordered_map<const void *, std::vector<ScopeEntry>> scope_of_;

  // -------------------------------------------------------- nodes

  int push_t(TNode n) {
    tn_.push_back(std::move(n));
    return static_cast<int>(tn_.size()) - 1;
  }
  int meta(std::string origin) {
    TNode n;
    n.k = TK::Meta;
    n.origin = std::move(origin);
    return push_t(std::move(n));
  }
  int tnode(TK k, int a = -1, int b = -1, int m = -1) {
    TNode n;
    n.k = k;
    n.a = a;
    n.b = b;
    n.m = m;
    return push_t(std::move(n));
  }
  int t_unit() { return tnode(TK::Unit); }
  int t_sum(int a, int b) { return tnode(TK::Sum, a, b); }
  int t_prod(int a, int b) { return tnode(TK::Prod, a, b); }
  int t_bang(int m, int a) { return tnode(TK::Bang, a, -1, m); }
  int t_arrow(int a, int m, int b) { return tnode(TK::Arrow, a, b, m); }
  int t_dest(int n, int a) { return tnode(TK::Dest, a, -1, n); }
  int t_ampar(int a, int b) { return tnode(TK::Ampar, a, b); }

  int push_m(MNode n) {
    mn_.push_back(n);
    return static_cast<int>(mn_.size()) - 1;
  }
  int mconst(Mode c) {
    MNode n;
    n.k = MK::Const;
    n.c = c;
    return push_m(n);
  }
  int mmeta() { return push_m(MNode{}); }
  int mtimes(int a, Mode c) {
    MNode n;
    n.k = MK::Times;
    n.a = a;
    n.c = c;
    return push_m(n);
  }

  int find(int i) {
    while (tn_[i].k == TK::Meta && tn_[i].link >= 0) i = tn_[i].link;
    return i;
  }
  int mfind(int i) {
    while (mn_[i].k == MK::Meta && mn_[i].link >= 0) i = mn_[i].link;
    return i;
  }
  std::optional<Mode> mval(int i) {
    i = mfind(i);
    const MNode &n = mn_[i];
    if (n.k == MK::Const) return n.c;
    if (n.k == MK::Times) {
      auto r = mval(n.a);
      if (r) return mode_times(*r, n.c);
    }
    return std::nullopt;
  }

  static bool is_type_var(const std::string &name) { return name.find('#') != std::string::npos; }

  int import(const TypeP &t, const std::map<std::string, int> *params = nullptr) {
    switch (t->kind) {
      case TypeKind::Unit:
        return t_unit();
      case TypeKind::Sum:
        return t_sum(import(t->a, params), import(t->b, params));
      case TypeKind::Prod:
        return t_prod(import(t->a, params), import(t->b, params));
      case TypeKind::Ampar:
        return t_ampar(import(t->a, params), import(t->b, params));
      case TypeKind::Bang:
        return t_bang(mconst(t->m), import(t->a, params));
      case TypeKind::Dest:
        return t_dest(mconst(t->m), import(t->a, params));
      case TypeKind::Arrow:
        return t_arrow(import(t->a, params), mconst(t->m), import(t->b, params));
      case TypeKind::Named: {
        if (t->args.empty()) {
          if (params) {
            auto it = params->find(t->name);
            if (it != params->end()) return it->second;
          }
          if (is_type_var(t->name)) {
            auto it = flex_.find(t->name);
            if (it != flex_.end()) return it->second;
            int mt = meta(t->name);
            flex_[t->name] = mt;
            return mt;
          }
        }
        TNode n;
        n.k = TK::Named;
        n.name = t->name;
        for (auto &a : t->args) n.args.push_back(import(a, params));
        return push_t(std::move(n));
      }
    }
    return t_unit();
  }

  // -1 when the name has no definition
  int unfold(int i) {
    auto c = unfold_cache_.find(i);
    if (c != unfold_cache_.end()) return c->second;
    const TNode n = tn_[i];
    auto it = defs_.find(n.name);
    int r = -1;
    if (it != defs_.end() && it->second.params.size() == n.args.size()) {
      std::map<std::string, int> params;
      for (std::size_t k = 0; k < n.args.size(); ++k) params[it->second.params[k]] = n.args[k];
      r = import(it->second.body, &params);
    }
    unfold_cache_[i] = r;
    return r;
  }

  std::string key_of(int i) {
    i = find(i);
    const TNode n = tn_[i];
    auto mk = [&](int m) {
      auto v = mval(m);
      return v ? to_string(*v) : "?m" + std::to_string(mfind(m));
    };
    switch (n.k) {
      case TK::Meta: return "?" + std::to_string(i);
      case TK::Unit: return "1";
      case TK::Sum: return "(" + key_of(n.a) + "+" + key_of(n.b) + ")";
      case TK::Prod: return "(" + key_of(n.a) + "*" + key_of(n.b) + ")";
      case TK::Ampar: return "(" + key_of(n.a) + "><" + key_of(n.b) + ")";
      case TK::Bang: return "!" + mk(n.m) + key_of(n.a);
      case TK::Dest: return "D" + mk(n.m) + key_of(n.a);
      case TK::Arrow: return "(" + key_of(n.a) + "-o" + mk(n.m) + key_of(n.b) + ")";
      case TK::Named: {
        std::string s = "(" + n.name;
        for (int a : n.args) s += " " + key_of(a);
        return s + ")";
      }
    }
    return "?";
  }

  bool occurs(int meta_id, int j) {
    j = find(j);
    if (j == meta_id) return true;
    const TNode &n = tn_[j];
    if (n.a >= 0 && occurs(meta_id, n.a)) return true;
    if (n.b >= 0 && occurs(meta_id, n.b)) return true;
    for (int a : tn_[j].args)
      if (occurs(meta_id, a)) return true;
    return false;
  }

  bool unify_mode(int i, int j) {
    i = mfind(i);
    j = mfind(j);
    if (i == j) return true;
    auto vi = mval(i), vj = mval(j);
    if (vi && vj) return *vi == *vj;
    if (mn_[i].k == MK::Meta) {
      mn_[i].link = j;
      return true;
    }
    if (mn_[j].k == MK::Meta) {
      mn_[j].link = i;
      return true;
    }
    deferred_.emplace_back(i, j);
    return true;
  }

  bool unify(int i, int j) {
    i = find(i);
    j = find(j);
    if (i == j) return true;
    const TNode a = tn_[i], b = tn_[j];
    if (a.k == TK::Meta && b.k == TK::Meta) {
      // keep a named one as representative, else the later one (annotations
      // are imported after the term they annotate)
      bool i_to_j = a.origin.empty() != b.origin.empty() ? a.origin.empty() : i < j;
      if (i_to_j)
        tn_[i].link = j;
      else
        tn_[j].link = i;
      return true;
    }
    if (a.k == TK::Meta) {
      if (occurs(i, j)) return false;
      tn_[i].link = j;
      return true;
    }
    if (b.k == TK::Meta) {
      if (occurs(j, i)) return false;
      tn_[j].link = i;
      return true;
    }
    if (a.k == TK::Named || b.k == TK::Named) {
      if (a.k == TK::Named && b.k == TK::Named && a.name == b.name && a.args.size() == b.args.size()) {
        bool ok = true;
        for (std::size_t k = 0; k < a.args.size() && ok; ++k) ok = unify(a.args[k], b.args[k]);
        if (ok) return true;
      }
      auto key = std::make_pair(key_of(i), key_of(j));
      if (assumed_.count(key)) return true;
      assumed_.insert(key);
      int ui = i, uj = j;
      if (a.k == TK::Named && (ui = unfold(i)) < 0) return false;
      if (b.k == TK::Named && (uj = unfold(j)) < 0) return false;
      return unify(ui, uj);
    }
    if (a.k != b.k) return false;
    switch (a.k) {
      case TK::Unit:
        return true;
      case TK::Sum:
      case TK::Prod:
      case TK::Ampar:
        return unify(a.a, b.a) && unify(a.b, b.b);
      case TK::Bang:
      case TK::Dest:
        return unify_mode(a.m, b.m) && unify(a.a, b.a);
      case TK::Arrow:
        return unify_mode(a.m, b.m) && unify(a.a, b.a) && unify(a.b, b.b);
      default:
        return false;
    }
  }

  [[noreturn]] void fail(ErrorKind k, std::string msg, Pos pos, std::string name = {}) {
    throw Fail{TypeError{k, std::move(msg), pos, std::move(name), k == ErrorKind::AgeEscape}};
  }

  void unify_or_fail(int expected, int got, Pos pos, const std::string &what,
                     ErrorKind kind = ErrorKind::TypeMismatch) {
    if (unify(expected, got)) return;
    fail(kind, what + ": expected " + print(to_type(expected)) + ", got " + print(to_type(got)), pos);
  }

  // -------------------------------------------------------- phase 1

  void setup_gamma(const TypingContext &gamma) {
    for (auto &[name, b] : gamma) {
      switch (b.kind) {
        case BindingKind::Var:
          vars_.emplace_back(name.var, import(b.ty));
          break;
        case BindingKind::Dest:
          gamma_dests_[name.h] = ScopeEntry{name.h, import(b.ty), mconst(b.n)};
          break;
        case BindingKind::Hole:
          gamma_holes_[name.h] = ScopeEntry{name.h, import(b.ty), mconst(b.n)};
          break;
      }
    }
  }

  int lookup_var(const std::string &x, Pos pos) {
    for (std::size_t i = vars_.size(); i > barrier_; --i)
      if (vars_[i - 1].first == x) return vars_[i - 1].second;
    fail(ErrorKind::UnknownVar, "unknown variable " + x, pos, x);
  }

  const ScopeEntry *lookup_hname(HoleName h, bool hole) {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it)
      if (it->h == h) return &*it;
    auto &g = hole ? gamma_holes_ : gamma_dests_;
    auto it = g.find(h);
    return it == g.end() ? nullptr : &it->second;
  }

  // Mode of each hole on the left of an ampar: the product of the Mod
  // wrappers above it.
  static void hole_modes(const ValueP &v, Mode acc, std::map<HoleName, Mode> &out) {
    switch (v->kind) {
      case ValueKind::Hole:
        out.emplace(v->h, acc);
        break;
      case ValueKind::Inl:
      case ValueKind::Inr:
        hole_modes(v->a, acc, out);
        break;
      case ValueKind::Mod:
        hole_modes(v->a, mode_times(acc, v->m), out);
        break;
      case ValueKind::Pair:
        hole_modes(v->a, acc, out);
        hole_modes(v->b, acc, out);
        break;
      case ValueKind::Ampar:
        hole_modes(v->a, acc, out);
        break;
      default:
        break;
    }
  }

  std::vector<ScopeEntry> push_scope(const HoleSet &hs, const ValueP &left) {
    std::map<HoleName, Mode> at;
    hole_modes(left, m1nu(), at);
    std::vector<ScopeEntry> out;
    for (HoleName h : hs) {
      auto it = at.find(h);
      ScopeEntry e{h, meta(""), it == at.end() ? mmeta() : mconst(it->second)};
      scopes_.push_back(e);
      out.push_back(e);
    }
    return out;
  }
  void pop_scope(std::size_t k) { scopes_.resize(scopes_.size() - k); }

  int value_ty(const ValueP &v) {
    int r = value_ty_impl(v);
    auto [it, fresh] = value_ty_.emplace(v.get(), r);
    if (!fresh && !unify(it->second, r)) fail(ErrorKind::TypeMismatch, "shared value used at two types", {});
    return r;
  }

  int value_ty_impl(const ValueP &v) {
    switch (v->kind) {
      case ValueKind::Unit:
        return t_unit();
      case ValueKind::Hole: {
        auto *e = lookup_hname(v->h, true);
        if (!e) fail(ErrorKind::UnknownVar, "unbound hole " + std::to_string(v->h), {}, "[]" + std::to_string(v->h));
        return e->ty;
      }
      case ValueKind::Dest: {
        auto *e = lookup_hname(v->h, false);
        if (!e)
          fail(ErrorKind::UnknownVar, "unbound destination " + std::to_string(v->h), {},
               "->" + std::to_string(v->h));
        return t_dest(e->n, e->ty);
      }
      case ValueKind::Inl:
        return t_sum(value_ty(v->a), meta(""));
      case ValueKind::Inr: {
        int l = meta("");
        return t_sum(l, value_ty(v->a));
      }
      case ValueKind::Mod:
        return t_bang(mconst(v->m), value_ty(v->a));
      case ValueKind::Pair: {
        int l = value_ty(v->a);
        return t_prod(l, value_ty(v->b));
      }
      case ValueKind::Lam: {
        std::size_t saved = barrier_;
        barrier_ = vars_.size();
        int tx = meta("");
        vars_.emplace_back(v->x, tx);
        int tb = infer(v->body);
        vars_.pop_back();
        barrier_ = saved;
        return t_arrow(tx, mconst(v->m), tb);
      }
      case ValueKind::Ampar: {
        auto sc = push_scope(v->holes, v->a);
        int t2 = value_ty(v->a);
        int t1 = value_ty(v->b);
        pop_scope(sc.size());
        scope_of_[v.get()] = sc;
        return t_ampar(t2, t1);
      }
    }
    return t_unit();
  }

  int infer(const TermP &t) {
    int r = infer_impl(t);
    auto [it, fresh] = term_ty_.emplace(t.get(), r);
    if (!fresh) unify_or_fail(it->second, r, t->pos, "shared subterm");
    return r;
  }

  void record_mode(const Term *t, int m) {
    auto [it, fresh] = aux_mode_.emplace(t, m);
    if (!fresh) unify_mode(it->second, m);
  }

  int bind_var(const std::string &x, int ty) {
    vars_.emplace_back(x, ty);
    return ty;
  }
  void unbind() { vars_.pop_back(); }

  int infer_impl(const TermP &t) {
    const Pos p = t->pos;
    switch (t->kind) {
      case TermKind::Var:
        if (focus_delta && t->x1 == kFocusVar) return focus_ty;
        return lookup_var(t->x1, p);
      case TermKind::App: {
        int tf = infer(t->a);
        int ta = infer(t->b);
        int m = mmeta(), r = meta("");
        record_mode(t.get(), m);
        unify_or_fail(t_arrow(ta, m, r), tf, t->a->pos, "application");
        return r;
      }
      case TermKind::Seq: {
        int ta = infer(t->a);
        unify_or_fail(t_unit(), ta, t->a->pos, "left of ;");
        return infer(t->b);
      }
      case TermKind::CaseSum: {
        int ts = infer(t->a);
        int l = meta(""), r = meta("");
        unify_or_fail(t_sum(l, r), ts, t->a->pos, "case scrutinee");
        bind_var(t->x1, l);
        int t1 = infer(t->b);
        unbind();
        bind_var(t->x2, r);
        int t2 = infer(t->c);
        unbind();
        unify_or_fail(t1, t2, t->c->pos, "case branches");
        return t1;
      }
      case TermKind::CasePair: {
        int ts = infer(t->a);
        int l = meta(""), r = meta("");
        unify_or_fail(t_prod(l, r), ts, t->a->pos, "case scrutinee");
        bind_var(t->x1, l);
        bind_var(t->x2, r);
        int tb = infer(t->b);
        unbind();
        unbind();
        return tb;
      }
      case TermKind::CaseBang: {
        int ts = infer(t->a);
        int inner = meta("");
        unify_or_fail(t_bang(mconst(t->n), inner), ts, t->a->pos, "case scrutinee");
        bind_var(t->x1, inner);
        int tb = infer(t->b);
        unbind();
        return tb;
      }
      case TermKind::Upd: {
        int ts = infer(t->a);
        int u = meta(""), tt = meta("");
        unify_or_fail(t_ampar(u, tt), ts, t->a->pos, "upd scrutinee");
        bind_var(t->x1, tt);
        int tb = infer(t->b);
        unbind();
        return t_ampar(u, tb);
      }
      case TermKind::To:
        return t_ampar(infer(t->a), t_unit());
      case TermKind::From: {
        int ta = infer(t->a);
        int u = meta(""), tt = meta("");
        int right = t_bang(mconst(m1inf()), tt);
        unify_or_fail(t_ampar(u, right), ta, t->a->pos, "from*", ErrorKind::AmparRightNotUnitOrBang);
        return t_prod(u, right);
      }
      case TermKind::FromPrime:
      case TermKind::FromPrimeS: {
        int ta = infer(t->a);
        int u = meta("");
        unify_or_fail(t_ampar(u, t_unit()), ta, t->a->pos, "from'*", ErrorKind::AmparRightNotUnitOrBang);
        return u;
      }
      case TermKind::New: {
        int tt = t->ty ? import(t->ty) : meta("");
        return t_ampar(tt, t_dest(mconst(m1nu()), tt));
      }
      case TermKind::FillUnit: {
        int n = mmeta();
        unify_or_fail(t_dest(n, t_unit()), infer(t->a), t->a->pos, "<| Unit");
        return t_unit();
      }
      case TermKind::FillInl:
      case TermKind::FillInr: {
        int n = mmeta(), l = meta(""), r = meta("");
        unify_or_fail(t_dest(n, t_sum(l, r)), infer(t->a), t->a->pos, "<| Inl/Inr");
        return t_dest(n, t->kind == TermKind::FillInl ? l : r);
      }
      case TermKind::FillPair: {
        int n = mmeta(), l = meta(""), r = meta("");
        unify_or_fail(t_dest(n, t_prod(l, r)), infer(t->a), t->a->pos, "<| Pair");
        return t_prod(t_dest(n, l), t_dest(n, r));
      }
      case TermKind::FillBang: {
        int n = mmeta(), inner = meta("");
        unify_or_fail(t_dest(n, t_bang(mconst(t->m), inner)), infer(t->a), t->a->pos, "<| Mod");
        return t_dest(mtimes(n, t->m), inner);
      }
      case TermKind::FillFun: {
        int n = mmeta(), dom = meta(""), cod = meta("");
        unify_or_fail(t_dest(n, t_arrow(dom, mconst(t->m), cod)), infer(t->a), t->a->pos, "<| Fun");
        record_mode(t.get(), n);
        bind_var(t->x1, dom);
        int tb = infer(t->b);
        unbind();
        unify_or_fail(cod, tb, t->b->pos, "function body");
        return t_unit();
      }
      case TermKind::FillComp: {
        int u = meta(""), tt = meta("");
        unify_or_fail(t_dest(mconst(m1nu()), u), infer(t->a), t->a->pos, "<o destination");
        unify_or_fail(t_ampar(u, tt), infer(t->b), t->b->pos, "<o ampar");
        return tt;
      }
      case TermKind::FillLeaf: {
        int n = mmeta(), tt = meta("");
        unify_or_fail(t_dest(n, tt), infer(t->a), t->a->pos, "<! destination");
        record_mode(t.get(), n);
        unify_or_fail(tt, infer(t->b), t->b->pos, "<! payload");
        return t_unit();
      }
      case TermKind::Val: {
        if (auto it = val_ty_.find(t->v.get()); it != val_ty_.end()) return it->second;
        std::size_t saved = barrier_;
        barrier_ = vars_.size();
        int r = value_ty(t->v);
        barrier_ = saved;
        val_ty_.emplace(t->v.get(), r);
        return r;
      }
      case TermKind::Fix: {
        int tt = import(t->ty);
        bind_var(t->x1, tt);
        int tb = infer(t->a);
        unbind();
        unify_or_fail(tt, tb, t->a->pos, "fix body");
        return tt;
      }
      case TermKind::Ann: {
        int ta = infer(t->a);
        unify_or_fail(import(t->ty), ta, t->pos, "annotation");
        return ta;
      }
      case TermKind::Open: {
        auto sc = push_scope(t->holes, t->v);
        int t2 = value_ty(t->v);
        int tb = infer(t->a);
        pop_scope(sc.size());
        scope_of_[t.get()] = sc;
        for (auto &e : sc) open_scopes[e.h] = {e.ty, e.n};
        return t_ampar(t2, tb);
      }
      default:
        fail(ErrorKind::ArityOrFormError, std::string("unexpected sugar ") + kind_name(t->kind), p);
    }
  }

  void finish_phase1() {
    // Constraints of the form a * c = b where a is still unknown.
    auto solve = [&](bool force) {
      bool progress = false;
      for (auto &[i, j] : deferred_) {
        auto vi = mval(i), vj = mval(j);
        if (vi && vj) continue;
        int prod = vi ? j : i;
        auto target = vi ? vi : vj;
        if (!target) continue;
        const MNode &pn = mn_[mfind(prod)];
        if (pn.k != MK::Times) continue;
        int base = mfind(pn.a);
        if (mn_[base].k != MK::Meta) continue;
        std::optional<Mode> sol;
        for (Mult p : {Mult::One, Mult::Many}) {
          for (std::uint32_t k = 0; k <= 16 && !sol; ++k)
            if (mode_times(Mode{p, Age::fin(k)}, pn.c) == *target) sol = Mode{p, Age::fin(k)};
          if (!sol && mode_times(Mode{p, Age::infinite()}, pn.c) == *target) sol = Mode{p, Age::infinite()};
          if (sol) break;
        }
        if (!sol && !force) continue;
        mn_[base].link = mconst(sol.value_or(m1nu()));
        progress = true;
      }
      return progress;
    };
    while (solve(false)) {
    }
    for (std::size_t i = 0; i < mn_.size(); ++i)
      if (mn_[i].k == MK::Meta && mn_[i].link < 0) {
        solve(false);
        if (mn_[i].link < 0) mn_[i].link = mconst(m1nu());
      }
    for (auto &[i, j] : deferred_) {
      auto vi = mval(i), vj = mval(j);
      if (!vi || !vj || *vi != *vj)
        fail(ErrorKind::TypeMismatch,
             "mode mismatch: " + (vi ? to_string(*vi) : "?") + " vs " + (vj ? to_string(*vj) : "?"), {});
    }
  }

  TypeP to_type(int i) {
    i = find(i);
    const TNode n = tn_[i];
    switch (n.k) {
      case TK::Meta:
        return n.origin.empty() ? ty::unit() : ty::named(n.origin);
      case TK::Unit:
        return ty::unit();
      case TK::Sum:
        return ty::sum(to_type(n.a), to_type(n.b));
      case TK::Prod:
        return ty::prod(to_type(n.a), to_type(n.b));
      case TK::Ampar:
        return ty::ampar(to_type(n.a), to_type(n.b));
      case TK::Bang:
        return ty::bang(mode_of(n.m), to_type(n.a));
      case TK::Dest:
        return ty::dest(mode_of(n.m), to_type(n.a));
      case TK::Arrow:
        return ty::arrow(to_type(n.a), mode_of(n.m), to_type(n.b));
      case TK::Named: {
        std::vector<TypeP> args;
        for (int a : n.args) args.push_back(to_type(a));
        return ty::named(n.name, std::move(args));
      }
    }
    return ty::unit();
  }

  // -------------------------------------------------------- phase 2

  // Largest age that can matter: every scaling site on a path adds at most
  // the largest exponent in sight, and every upd body can strip one.
  std::uint32_t compute_bound(const TypingContext &gamma, const TermP &t, const ValueP &v) {
    std::uint32_t maxexp = 1;
    auto see = [&](Mode m) {
      if (!m.age.inf) maxexp = std::max(maxexp, m.age.k);
    };
    for (auto &n : mn_)
      if (n.k != MK::Meta) see(n.c);
    for (auto &[name, b] : gamma) {
      see(b.m);
      see(b.n);
    }
    std::function<std::uint32_t(const TermP &)> depth_t;
    std::function<std::uint32_t(const ValueP &)> depth_v;
    depth_v = [&](const ValueP &x) -> std::uint32_t {
      if (!x) return 0;
      see(x->m);
      switch (x->kind) {
        case ValueKind::Lam:
          return depth_t(x->body);
        case ValueKind::Ampar:
          return std::max(depth_v(x->a), 1 + depth_v(x->b));
        case ValueKind::Mod:
          return 1 + depth_v(x->a);
        default:
          return std::max(depth_v(x->a), depth_v(x->b));
      }
    };
    depth_t = [&](const TermP &x) -> std::uint32_t {
      if (!x) return 0;
      see(x->m);
      see(x->n);
      if (x->kind == TermKind::Val) return depth_v(x->v);
      std::uint32_t da = depth_t(x->a), db = depth_t(x->b), dc = depth_t(x->c);
      switch (x->kind) {
        case TermKind::App: return std::max(da, 1 + db);
        case TermKind::CaseSum:
        case TermKind::CasePair:
        case TermKind::CaseBang: return std::max({1 + da, db, dc});
        case TermKind::Upd:
        case TermKind::FillFun:
        case TermKind::FillComp:
        case TermKind::FillLeaf: return std::max(da, 1 + db);
        case TermKind::Fix: return 1 + da;
        case TermKind::Open: return std::max(depth_v(x->v), 1 + da);
        default: return std::max({da, db, dc});
      }
    };
    std::uint32_t d = t ? depth_t(t) : depth_v(v);
    std::uint64_t b = (static_cast<std::uint64_t>(d) + 1) * (1 + maxexp) + 1;
    return static_cast<std::uint32_t>(std::min<std::uint64_t>(b, 1u << 16));
  }

  ModeSet absent() const { return ModeSet::absent(bound_); }
  ModeSet discard() const { return ModeSet::discard(bound_); }

  Usage term_leaf() const {
    Usage u;
    u.def = discard();
    u.hdef = absent();
    return u;
  }
  Usage value_leaf() const {
    Usage u;
    u.def = absent();
    u.hdef = absent();
    return u;
  }

  void mode_error(const std::string &label, Mode declared, const ModeSet &s, Pos pos) {
    bool escape = false;
    if (!declared.age.inf) {
      escape = true;
      for (Mode m : s.elements())
        if (m.age == declared.age) escape = false;
    }
    fail(escape ? ErrorKind::AgeEscape : ErrorKind::ModeNotAchievable,
         label + " declared " + to_string(declared) + ", achievable " + s.str(), pos, label);
  }

  void bind_check(Usage &u, const Key &k, Mode declared, Pos pos) {
    const ModeSet &s = u.get(k);
    if (!s.contains(declared)) mode_error(key_str(k), declared, s, pos);
    u.m.erase(k);
  }

  Usage usage(const TermP &t) {
    const Pos p = t->pos;
    switch (t->kind) {
      case TermKind::Var: {
        Usage u = term_leaf();
        if (focus_delta && t->x1 == kFocusVar) {
          u.def = absent();
          for (auto &[h, m] : *focus_delta) u.m.emplace(kdest(h), ModeSet::single(bound_, m));
          return u;
        }
        u.m.emplace(kvar(t->x1), ModeSet::use(bound_));
        return u;
      }
      case TermKind::App: {
        Usage uf = usage(t->a);
        Usage ua = usage(t->b);
        return u_plus(u_scale(ua, mode_of(aux_mode_.at(t.get()))), uf);
      }
      case TermKind::Seq:
        return u_plus(usage(t->a), usage(t->b));
      case TermKind::CaseSum: {
        Usage us = usage(t->a);
        Usage u1 = usage(t->b);
        bind_check(u1, kvar(t->x1), t->m, p);
        Usage u2 = usage(t->c);
        bind_check(u2, kvar(t->x2), t->m, p);
        return u_plus(u_scale(us, t->m), u_meet(u1, u2));
      }
      case TermKind::CasePair: {
        Usage us = usage(t->a);
        Usage ub = usage(t->b);
        bind_check(ub, kvar(t->x1), t->m, p);
        if (t->x2 != t->x1) bind_check(ub, kvar(t->x2), t->m, p);
        return u_plus(u_scale(us, t->m), ub);
      }
      case TermKind::CaseBang: {
        Usage us = usage(t->a);
        Usage ub = usage(t->b);
        bind_check(ub, kvar(t->x1), mode_times(t->m, t->n), p);
        return u_plus(u_scale(us, t->m), ub);
      }
      case TermKind::Upd: {
        Usage us = usage(t->a);
        Usage ub = usage(t->b);
        bind_check(ub, kvar(t->x1), m1nu(), p);
        return u_plus(us, u_preimage(ub, m1up()));
      }
      case TermKind::To:
      case TermKind::From:
      case TermKind::FromPrime:
      case TermKind::FromPrimeS:
      case TermKind::FillUnit:
      case TermKind::FillInl:
      case TermKind::FillInr:
      case TermKind::FillPair:
      case TermKind::FillBang:
      case TermKind::Ann:
        return usage(t->a);
      case TermKind::New:
        return term_leaf();
      case TermKind::FillFun: {
        Usage ud = usage(t->a);
        Usage ub = usage(t->b);
        bind_check(ub, kvar(t->x1), t->m, p);
        Mode n = mode_of(aux_mode_.at(t.get()));
        return u_plus(ud, u_scale(ub, mode_times(m1up(), n)));
      }
      case TermKind::FillComp:
        return u_plus(usage(t->a), u_scale(usage(t->b), m1up()));
      case TermKind::FillLeaf: {
        Usage ud = usage(t->a);
        Usage ub = usage(t->b);
        Mode n = mode_of(aux_mode_.at(t.get()));
        return u_plus(ud, u_scale(ub, mode_times(m1up(), n)));
      }
      case TermKind::Val: {
        Usage uv = value_usage(t->v);
        for (auto &[k, s] : uv.m)
          if (k.kind == 2 && s.any_present())
            fail(ErrorKind::HoleInTermContext, "hole " + std::to_string(k.h) + " in a term", p, key_str(k));
        Usage d = term_leaf();
        return u_disjoint(uv, d);
      }
      case TermKind::Fix: {
        Usage ub = usage(t->a);
        bind_check(ub, kvar(t->x1), mwinf(), p);
        return u_scale(ub, mwinf());
      }
      case TermKind::Open: {
        Usage u2 = value_usage(t->v);
        Usage ub = usage(t->a);
        for (auto &e : scope_of_.at(t.get())) {
          own_check(u2, ub, e, p);
        }
        for (auto &[k, s] : u2.m)
          if (k.kind == 2 && s.any_present())
            fail(ErrorKind::HoleInTermContext, "hole " + std::to_string(k.h) + " not bound by this ampar", p,
                 key_str(k));
        return u_disjoint(u_preimage(ub, m1up()), u2);
      }
      default:
        fail(ErrorKind::ArityOrFormError, std::string("unexpected ") + kind_name(t->kind), p);
    }
  }

  // The own destination is used exactly once at 1nu on the right, the own
  // hole sits at its declared mode on the left, and neither leaks across.
  void own_check(Usage &left, Usage &right, const ScopeEntry &e, Pos p) {
    const ModeSet &rd = right.get(kdest(e.h));
    if (!rd.contains(m1nu())) {
      ErrorKind k = rd.any_present() ? ErrorKind::NotInvertible : ErrorKind::ModeNotAchievable;
      fail(k, "->" + std::to_string(e.h) + " must be used at " + to_string(m1nu()) + ", achievable " + rd.str(), p,
           "->" + std::to_string(e.h));
    }
    Mode n = mode_of(e.n);
    const ModeSet &lh = left.get(khole(e.h));
    if (!lh.contains(n)) mode_error("[]" + std::to_string(e.h), n, lh, p);
    if (!left.get(kdest(e.h)).has_absent() || !right.get(khole(e.h)).has_absent())
      fail(ErrorKind::AddClash, "hole and destination " + std::to_string(e.h) + " on the same side", p);
    left.m.erase(khole(e.h));
    left.m.erase(kdest(e.h));
    right.m.erase(kdest(e.h));
    right.m.erase(khole(e.h));
  }

  Usage value_usage(const ValueP &v) {
    switch (v->kind) {
      case ValueKind::Unit:
        return value_leaf();
      case ValueKind::Hole: {
        Usage u = value_leaf();
        u.m.emplace(khole(v->h), ModeSet::single(bound_, m1nu()));
        return u;
      }
      case ValueKind::Dest: {
        Usage u = value_leaf();
        u.m.emplace(kdest(v->h), opts_.strict_dest ? ModeSet::single(bound_, m1nu()) : ModeSet::use(bound_));
        return u;
      }
      case ValueKind::Inl:
      case ValueKind::Inr:
        return value_usage(v->a);
      case ValueKind::Mod:
        return u_scale(value_usage(v->a), v->m);
      case ValueKind::Pair:
        return u_plus(value_usage(v->a), value_usage(v->b));
      case ValueKind::Lam: {
        Usage ub = usage(v->body);
        bind_check(ub, kvar(v->x), v->m, v->body->pos);
        return ub;
      }
      case ValueKind::Ampar: {
        Usage u2 = value_usage(v->a);
        Usage u1 = value_usage(v->b);
        for (auto &e : scope_of_.at(v.get())) own_check(u2, u1, e, {});
        for (auto &[k, s] : u1.m)
          if (k.kind == 2 && s.any_present())
            fail(ErrorKind::HoleInTermContext, "hole " + std::to_string(k.h) + " on the right of an ampar", {},
                 key_str(k));
        for (auto &[k, s] : u2.m)
          if (k.kind == 2 && s.any_present())
            fail(ErrorKind::ArityOrFormError, "hole " + std::to_string(k.h) + " not bound by this ampar", {},
                 key_str(k));
        return u_disjoint(u_preimage(u1, m1up()), u2);
      }
    }
    return value_leaf();
  }

  void check_context(const TypingContext &gamma, const Usage &u) {
    std::set<Key> declared;
    for (auto &[name, b] : gamma) {
      Key k = b.kind == BindingKind::Var    ? kvar(name.var)
              : b.kind == BindingKind::Dest ? kdest(name.h)
                                            : khole(name.h);
      declared.insert(k);
      Mode want = b.kind == BindingKind::Hole ? b.n : b.m;
      const ModeSet &s = u.get(k);
      if (!s.contains(want)) mode_error(key_str(k), want, s, {});
    }
    for (auto &[k, s] : u.m)
      if (!declared.count(k) && !s.has_absent())
        fail(ErrorKind::ModeNotAchievable, key_str(k) + " is not declared", {}, key_str(k));
  }
};

void gamma_has_no_holes(const TypingContext &gamma) {
  for (auto &[name, b] : gamma)
    if (b.kind == BindingKind::Hole)
      throw Fail{TypeError{ErrorKind::HoleInTermContext, "hole binding " + name.str() + " in a term context", {},
                           name.str(), false}};
}

bool needs_desugar(const TermP &t);

bool needs_desugar_v(const ValueP &v) {
  if (!v) return false;
  if (v->kind == ValueKind::Lam) return needs_desugar(v->body);
  return needs_desugar_v(v->a) || needs_desugar_v(v->b);
}

bool needs_desugar(const TermP &t) {
  if (!t) return false;
  if (is_sugar(t->kind)) return true;
  if (t->kind == TermKind::Ann && t->a->kind == TermKind::New) return true;
  return needs_desugar_v(t->v) || needs_desugar(t->a) || needs_desugar(t->b) || needs_desugar(t->c);
}

// Mode at which the focus receives a name the outer context provides at `m`,
// given that the component scales the focus' context by `f`.
std::optional<Mode> preimage_of(Mode m, Mode f) {
  std::vector<Mode> cands;
  for (Mult p : {Mult::One, Mult::Many}) {
    for (std::uint32_t k = 0; k <= 64; ++k) cands.push_back(Mode{p, Age::fin(k)});
    cands.push_back(Mode{p, Age::infinite()});
  }
  for (Mode c : cands)
    if (mode_times(f, c) == m) return c;
  return std::nullopt;
}

}  // namespace

Result<TypeP> check_term(const TypeDefs &defs, const TypingContext &gamma, const TermP &t,
                         const CheckOptions &opts) {
  try {
    gamma_has_no_holes(gamma);
    TermP core = unshare(needs_desugar(t) ? desugar(t) : t);
    Checker c(defs, opts);
    return c.run_term(gamma, core);
  } catch (Fail &f) {
    return f.e;
  }
}

Result<std::map<const Term *, Mode>> infer_node_modes(const TypeDefs &defs, const TypingContext &gamma,
                                                     const TermP &t, const CheckOptions &opts) {
  try {
    gamma_has_no_holes(gamma);
    Checker c(defs, opts);
    c.phase1(gamma, t);
    return c.node_modes();
  } catch (Fail &f) {
    return f.e;
  }
}

Result<TypeP> check_value(const TypeDefs &defs, const TypingContext &theta, const ValueP &v,
                          const CheckOptions &opts) {
  try {
    for (auto &[name, b] : theta)
      if (b.kind == BindingKind::Var)
        throw Fail{TypeError{ErrorKind::ArityOrFormError, "variable " + name.str() + " in a value context", {},
                             name.str(), false}};
    Checker c(defs, opts);
    return c.run_value(theta, desugar(v));
  } catch (Fail &f) {
    return f.e;
  }
}

std::optional<TypeError> check_disjointness(const EvalContext &e) {
  std::set<HoleName> outer;
  for (auto &c : e) {
    if (c.kind == CompKind::Open) {
      for (HoleName h : c.holes)
        if (outer.count(h))
          return TypeError{ErrorKind::DisjointnessViolation,
                           "hole name " + std::to_string(h) + " already used around this open ampar", {},
                           std::to_string(h), false};
    }
    hnames(c, outer);
  }
  return std::nullopt;
}

Result<EvalCtxTyping> check_evalctx(const TypeDefs &defs, const EvalContext &e, const CheckOptions &opts) {
  if (auto err = check_disjointness(e)) return *err;
  // Destinations minted by open components and not mentioned elsewhere in
  // the context are the ones the focus must consume; walk inwards and track
  // the mode at which each one reaches the focus.
  std::map<HoleName, Mode> live;
  std::map<HoleName, int> count;
  for (auto &c : e) {
    std::set<HoleName> names;
    if (c.kind == CompKind::Open) {
      hnames(c.left, names);
    } else {
      hnames(c.frame, names);
    }
    for (HoleName h : names) count[h]++;
  }
  try {
    // Plug a placeholder, remembering the node built for each component.
    std::vector<const Term *> frames(e.size());
    TermP probe = tm::var(kFocusVar);
    for (std::size_t i = e.size(); i > 0; --i) {
      probe = plug(e[i - 1], probe);
      frames[i - 1] = probe.get();
    }
    Checker chk(defs, opts);
    chk.focus_delta = std::map<HoleName, Mode>{};
    int root_ty = chk.phase1({}, probe);
    for (auto &c : e) {
      auto apply = [&](Mode f) {
        for (auto it = live.begin(); it != live.end();) {
          auto pre = preimage_of(it->second, f);
          if (!pre)
            throw Fail{TypeError{ErrorKind::ModeNotAchievable,
                                 "->" + std::to_string(it->first) + " cannot reach the focus at " +
                                     to_string(it->second),
                                 {}, "->" + std::to_string(it->first), false}};
          it->second = *pre;
          ++it;
        }
      };
      switch (c.kind) {
        case CompKind::Open:
          for (auto &[h, m] : live) m = mode_times(m1up(), m);
          for (HoleName h : c.holes)
            if (!count.count(h) || count[h] <= 1) live[h] = m1nu();
          break;
        case CompKind::AppFun:
          break;  // needs the arrow mode, resolved below
        case CompKind::CaseSum:
        case CompKind::CasePair:
          apply(c.frame->m);
          break;
        case CompKind::CaseBang:
          apply(c.frame->m);
          break;
        case CompKind::FillCompR:
          apply(m1up());
          break;
        default:
          break;
      }
      if (c.kind == CompKind::AppFun) apply(chk.node_mode(frames[&c - e.data()]));
      if (c.kind == CompKind::FillLeafR) apply(mode_times(m1up(), chk.node_mode(frames[&c - e.data()])));
    }
    chk.focus_delta = live;
    chk.phase2({}, probe);
    TypeP fin = chk.type_of_node(root_ty);
    EvalCtxTyping out;
    for (auto &[h, m] : live) {
      auto it = chk.open_scopes.find(h);
      TypeP ty = ty::unit();
      Mode n = m1nu();
      if (it != chk.open_scopes.end()) {
        ty = chk.type_of_node(it->second.first);
        n = chk.mode_of(it->second.second);
      }
      out.delta.emplace(Name::of_hole(h), Binding::dest(m, ty, n));
    }
    out.focus = chk.type_of_node(chk.focus_ty);
    out.final = fin;
    return out;
  } catch (Fail &f) {
    return f.e;
  }
}

Result<TypeP> check_command(const TypeDefs &defs, const Command &c, const CheckOptions &opts) {
  if (auto err = check_disjointness(c.ctx)) return *err;
  return check_term(defs, {}, plug(c), opts);
}

}  // namespace lambdad
