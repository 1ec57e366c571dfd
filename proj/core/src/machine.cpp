#include "lambdad/machine.hpp"

#include "lambdad/printer.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace lambdad {

namespace {

bool isval(const TermP &t) { return t->kind == TermKind::Val; }

const char *unfocus_rule(CompKind k) {
  switch (k) {
    case CompKind::AppFun: return "⊸EU₁";
    case CompKind::AppArg: return "⊸EU₂";
    case CompKind::SeqL: return "1EU";
    case CompKind::CaseSum: return "⊕EU";
    case CompKind::CasePair: return "⊗EU";
    case CompKind::CaseBang: return "!EU";
    case CompKind::Upd: return "⋉UPDU";
    case CompKind::To: return "⋉toU";
    case CompKind::From: return "⋉fromU";
    case CompKind::FromPrime: return "⋉FROM′U";
    case CompKind::FillUnit: return "[1]EU";
    case CompKind::FillInl: return "[⊕]E₁U";
    case CompKind::FillInr: return "[⊕]E₂U";
    case CompKind::FillPair: return "[⊗]EU";
    case CompKind::FillBang: return "[!]EU";
    case CompKind::FillFun: return "[⊸]EU";
    case CompKind::FillCompL: return "[]E_cU₁";
    case CompKind::FillCompR: return "[]E_cU₂";
    case CompKind::FillLeafL: return "[]E_LU₁";
    case CompKind::FillLeafR: return "[]E_LU₂";
    case CompKind::Ann: return "annU";
    case CompKind::Open: return "⋉CL";
  }
  return "?";
}

CompKind comp_for(TermKind k) {
  switch (k) {
    case TermKind::Seq: return CompKind::SeqL;
    case TermKind::CaseSum: return CompKind::CaseSum;
    case TermKind::CasePair: return CompKind::CasePair;
    case TermKind::CaseBang: return CompKind::CaseBang;
    case TermKind::Upd: return CompKind::Upd;
    case TermKind::To: return CompKind::To;
    case TermKind::From: return CompKind::From;
    case TermKind::FromPrime: return CompKind::FromPrime;
    case TermKind::FillUnit: return CompKind::FillUnit;
    case TermKind::FillInl: return CompKind::FillInl;
    case TermKind::FillInr: return CompKind::FillInr;
    case TermKind::FillPair: return CompKind::FillPair;
    case TermKind::FillBang: return CompKind::FillBang;
    case TermKind::FillFun: return CompKind::FillFun;
    case TermKind::FillComp: return CompKind::FillCompL;
    case TermKind::FillLeaf: return CompKind::FillLeafL;
    case TermKind::Ann: return CompKind::Ann;
    default: return CompKind::SeqL;
  }
}

const char *focus_rule(TermKind k) {
  switch (k) {
    case TermKind::Seq: return "1EF";
    case TermKind::CaseSum: return "⊕EF";
    case TermKind::CasePair: return "⊗EF";
    case TermKind::CaseBang: return "!EF";
    case TermKind::Upd: return "⋉UPDF";
    case TermKind::To: return "⋉toF";
    case TermKind::From: return "⋉fromF";
    case TermKind::FromPrime: return "⋉FROM′F";
    case TermKind::FillUnit: return "[1]EF";
    case TermKind::FillInl: return "[⊕]E₁F";
    case TermKind::FillInr: return "[⊕]E₂F";
    case TermKind::FillPair: return "[⊗]EF";
    case TermKind::FillBang: return "[!]EF";
    case TermKind::FillFun: return "[⊸]EF";
    case TermKind::FillComp: return "[]E_cF₁";
    case TermKind::FillLeaf: return "[]E_LF₁";
    case TermKind::Ann: return "annF";
    default: return "?";
  }
}

// Kinds whose first child is evaluated first.
bool has_first_child_focus(TermKind k) {
  switch (k) {
    case TermKind::Seq:
    case TermKind::CaseSum:
    case TermKind::CasePair:
    case TermKind::CaseBang:
    case TermKind::Upd:
    case TermKind::To:
    case TermKind::From:
    case TermKind::FromPrime:
    case TermKind::FillUnit:
    case TermKind::FillInl:
    case TermKind::FillInr:
    case TermKind::FillPair:
    case TermKind::FillBang:
    case TermKind::FillFun:
    case TermKind::FillComp:
    case TermKind::FillLeaf:
    case TermKind::Ann:
      return true;
    default:
      return false;
  }
}

StepResult stepped(std::string rule, EvalContext e, TermP focus) {
  StepResult r;
  r.kind = StepResult::Kind::Stepped;
  r.rule = std::move(rule);
  r.next = Command{std::move(e), std::move(focus)};
  return r;
}

StepResult stuck(std::string why) {
  StepResult r;
  r.kind = StepResult::Kind::Stuck;
  r.reason = std::move(why);
  return r;
}

TermP frame_without(const TermP &t, bool slot_b) {
  auto f = std::make_shared<Term>(*t);
  if (slot_b)
    f->b = nullptr;
  else
    f->a = nullptr;
  return f;
}

StepResult push(const Command &c, CompKind k, const char *rule, bool slot_b) {
  EvalContext e = c.ctx;
  e.push_back(Comp{k, frame_without(c.focus, slot_b), {}, nullptr});
  return stepped(rule, std::move(e), slot_b ? c.focus->b : c.focus->a);
}

HoleName max_name(const std::set<HoleName> &s) { return s.empty() ? 0 : *s.rbegin(); }

std::set<HoleName> ctx_names(const EvalContext &e) {
  std::set<HoleName> s;
  hnames(e, s);
  return s;
}

// Returns null when h is not a hole of v (outside inner binders).
ValueP replace_hole(const ValueP &v, HoleName h, const ValueP &w) {
  switch (v->kind) {
    case ValueKind::Hole:
      return v->h == h ? w : nullptr;
    case ValueKind::Inl:
    case ValueKind::Inr:
    case ValueKind::Mod: {
      ValueP a = replace_hole(v->a, h, w);
      if (!a) return nullptr;
      auto n = std::make_shared<Value>(*v);
      n->a = a;
      return n;
    }
    case ValueKind::Pair:
    case ValueKind::Ampar: {
      if (v->kind == ValueKind::Ampar && hs_contains(v->holes, h)) return nullptr;
      if (ValueP a = replace_hole(v->a, h, w)) {
        auto n = std::make_shared<Value>(*v);
        n->a = a;
        return n;
      }
      if (ValueP b = replace_hole(v->b, h, w)) {
        auto n = std::make_shared<Value>(*v);
        n->b = b;
        return n;
      }
      return nullptr;
    }
    default:
      return nullptr;
  }
}

ValueP mk_ampar_unit(const ValueP &left) { return val::ampar({}, left, val::unit()); }

StepResult fill_hollow(const Command &c, HoleName h, const char *rule,
                       const std::function<ValueP(HoleName)> &shape,
                       const std::function<ValueP(HoleName)> &dests, int count) {
  auto names = ctx_names(c.ctx);
  names.insert(h);
  HoleName hp = max_name(names) + 1;
  HoleSet fresh;
  for (int i = 1; i <= count; ++i) fresh.push_back(hp + i);
  auto e = hole_subst(c.ctx, h, fresh, shape(hp));
  if (!e) return stuck("hole " + std::to_string(h) + " not found");
  return stepped(rule, std::move(*e), tm::val(dests(hp)));
}

StepResult contract_or_focus(const Command &c) {
  const TermP &t = c.focus;
  switch (t->kind) {
    case TermKind::App: {
      if (!isval(t->b)) return push(c, CompKind::AppFun, "⊸EF₁", true);
      if (!isval(t->a)) return push(c, CompKind::AppArg, "⊸EF₂", false);
      const ValueP &f = t->a->v;
      if (f->kind != ValueKind::Lam) return stuck("application of a non-function");
      return stepped("⊸EC", c.ctx, subst_val(f->body, f->x, t->b->v));
    }
    case TermKind::Var:
      return stuck("free variable " + t->x1);
    case TermKind::New:
      return stepped("⋉newC", c.ctx, tm::val(val::ampar({1}, val::hole(1), val::dest(1))));
    case TermKind::Fix:
      return stepped("fixC", c.ctx, subst(t->a, t->x1, t));
    default:
      break;
  }
  if (!has_first_child_focus(t->kind)) return stuck(std::string("cannot reduce ") + kind_name(t->kind));
  if (!isval(t->a)) return push(c, comp_for(t->kind), focus_rule(t->kind), false);
  const ValueP &v = t->a->v;
  auto dest_h = [&]() -> std::optional<HoleName> {
    if (v->kind == ValueKind::Dest) return v->h;
    return std::nullopt;
  };
  switch (t->kind) {
    case TermKind::Seq:
      if (v->kind != ValueKind::Unit) return stuck("sequence on a non-unit");
      return stepped("1EC", c.ctx, t->b);
    case TermKind::CaseSum:
      if (v->kind == ValueKind::Inl) return stepped("⊕EC₁", c.ctx, subst_val(t->b, t->x1, v->a));
      if (v->kind == ValueKind::Inr) return stepped("⊕EC₂", c.ctx, subst_val(t->c, t->x2, v->a));
      return stuck("case on a non-sum");
    case TermKind::CasePair:
      if (v->kind != ValueKind::Pair) return stuck("case on a non-pair");
      return stepped("⊗EC", c.ctx, subst_val(subst_val(t->b, t->x1, v->a), t->x2, v->b));
    case TermKind::CaseBang:
      if (v->kind != ValueKind::Mod || v->m != t->n) return stuck("case on a mismatched Mod");
      return stepped("!EC", c.ctx, subst_val(t->b, t->x1, v->a));
    case TermKind::Upd: {
      if (v->kind != ValueKind::Ampar) return stuck("upd on a non-ampar");
      // Offset chosen so that the first opened name is max(H u hnames(E)) + 1.
      auto names = ctx_names(c.ctx);
      names.insert(v->holes.begin(), v->holes.end());
      HoleName d = max_name(names);
      EvalContext e = c.ctx;
      e.push_back(Comp{CompKind::Open, nullptr, hs_shift(v->holes, d), cond_shift(v->a, v->holes, d)});
      return stepped("⋉OP", std::move(e), subst_val(t->b, t->x1, cond_shift(v->b, v->holes, d)));
    }
    case TermKind::To:
      return stepped("⋉toC", c.ctx, tm::val(mk_ampar_unit(v)));
    case TermKind::From:
      if (v->kind != ValueKind::Ampar || !v->holes.empty() || v->b->kind != ValueKind::Mod ||
          v->b->m != m1inf())
        return stuck("from* on an ampar that is not closed");
      return stepped("⋉fromC", c.ctx, tm::val(val::pair(v->a, v->b)));
    case TermKind::FromPrime:
      if (v->kind != ValueKind::Ampar || !v->holes.empty() || v->b->kind != ValueKind::Unit)
        return stuck("from'* on an ampar that is not closed");
      return stepped("⋉FROM′C", c.ctx, tm::val(v->a));
    case TermKind::Ann:
      return stepped("annC", c.ctx, t->a);
    default:
      break;
  }
  auto h = dest_h();
  switch (t->kind) {
    case TermKind::FillComp:
      if (!isval(t->b)) return push(c, CompKind::FillCompR, "[]E_cF₂", true);
      break;
    case TermKind::FillLeaf:
      if (!isval(t->b)) return push(c, CompKind::FillLeafR, "[]E_LF₂", true);
      break;
    default:
      break;
  }
  if (!h) return stuck("fill on a non-destination");
  switch (t->kind) {
    case TermKind::FillUnit: {
      auto e = hole_subst(c.ctx, *h, {}, val::unit());
      if (!e) return stuck("hole not found");
      return stepped("[1]EC", std::move(*e), tm::val(val::unit()));
    }
    case TermKind::FillInl:
    case TermKind::FillInr: {
      bool left = t->kind == TermKind::FillInl;
      return fill_hollow(
          c, *h, left ? "[⊕]E₁C" : "[⊕]E₂C",
          [&](HoleName hp) { return left ? val::inl(val::hole(hp + 1)) : val::inr(val::hole(hp + 1)); },
          [](HoleName hp) { return val::dest(hp + 1); }, 1);
    }
    case TermKind::FillBang: {
      Mode m = t->m;
      return fill_hollow(
          c, *h, "[!]EC", [&](HoleName hp) { return val::mod(m, val::hole(hp + 1)); },
          [](HoleName hp) { return val::dest(hp + 1); }, 1);
    }
    case TermKind::FillPair:
      return fill_hollow(
          c, *h, "[⊗]EC", [](HoleName hp) { return val::pair(val::hole(hp + 1), val::hole(hp + 2)); },
          [](HoleName hp) { return val::pair(val::dest(hp + 1), val::dest(hp + 2)); }, 2);
    case TermKind::FillFun: {
      auto e = hole_subst(c.ctx, *h, {}, val::lam(t->x1, t->m, t->b));
      if (!e) return stuck("hole not found");
      return stepped("[⊸]EC", std::move(*e), tm::val(val::unit()));
    }
    case TermKind::FillComp: {
      const ValueP &amp = t->b->v;
      if (amp->kind != ValueKind::Ampar) return stuck("<o on a non-ampar");
      auto names = ctx_names(c.ctx);
      names.insert(amp->holes.begin(), amp->holes.end());
      names.insert(*h);
      HoleName d = max_name(names) + 1;
      auto e = hole_subst(c.ctx, *h, hs_shift(amp->holes, d), cond_shift(amp->a, amp->holes, d));
      if (!e) return stuck("hole not found");
      return stepped("[]E_cC", std::move(*e), tm::val(cond_shift(amp->b, amp->holes, d)));
    }
    case TermKind::FillLeaf: {
      auto e = hole_subst(c.ctx, *h, {}, t->b->v);
      if (!e) return stuck("hole not found");
      return stepped("[]E_LC", std::move(*e), tm::val(val::unit()));
    }
    default:
      return stuck(std::string("cannot reduce ") + kind_name(t->kind));
  }
}

}  // namespace

bool is_final(const Command &c) { return c.ctx.empty() && isval(c.focus); }

StepResult step(const Command &c) {
  if (isval(c.focus)) {
    if (c.ctx.empty()) {
      StepResult r;
      r.kind = StepResult::Kind::Final;
      r.value = c.focus->v;
      return r;
    }
    const Comp &top = c.ctx.back();
    EvalContext e(c.ctx.begin(), c.ctx.end() - 1);
    if (top.kind == CompKind::Open)
      return stepped(unfocus_rule(top.kind), std::move(e), tm::val(val::ampar(top.holes, top.left, c.focus->v)));
    return stepped(unfocus_rule(top.kind), std::move(e), plug(top, c.focus));
  }
  return contract_or_focus(c);
}

std::vector<std::string> applicable_rules(const Command &c) {
  std::vector<std::string> out;
  const TermP &t = c.focus;
  auto add = [&](bool cond, const char *rule) {
    if (cond) out.emplace_back(rule);
  };
  auto vk = [](const TermP &x) -> std::optional<ValueKind> {
    if (x && x->kind == TermKind::Val) return x->v->kind;
    return std::nullopt;
  };
  auto dest = [&](const TermP &x) { return vk(x) == ValueKind::Dest; };
  // unfocusing
  add(isval(t) && !c.ctx.empty(), c.ctx.empty() ? "" : unfocus_rule(c.ctx.back().kind));
  const TermKind k = t->kind;
  // application
  add(k == TermKind::App && !isval(t->b), "⊸EF₁");
  add(k == TermKind::App && isval(t->b) && !isval(t->a), "⊸EF₂");
  add(k == TermKind::App && vk(t->a) == ValueKind::Lam && isval(t->b), "⊸EC");
  // generic first-child focusing
  add(has_first_child_focus(k) && !isval(t->a), focus_rule(k));
  add(k == TermKind::Seq && vk(t->a) == ValueKind::Unit, "1EC");
  add(k == TermKind::CaseSum && vk(t->a) == ValueKind::Inl, "⊕EC₁");
  add(k == TermKind::CaseSum && vk(t->a) == ValueKind::Inr, "⊕EC₂");
  add(k == TermKind::CasePair && vk(t->a) == ValueKind::Pair, "⊗EC");
  add(k == TermKind::CaseBang && vk(t->a) == ValueKind::Mod && t->a->v->m == t->n, "!EC");
  add(k == TermKind::Upd && vk(t->a) == ValueKind::Ampar, "⋉OP");
  add(k == TermKind::To && isval(t->a), "⋉toC");
  add(k == TermKind::From && vk(t->a) == ValueKind::Ampar && t->a->v->holes.empty() &&
          t->a->v->b->kind == ValueKind::Mod && t->a->v->b->m == m1inf(),
      "⋉fromC");
  add(k == TermKind::FromPrime && vk(t->a) == ValueKind::Ampar && t->a->v->holes.empty() &&
          t->a->v->b->kind == ValueKind::Unit,
      "⋉FROM′C");
  add(k == TermKind::New, "⋉newC");
  add(k == TermKind::Fix, "fixC");
  add(k == TermKind::Ann && isval(t->a), "annC");
  add(k == TermKind::FillUnit && dest(t->a), "[1]EC");
  add(k == TermKind::FillInl && dest(t->a), "[⊕]E₁C");
  add(k == TermKind::FillInr && dest(t->a), "[⊕]E₂C");
  add(k == TermKind::FillBang && dest(t->a), "[!]EC");
  add(k == TermKind::FillPair && dest(t->a), "[⊗]EC");
  add(k == TermKind::FillFun && dest(t->a), "[⊸]EC");
  add(k == TermKind::FillComp && isval(t->a) && !isval(t->b), "[]E_cF₂");
  add(k == TermKind::FillComp && dest(t->a) && vk(t->b) == ValueKind::Ampar, "[]E_cC");
  add(k == TermKind::FillLeaf && isval(t->a) && !isval(t->b), "[]E_LF₂");
  add(k == TermKind::FillLeaf && dest(t->a) && isval(t->b), "[]E_LC");
  return out;
}

RunResult run(const Command &c, std::uint64_t fuel, bool record) {
  RunResult r;
  r.trace.origin = c;
  Command cur = c;
  while (true) {
    StepResult s = step(cur);
    if (s.kind == StepResult::Kind::Final) {
      r.outcome = RunResult::Outcome::Finished;
      r.value = s.value;
      break;
    }
    if (s.kind == StepResult::Kind::Stuck) {
      r.outcome = RunResult::Outcome::Stuck;
      r.reason = s.reason;
      break;
    }
    if (r.steps >= fuel) {
      r.outcome = RunResult::Outcome::OutOfFuel;
      break;
    }
    ++r.steps;
    if (record) r.trace.steps.push_back(TraceStep{s.rule, s.next});
    cur = std::move(s.next);
  }
  r.last = std::move(cur);
  return r;
}

std::optional<EvalContext> hole_subst(const EvalContext &e, HoleName h, const HoleSet &fresh, const ValueP &v) {
  for (std::size_t i = e.size(); i > 0; --i) {
    const Comp &c = e[i - 1];
    if (c.kind != CompKind::Open || !hs_contains(c.holes, h)) continue;
    ValueP left = replace_hole(c.left, h, v);
    if (!left) return std::nullopt;
    EvalContext out = e;
    out[i - 1].left = left;
    out[i - 1].holes = hs_union(hs_minus(c.holes, {h}), fresh);
    return out;
  }
  return std::nullopt;
}

ValueP cond_shift(const ValueP &v, const HoleSet &hs, HoleName d) {
  if (!v || hs.empty() || d == 0) return v;
  switch (v->kind) {
    case ValueKind::Hole:
      return hs_contains(hs, v->h) ? val::hole(v->h + d) : v;
    case ValueKind::Dest:
      return hs_contains(hs, v->h) ? val::dest(v->h + d) : v;
    case ValueKind::Unit:
      return v;
    case ValueKind::Lam: {
      TermP b = cond_shift(v->body, hs, d);
      return b == v->body ? v : val::lam(v->x, v->m, b);
    }
    case ValueKind::Ampar: {
      HoleSet inner = hs_minus(hs, v->holes);
      ValueP a = cond_shift(v->a, inner, d), b = cond_shift(v->b, inner, d);
      if (a == v->a && b == v->b) return v;
      return val::ampar(v->holes, a, b);
    }
    default: {
      ValueP a = cond_shift(v->a, hs, d), b = cond_shift(v->b, hs, d);
      if (a == v->a && b == v->b) return v;
      auto n = std::make_shared<Value>(*v);
      n->a = a;
      n->b = b;
      return n;
    }
  }
}

TermP cond_shift(const TermP &t, const HoleSet &hs, HoleName d) {
  if (!t || hs.empty() || d == 0) return t;
  HoleSet inner = t->kind == TermKind::Open ? hs_minus(hs, t->holes) : hs;
  ValueP v = cond_shift(t->v, inner, d);
  TermP a = cond_shift(t->a, inner, d), b = cond_shift(t->b, inner, d), c = cond_shift(t->c, inner, d);
  if (v == t->v && a == t->a && b == t->b && c == t->c) return t;
  auto n = std::make_shared<Term>(*t);
  n->v = v;
  n->a = a;
  n->b = b;
  n->c = c;
  return n;
}

namespace {

struct Canon {
  HoleName next = 1;
  std::vector<std::map<HoleName, HoleName>> scopes;

  HoleName rename(HoleName h) {
    for (auto it = scopes.rbegin(); it != scopes.rend(); ++it) {
      auto f = it->find(h);
      if (f == it->end()) continue;
      if (f->second == 0) f->second = next++;
      return f->second;
    }
    return h;
  }

  HoleSet enter(const HoleSet &hs) {
    std::map<HoleName, HoleName> m;
    for (HoleName h : hs) m[h] = 0;
    scopes.push_back(m);
    return hs;
  }
  HoleSet leave() {
    HoleSet out;
    for (auto &[h, n] : scopes.back()) out.push_back(n ? n : next++);
    scopes.pop_back();
    std::sort(out.begin(), out.end());
    return out;
  }

  ValueP value(const ValueP &v) {
    if (!v) return v;
    switch (v->kind) {
      case ValueKind::Hole:
        return val::hole(rename(v->h));
      case ValueKind::Dest:
        return val::dest(rename(v->h));
      case ValueKind::Unit:
        return v;
      case ValueKind::Lam:
        return val::lam(v->x, v->m, term(v->body));
      case ValueKind::Ampar: {
        enter(v->holes);
        ValueP a = value(v->a);
        ValueP b = value(v->b);
        return val::ampar(leave(), a, b);
      }
      default: {
        auto n = std::make_shared<Value>(*v);
        n->a = value(v->a);
        n->b = value(v->b);
        return n;
      }
    }
  }

  TermP term(const TermP &t) {
    if (!t) return t;
    auto n = std::make_shared<Term>(*t);
    if (t->kind == TermKind::Open) {
      enter(t->holes);
      n->v = value(t->v);
      n->a = term(t->a);
      n->holes = leave();
      return n;
    }
    n->v = value(t->v);
    n->a = term(t->a);
    n->b = term(t->b);
    n->c = term(t->c);
    return n;
  }
};

}  // namespace

ValueP canonicalize(const ValueP &v) {
  Canon c;
  return c.value(v);
}

}  // namespace lambdad
