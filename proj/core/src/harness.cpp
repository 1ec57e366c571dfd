#include "lambdad/harness.hpp"

#include "lambdad/printer.hpp"
#include "lambdad/typecheck.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <sstream>

namespace lambdad {

std::vector<const Command *> trace_commands(const Trace &tr) {
  std::vector<const Command *> out{&tr.origin};
  for (auto &s : tr.steps) out.push_back(&s.cmd);
  return out;
}

Verdict check_preservation(const TypeDefs &defs, const Trace &tr, const TypeP &type, std::size_t *coercions) {
  Verdict v;
  auto cmds = trace_commands(tr);
  for (std::size_t i = 0; i < cmds.size(); ++i) {
    CheckOptions strict;
    strict.strict_dest = true;
    strict.expected = type;
    auto r = check_command(defs, *cmds[i], strict);
    if (!ok(r)) {
      CheckOptions lax;
      lax.expected = type;
      auto r2 = check_command(defs, *cmds[i], lax);
      if (!ok(r2)) {
        v.fail(i, error(r2).str());
        break;
      }
      if (coercions) ++*coercions;
      r = r2;
    }
    if (!type_equiv(defs, value(r), type)) {
      v.fail(i, "typed at " + print(value(r)) + " instead of " + print(type));
      break;
    }
  }
  return v;
}

Verdict check_progress_determinism(const Trace &tr, RunResult::Outcome outcome) {
  Verdict v;
  auto cmds = trace_commands(tr);
  for (std::size_t i = 0; i < cmds.size(); ++i) {
    auto rules = applicable_rules(*cmds[i]);
    bool last = i + 1 == cmds.size();
    if (is_final(*cmds[i])) {
      if (!rules.empty()) v.fail(i, "final command matches " + rules.front());
      continue;
    }
    if (rules.empty()) {
      v.fail(i, "stuck: no rule applies");
      continue;
    }
    if (rules.size() > 1) {
      std::string all;
      for (auto &r : rules) all += " " + r;
      v.fail(i, "several rules apply:" + all);
    }
    if (!last && tr.steps[i].rule != rules.front())
      v.fail(i, "stepped with " + tr.steps[i].rule + " but " + rules.front() + " applies");
  }
  if (outcome == RunResult::Outcome::Stuck) v.fail(cmds.size() - 1, "run ended stuck");
  return v;
}

// ---------------------------------------------------------------- balance

namespace {

struct Occ {
  std::size_t holes = 0, dests = 0;
  Occ &operator+=(const Occ &o) {
    holes += o.holes;
    dests += o.dests;
    return *this;
  }
};

Occ occ(const TermP &t, HoleName h);

Occ occ(const ValueP &v, HoleName h) {
  if (!v) return {};
  switch (v->kind) {
    case ValueKind::Hole: return {v->h == h ? 1u : 0u, 0};
    case ValueKind::Dest: return {0, v->h == h ? 1u : 0u};
    case ValueKind::Unit: return {};
    case ValueKind::Lam: return occ(v->body, h);
    case ValueKind::Ampar:
      if (hs_contains(v->holes, h)) return {};
      [[fallthrough]];
    default: {
      Occ o = occ(v->a, h);
      o += occ(v->b, h);
      return o;
    }
  }
}

Occ occ(const TermP &t, HoleName h) {
  if (!t) return {};
  if (t->kind == TermKind::Open && hs_contains(t->holes, h)) return {};
  Occ o = occ(t->v, h);
  o += occ(t->a, h);
  if (t->kind == TermKind::CaseSum) {
    // only one branch runs
    Occ l = occ(t->b, h), r = occ(t->c, h);
    o += Occ{std::max(l.holes, r.holes), std::max(l.dests, r.dests)};
    return o;
  }
  o += occ(t->b, h);
  o += occ(t->c, h);
  return o;
}

Occ occ(const Comp &c, HoleName h) {
  if (c.kind == CompKind::Open) return occ(c.left, h);
  return occ(c.frame, h);
}

void balance_value(const ValueP &v, std::size_t step, Verdict &out);

void balance_term(const TermP &t, std::size_t step, Verdict &out) {
  if (!t) return;
  balance_value(t->v, step, out);
  balance_term(t->a, step, out);
  balance_term(t->b, step, out);
  balance_term(t->c, step, out);
}

void balance_value(const ValueP &v, std::size_t step, Verdict &out) {
  if (!v) return;
  if (v->kind == ValueKind::Ampar) {
    for (HoleName h : v->holes) {
      Occ l = occ(v->a, h), r = occ(v->b, h);
      if (l.holes != 1 || r.holes != 0 || l.dests + r.dests != 1)
        out.fail(step, "ampar name " + std::to_string(h) + " has " + std::to_string(l.holes + r.holes) + " holes and " +
                           std::to_string(l.dests + r.dests) + " destinations");
    }
  }
  if (v->kind == ValueKind::Lam) balance_term(v->body, step, out);
  balance_value(v->a, step, out);
  balance_value(v->b, step, out);
}

void scan(const Command &c, std::size_t step, Verdict &out) {
  for (std::size_t i = 0; i < c.ctx.size(); ++i) {
    const Comp &k = c.ctx[i];
    if (k.kind != CompKind::Open) {
      balance_term(k.frame, step, out);
      continue;
    }
    balance_value(k.left, step, out);
    for (HoleName h : k.holes) {
      Occ left = occ(k.left, h);
      Occ rest = occ(c.focus, h);
      for (std::size_t j = i + 1; j < c.ctx.size(); ++j) rest += occ(c.ctx[j], h);
      Occ before;
      for (std::size_t j = 0; j < i; ++j) before += occ(c.ctx[j], h);
      if (left.holes != 1 || left.dests != 0 || rest.dests != 1 || rest.holes != 0 || before.holes + before.dests != 0)
        out.fail(step, "open name " + std::to_string(h) + " is not paired: " + std::to_string(left.holes) +
                           " holes on its structure, " + std::to_string(rest.dests) + " destinations inside");
    }
  }
  balance_term(c.focus, step, out);
}

}  // namespace

Verdict scan_balance(const Command &c) {
  Verdict v;
  scan(c, 0, v);
  return v;
}

Verdict scan_balance(const Trace &tr) {
  Verdict v;
  auto cmds = trace_commands(tr);
  for (std::size_t i = 0; i < cmds.size(); ++i) scan(*cmds[i], i, v);
  return v;
}

std::optional<std::uint64_t> count_steps(const TermP &program, std::uint64_t fuel) {
  auto r = run(initial(program), fuel, false);
  if (r.outcome != RunResult::Outcome::Finished) return std::nullopt;
  return r.steps;
}

// ---------------------------------------------------------------- encodings

ValueP encode_nat(std::uint64_t n) {
  ValueP v = val::inl(val::unit());
  for (std::uint64_t i = 0; i < n; ++i) v = val::inr(v);
  return v;
}

std::optional<std::uint64_t> decode_nat(const ValueP &v) {
  std::uint64_t n = 0;
  const Value *p = v.get();
  while (p && p->kind == ValueKind::Inr) {
    ++n;
    p = p->a.get();
  }
  if (!p || p->kind != ValueKind::Inl || p->a->kind != ValueKind::Unit) return std::nullopt;
  return n;
}

ValueP encode_bool(bool b) { return b ? val::inl(val::unit()) : val::inr(val::unit()); }

std::optional<bool> decode_bool(const ValueP &v) {
  if ((v->kind == ValueKind::Inl || v->kind == ValueKind::Inr) && v->a->kind == ValueKind::Unit)
    return v->kind == ValueKind::Inl;
  return std::nullopt;
}

ValueP encode_list(const std::vector<ValueP> &xs) {
  ValueP v = val::inl(val::unit());
  for (auto it = xs.rbegin(); it != xs.rend(); ++it) v = val::inr(val::pair(*it, v));
  return v;
}

std::optional<std::vector<ValueP>> decode_list(const ValueP &v) {
  std::vector<ValueP> out;
  const Value *p = v.get();
  while (p && p->kind == ValueKind::Inr && p->a->kind == ValueKind::Pair) {
    out.push_back(p->a->a);
    p = p->a->b.get();
  }
  if (!p || p->kind != ValueKind::Inl || p->a->kind != ValueKind::Unit) return std::nullopt;
  return out;
}

ValueP encode_nat_list(const std::vector<std::uint64_t> &xs) {
  std::vector<ValueP> vs;
  for (auto x : xs) vs.push_back(encode_nat(x));
  return encode_list(vs);
}

std::optional<std::vector<std::uint64_t>> decode_nat_list(const ValueP &v) {
  auto xs = decode_list(v);
  if (!xs) return std::nullopt;
  std::vector<std::uint64_t> out;
  for (auto &x : *xs) {
    auto n = decode_nat(x);
    if (!n) return std::nullopt;
    out.push_back(*n);
  }
  return out;
}

std::size_t tree_size(const Tree &t) { return t ? 1 + tree_size(t->left) + tree_size(t->right) : 0; }

bool tree_eq(const Tree &a, const Tree &b) {
  if (!a || !b) return !a && !b;
  return a->label == b->label && tree_eq(a->left, b->left) && tree_eq(a->right, b->right);
}

std::string tree_str(const Tree &t) {
  if (!t) return "Nil";
  return "Node(" + std::to_string(t->label) + ", " + tree_str(t->left) + ", " + tree_str(t->right) + ")";
}

ValueP encode_tree(const Tree &t, bool nat_labels) {
  if (!t) return val::inl(val::unit());
  ValueP label = nat_labels ? encode_nat(t->label) : val::unit();
  return val::inr(val::pair(label, val::pair(encode_tree(t->left, nat_labels), encode_tree(t->right, nat_labels))));
}

std::optional<Tree> decode_tree(const ValueP &v, bool nat_labels) {
  if (v->kind == ValueKind::Inl && v->a->kind == ValueKind::Unit) return Tree{};
  if (v->kind != ValueKind::Inr || v->a->kind != ValueKind::Pair || v->a->b->kind != ValueKind::Pair)
    return std::nullopt;
  auto node = std::make_shared<TreeNode>();
  if (nat_labels) {
    auto n = decode_nat(v->a->a);
    if (!n) return std::nullopt;
    node->label = *n;
  } else if (v->a->a->kind != ValueKind::Unit) {
    return std::nullopt;
  }
  auto l = decode_tree(v->a->b->a, nat_labels);
  auto r = decode_tree(v->a->b->b, nat_labels);
  if (!l || !r) return std::nullopt;
  node->left = *l;
  node->right = *r;
  return Tree(node);
}

ValueP encode_ops(const std::vector<QueueOp> &ops) {
  std::vector<ValueP> vs;
  for (auto &op : ops) vs.push_back(op ? val::inr(encode_nat(*op)) : val::inl(val::unit()));
  return encode_list(vs);
}

std::optional<FifoResult> decode_fifo(const ValueP &v) {
  if (v->kind != ValueKind::Pair) return std::nullopt;
  auto outs = decode_list(v->a);
  auto rest = decode_nat_list(v->b);
  if (!outs || !rest) return std::nullopt;
  FifoResult r;
  r.remaining = *rest;
  for (auto &o : *outs) {
    if (o->kind == ValueKind::Inl && o->a->kind == ValueKind::Unit) {
      r.dequeued.push_back(std::nullopt);
    } else if (o->kind == ValueKind::Inr) {
      auto n = decode_nat(o->a);
      if (!n) return std::nullopt;
      r.dequeued.push_back(*n);
    } else {
      return std::nullopt;
    }
  }
  return r;
}

// ---------------------------------------------------------------- oracles

std::vector<std::uint64_t> oracle_map_succ(const std::vector<std::uint64_t> &xs) {
  std::vector<std::uint64_t> out;
  out.reserve(xs.size());
  for (auto x : xs) out.push_back(x + 1);
  return out;
}

Tree oracle_level_order(const Tree &t) {
  // Copy the shape, then number nodes in breadth-first order from 1.
  std::function<std::shared_ptr<TreeNode>(const Tree &)> copy = [&](const Tree &s) -> std::shared_ptr<TreeNode> {
    if (!s) return nullptr;
    auto n = std::make_shared<TreeNode>();
    n->left = copy(s->left);
    n->right = copy(s->right);
    return n;
  };
  auto root = copy(t);
  std::deque<TreeNode *> q;
  if (root) q.push_back(root.get());
  std::uint64_t next = 1;
  while (!q.empty()) {
    TreeNode *n = q.front();
    q.pop_front();
    n->label = next++;
    if (n->left) q.push_back(const_cast<TreeNode *>(n->left.get()));
    if (n->right) q.push_back(const_cast<TreeNode *>(n->right.get()));
  }
  return root;
}

FifoResult oracle_fifo(const std::vector<QueueOp> &ops) {
  FifoResult r;
  std::deque<std::uint64_t> q;
  for (auto &op : ops) {
    if (op) {
      q.push_back(*op);
    } else if (q.empty()) {
      r.dequeued.push_back(std::nullopt);
    } else {
      r.dequeued.push_back(q.front());
      q.pop_front();
    }
  }
  r.remaining.assign(q.begin(), q.end());
  return r;
}

// ---------------------------------------------------------------- inputs

std::vector<std::uint64_t> random_list(std::mt19937_64 &rng, std::size_t max_len, std::uint64_t max_elem) {
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<std::uint64_t> elem(0, max_elem);
  std::vector<std::uint64_t> xs(len(rng));
  for (auto &x : xs) x = elem(rng);
  return xs;
}

namespace {

std::uint64_t catalan(std::size_t n) {
  static std::vector<std::uint64_t> memo{1};
  while (memo.size() <= n) {
    std::size_t m = memo.size();
    std::uint64_t c = 0;
    for (std::size_t k = 0; k < m; ++k) c += memo[k] * memo[m - 1 - k];
    memo.push_back(c);
  }
  return memo[n];
}

Tree shape(std::mt19937_64 &rng, std::size_t n) {
  if (n == 0) return nullptr;
  std::uniform_int_distribution<std::uint64_t> pick(0, catalan(n) - 1);
  std::uint64_t r = pick(rng);
  std::size_t k = 0;
  while (true) {
    std::uint64_t w = catalan(k) * catalan(n - 1 - k);
    if (r < w) break;
    r -= w;
    ++k;
  }
  auto node = std::make_shared<TreeNode>();
  node->left = shape(rng, k);
  node->right = shape(rng, n - 1 - k);
  return node;
}

}  // namespace

Tree random_tree(std::mt19937_64 &rng, std::size_t max_nodes) {
  std::uniform_int_distribution<std::size_t> count(0, max_nodes);
  return shape(rng, count(rng));
}

std::vector<QueueOp> random_ops(std::mt19937_64 &rng, std::size_t max_len, double enqueue_ratio,
                                std::uint64_t max_elem) {
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::bernoulli_distribution enq(enqueue_ratio);
  std::uniform_int_distribution<std::uint64_t> elem(0, max_elem);
  std::vector<QueueOp> ops(len(rng));
  for (auto &op : ops)
    if (enq(rng)) op = elem(rng);
  return ops;
}

}  // namespace lambdad
