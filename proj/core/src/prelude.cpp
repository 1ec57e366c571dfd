#include "lambdad/prelude.hpp"

#include "lambdad/desugar.hpp"
#include "lambdad/printer.hpp"
#include "lambdad/typecheck.hpp"

#include <algorithm>
#include <optional>
#include <set>

namespace lambdad {

const std::map<std::string, ErrorKind> &prelude_expected_failures() {
  static const std::map<std::string, ErrorKind> m = {
      {"scope_escape2", ErrorKind::AgeEscape},
      {"scope_escape3", ErrorKind::AgeEscape},
  };
  return m;
}

namespace {

TypeError link_error(const std::string &msg, Pos p = {}) {
  return TypeError{ErrorKind::UnknownVar, msg, p, {}, false};
}

// Names bound by `t` over its child slot (0 = a, 1 = b, 2 = c).
std::vector<std::string> binders(const Term &t, int slot) {
  switch (t.kind) {
    case TermKind::LamS:
    case TermKind::Fix:
      if (slot == 0) return {t.x1};
      break;
    case TermKind::CaseSum:
      if (slot == 1) return {t.x1};
      if (slot == 2) return {t.x2};
      break;
    case TermKind::CasePair:
      if (slot == 1) return {t.x1, t.x2};
      break;
    case TermKind::CaseBang:
    case TermKind::Upd:
    case TermKind::FillFun:
      if (slot == 1) return {t.x1};
      break;
    default:
      break;
  }
  return {};
}

struct Freshener {
  int &counter;

  TermP run(const TermP &t) {
    if (!t || t->kind == TermKind::Val) return t;
    auto n = std::make_shared<Term>(*t);
    auto rename = [&](std::string &x, std::initializer_list<TermP *> scope) {
      std::string y = x + "%" + std::to_string(++counter);
      for (TermP *s : scope) *s = subst(*s, x, tm::var(y));
      x = y;
    };
    switch (t->kind) {
      case TermKind::LamS:
      case TermKind::Fix:
        rename(n->x1, {&n->a});
        break;
      case TermKind::CaseSum:
        rename(n->x1, {&n->b});
        rename(n->x2, {&n->c});
        break;
      case TermKind::CasePair: {
        std::string x1 = n->x1;
        rename(n->x1, {&n->b});
        if (n->x2 != x1) rename(n->x2, {&n->b});
        break;
      }
      case TermKind::CaseBang:
      case TermKind::Upd:
      case TermKind::FillFun:
        rename(n->x1, {&n->b});
        break;
      default:
        break;
    }
    n->a = run(n->a);
    n->b = run(n->b);
    n->c = run(n->c);
    return n;
  }
};

}  // namespace

const TermDef *Environment::find(const std::string &name) const {
  auto it = defs_.find(name);
  return it == defs_.end() ? nullptr : &it->second;
}

std::optional<TypeError> Environment::add(const Program &p) {
  for (auto &name : p.type_order) {
    if (types_.count(name)) return TypeError{ErrorKind::ArityOrFormError, "duplicate type '" + name + "'", {}, {}, false};
    types_.emplace(name, p.type_defs.at(name));
  }
  for (auto &d : p.defs) {
    if (defs_.count(d.name))
      return TypeError{ErrorKind::ArityOrFormError, "duplicate definition '" + d.name + "'", d.pos, {}, false};
    defs_.emplace(d.name, d);
    order_.push_back(d.name);
  }
  return std::nullopt;
}

namespace {

bool is_type_var(const std::string &name) { return name.find('#') != std::string::npos; }

TypeP rename_type_vars(const TypeP &t, std::map<std::string, std::string> &names, int &counter) {
  if (!t) return t;
  auto n = std::make_shared<Type>(*t);
  if (t->kind == TypeKind::Named && t->args.empty() && is_type_var(t->name)) {
    auto it = names.find(t->name);
    if (it == names.end())
      it = names.emplace(t->name, t->name.substr(0, t->name.find('#') + 1) + std::to_string(++counter)).first;
    n->name = it->second;
    return n;
  }
  n->a = rename_type_vars(t->a, names, counter);
  n->b = rename_type_vars(t->b, names, counter);
  for (auto &a : n->args) a = rename_type_vars(a, names, counter);
  return n;
}

// Gives every type variable of an inlined copy a fresh name, so that each
// use of a definition gets its own instance.
TermP rename_type_vars(const TermP &t, std::map<std::string, std::string> &names, int &counter) {
  if (!t || t->kind == TermKind::Val) return t;
  auto n = std::make_shared<Term>(*t);
  n->ty = rename_type_vars(t->ty, names, counter);
  n->a = rename_type_vars(t->a, names, counter);
  n->b = rename_type_vars(t->b, names, counter);
  n->c = rename_type_vars(t->c, names, counter);
  return n;
}

struct Linker {
  const Environment &env;
  std::map<std::string, TermP> &memo;
  std::set<std::string> active;
  int counter = 0;
  int *type_counter;

  TermP def_body(const std::string &name, Pos p) {
    if (auto it = memo.find(name); it != memo.end()) return it->second;
    if (active.count(name)) throw link_error("definition '" + name + "' refers to itself; use fix", p);
    active.insert(name);
    TermP t = go(env.find(name)->body, {});
    active.erase(name);
    memo[name] = t;
    return t;
  }

  // An inlined reference keeps the definition's annotation.
  TermP use(const std::string &name, Pos p) {
    TermP t = def_body(name, p);
    const TermDef *d = env.find(name);
    if (d->annotation) t = tm::ann(t, d->annotation, p);
    std::map<std::string, std::string> names;
    return rename_type_vars(t, names, *type_counter);
  }

  TermP go(const TermP &t, const std::set<std::string> &bound) {
    if (!t || t->kind == TermKind::Val) return t;
    if (t->kind == TermKind::App || t->kind == TermKind::Var) {
      std::vector<TermP> args;
      TermP head = t;
      while (head->kind == TermKind::App) {
        args.push_back(head->b);
        head = head->a;
      }
      std::reverse(args.begin(), args.end());
      if (head->kind == TermKind::Var && !bound.count(head->x1)) {
        const TermDef *d = env.find(head->x1);
        if (d && !d->params.empty()) {
          if (args.size() < d->params.size())
            throw link_error("macro '" + d->name + "' needs " + std::to_string(d->params.size()) + " arguments",
                             head->pos);
          Freshener f{counter};
          TermP body = f.run(d->body);
          for (std::size_t i = 0; i < d->params.size(); ++i) body = subst(body, d->params[i], args[i]);
          for (std::size_t i = d->params.size(); i < args.size(); ++i) body = tm::app(body, args[i], t->pos);
          return go(body, bound);
        }
      }
    }
    if (t->kind == TermKind::Var) {
      if (bound.count(t->x1)) return t;
      if (env.find(t->x1)) return use(t->x1, t->pos);
      throw link_error("unknown variable '" + t->x1 + "'", t->pos);
    }
    auto n = std::make_shared<Term>(*t);
    TermP *slots[3] = {&n->a, &n->b, &n->c};
    for (int i = 0; i < 3; ++i) {
      auto bs = binders(*t, i);
      if (bs.empty()) {
        *slots[i] = go(*slots[i], bound);
      } else {
        auto inner = bound;
        inner.insert(bs.begin(), bs.end());
        *slots[i] = go(*slots[i], inner);
      }
    }
    return n;
  }
};

}  // namespace

Result<TermP> Environment::link(const TermP &t) const {
  try {
    Linker l{*this, linked_, {}, 0, &type_counter_};
    return l.go(t, {});
  } catch (const TypeError &e) {
    return e;
  }
}

Result<TermP> Environment::link_def(const std::string &name) const {
  const TermDef *d = find(name);
  if (!d) return link_error("unknown definition '" + name + "'");
  if (!d->params.empty()) return link_error("'" + name + "' is a macro");
  try {
    Linker l{*this, linked_, {}, 0, &type_counter_};
    return l.def_body(name, d->pos);
  } catch (const TypeError &e) {
    return e;
  }
}

Result<Environment> prelude_environment() {
  Environment env;
  for (auto &[stem, src] : prelude_sources()) {
    auto p = parse_program(src);
    if (!ok(p)) {
      TypeError e = error(p);
      e.message = "prelude/" + stem + ".ld: " + e.message;
      return e;
    }
    if (auto e = env.add(value(p))) {
      e->message = "prelude/" + stem + ".ld: " + e->message;
      return *e;
    }
  }
  return env;
}

std::vector<EntryReport> check_environment(const Environment &env) {
  std::vector<EntryReport> out;
  auto &fails = prelude_expected_failures();
  for (auto &name : env.def_order()) {
    const TermDef *d = env.find(name);
    if (!d->params.empty()) continue;
    EntryReport r;
    r.name = name;
    auto fit = fails.find(name);
    r.expect_failure = fit != fails.end();
    auto linked = env.link_def(name);
    if (!ok(linked)) {
      r.message = error(linked).str();
      out.push_back(r);
      continue;
    }
    CheckOptions opts;
    opts.expected = d->annotation;
    auto ty = check_term(env.types(), {}, desugar(value(linked)), opts);
    if (ok(ty)) {
      r.type = value(ty);
      r.ok = !r.expect_failure;
      if (r.expect_failure) r.message = "accepted at " + print(r.type) + " but expected a rejection";
    } else {
      r.message = error(ty).str();
      r.ok = r.expect_failure && error(ty).kind == fit->second;
    }
    out.push_back(r);
  }
  return out;
}

Result<Environment> load_prelude() {
  auto env = prelude_environment();
  if (!ok(env)) return env;
  for (auto &r : check_environment(value(env)))
    if (!r.ok) return TypeError{ErrorKind::TypeMismatch, "prelude entry '" + r.name + "': " + r.message, {}, {}, false};
  return env;
}

}  // namespace lambdad
