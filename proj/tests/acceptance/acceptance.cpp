// One line per acceptance criterion; exit status 1 if any fails.

#include "support.hpp"

#include "lambdad/desugar.hpp"
#include "lambdad/parser.hpp"
#include "lambdad/printer.hpp"
#include "lambdad/typecheck.hpp"

#include <chrono>
#include <cstdio>
#include <exception>
#include <functional>
#include <set>
#include <sstream>

using namespace lambdad;
using namespace lambdad::testing;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double x, int prec = 2) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(prec);
  os << x;
  return os.str();
}

// ------------------------------------------------------------------ A1

Outcome golden_trace() {
  auto t0 = Clock::now();
  Built b = build("def cons_example : List 1 = () :: Inl ()", "cons_example", true);
  RunResult r = run_built(b, true);
  double secs = seconds_since(t0);

  auto expected = parse_value("Inr ((), Inl ())");
  bool value_ok = ok(expected) && value_eq(*canonicalize(r.value), *value(expected));

  const std::vector<std::string> head = {"⋉FROM′F", "⋉UPDF", "⋉NEWC", "⋉UPDU", "⋉OP"};
  const std::vector<std::string> tail = {"⋉CL", "⋉FROM′U", "⋉FROM′C"};
  // Rule names compare case-insensitively on their ASCII letters.
  auto same = [](std::string a, std::string b) {
    for (auto &c : a) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    for (auto &c : b) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return a == b;
  };
  const auto &st = r.trace.steps;
  bool rules_ok = st.size() >= head.size() + tail.size();
  for (std::size_t i = 0; rules_ok && i < head.size(); ++i) rules_ok = same(st[i].rule, head[i]);
  for (std::size_t i = 0; rules_ok && i < tail.size(); ++i)
    rules_ok = same(st[st.size() - tail.size() + i].rule, tail[i]);

  // Names introduced by opening and filling, in order of appearance.
  std::vector<HoleName> minted;
  std::set<HoleName> seen;
  hnames(plug(r.trace.origin), seen);
  for (auto &s : st) {
    std::set<HoleName> now;
    hnames(plug(s.cmd), now);
    for (HoleName h : now)
      if (!seen.count(h) && s.rule != "⋉newC") minted.push_back(h);
    seen.insert(now.begin(), now.end());
  }
  std::vector<HoleName> first(minted.begin(), minted.begin() + std::min<std::size_t>(4, minted.size()));
  bool names_ok = first == std::vector<HoleName>{2, 4, 6, 7};

  std::string names;
  for (HoleName h : first) names += (names.empty() ? "" : ",") + std::to_string(h);
  return {value_ok && rules_ok && names_ok && secs < 1.0,
          "value " + print(canonicalize(r.value)) + ", " + std::to_string(st.size()) + " steps, rules " +
              (rules_ok ? "match" : "differ") + ", minted " + names + ", " + fmt(secs, 3) + " s"};
}

// ------------------------------------------------------------------ A2, A3, A10

struct SuiteReport {
  std::size_t programs = 0, steps = 0, coercions = 0;
  std::vector<std::string> preservation, progress, balance;
};

const SuiteReport &suite_report() {
  static const SuiteReport rep = [] {
    SuiteReport rep;
    for (auto &p : prelude_suite()) {
      Built b = build(p.source, p.main_def, p.from_prime_primitive);
      RunResult r = run(initial(b.term), 1000000, true);
      ++rep.programs;
      rep.steps += r.steps;
      std::size_t coercions = 0;
      Verdict pres = check_preservation(b.env.types(), r.trace, b.type, &coercions);
      rep.coercions += coercions;
      Verdict prog = check_progress_determinism(r.trace, r.outcome);
      Verdict bal = scan_balance(r.trace);
      auto note = [&](const Verdict &v, std::vector<std::string> &out) {
        if (!v.ok) out.push_back(p.label + "@" + std::to_string(v.failures.front().step) + ": " +
                                 v.failures.front().description);
      };
      note(pres, rep.preservation);
      note(prog, rep.progress);
      note(bal, rep.balance);
    }
    return rep;
  }();
  return rep;
}

Outcome preservation() {
  auto &r = suite_report();
  return {r.preservation.empty() && r.steps >= 500,
          std::to_string(r.programs) + " programs, " + std::to_string(r.steps) + " steps" +
              (r.preservation.empty() ? "" : ", first failure " + r.preservation.front())};
}

Outcome progress_determinism() {
  auto &r = suite_report();
  return {r.progress.empty(), std::to_string(r.steps) + " commands, " + std::to_string(r.progress.size()) +
                                  " failing programs" + (r.progress.empty() ? "" : ": " + r.progress.front())};
}

Outcome balance() {
  auto &r = suite_report();
  return {r.balance.empty() && r.coercions == 0,
          "balance " + std::string(r.balance.empty() ? "ok" : r.balance.front()) + ", coercions " +
              std::to_string(r.coercions)};
}

// ------------------------------------------------------------------ A4

Outcome scope_escape() {
  const Environment &env = prelude();
  std::string detail;
  bool pass = true;
  for (const char *name : {"scope_ok", "scope_escape2", "scope_escape3"}) {
    auto linked = env.link_def(name);
    if (!ok(linked)) return {false, std::string(name) + ": " + error(linked).str()};
    TermP t = desugar(value(linked));
    auto ty = check_term(env.types(), {}, t, {});
    bool oracle = oracle_declarative_check(env.types(), t, {}, 1u << 20);
    bool expect_ok = std::string(name) == "scope_ok";
    bool here = ok(ty) == expect_ok && oracle == expect_ok;
    if (!expect_ok) here = here && error(ty).kind == ErrorKind::AgeEscape;
    if (expect_ok && ok(ty)) {
      auto r = run(initial(t), 1000000, false);
      auto v = r.outcome == RunResult::Outcome::Finished ? decode_bool(r.value) : std::nullopt;
      here = here && v == std::optional<bool>(true);
    }
    pass = pass && here;
    detail += std::string(detail.empty() ? "" : ", ") + name + " " +
              (ok(ty) ? "accepted" : std::string("rejected (") + (error(ty).kind == ErrorKind::AgeEscape ? "AgeEscape" : "other") + ")") +
              " oracle " + (oracle ? "accepts" : "rejects");
  }
  return {pass, detail};
}

// ------------------------------------------------------------------ A5

// Step counts pinned by calibration; measurements must stay within 15%.
constexpr std::uint64_t kDlistSteps[] = {4424, 9240, 18584};
constexpr std::uint64_t kNaiveSteps[] = {13650, 47962, 176970};

Outcome complexity() {
  auto t0 = Clock::now();
  const int ks[] = {16, 32, 64};
  std::uint64_t dl[3], nv[3];
  bool pinned = true;
  for (int i = 0; i < 3; ++i) {
    dl[i] = run_built(build(dlist_concat_program(ks[i]), "joined"), false).steps;
    nv[i] = run_built(build(naive_append_program(ks[i]), "joined"), false).steps;
    auto near = [](std::uint64_t got, std::uint64_t want) {
      return got >= want * 85 / 100 && got <= want * 115 / 100;
    };
    pinned = pinned && near(dl[i], kDlistSteps[i]) && near(nv[i], kNaiveSteps[i]);
  }
  double secs = seconds_since(t0);
  bool pass = pinned && secs < 30.0;
  std::string detail;
  for (int i = 0; i < 2; ++i) {
    double rd = static_cast<double>(dl[i + 1]) / static_cast<double>(dl[i]);
    double rn = static_cast<double>(nv[i + 1]) / static_cast<double>(nv[i]);
    pass = pass && rd >= 1.8 && rd <= 2.3 && rn >= 3.2;
    detail += "k=" + std::to_string(ks[i]) + ": dlist " + fmt(rd) + " naive " + fmt(rn) + "; ";
  }
  return {pass, detail + (pinned ? "pinned counts ok" : "pinned counts drifted") + ", " + fmt(secs) + " s"};
}

// ------------------------------------------------------------------ A6

Outcome program_oracles() {
  std::mt19937_64 rng(kSeed);
  std::size_t bad_map = 0, bad_bfs = 0, bad_queue = 0;

  TermP map_succ = build("def f : List Nat -o List Nat = map succ", "f").term;
  for (int i = 0; i < 100; ++i) {
    auto xs = random_list(rng);
    auto r = run(initial(tm::app(map_succ, tm::val(encode_nat_list(xs)))), 1000000, false);
    auto got = r.outcome == RunResult::Outcome::Finished ? decode_nat_list(r.value) : std::nullopt;
    if (got != oracle_map_succ(xs)) ++bad_map;
  }

  TermP relabel = prelude_function("relabelDps");
  for (int i = 0; i < 50; ++i) {
    Tree t = random_tree(rng);
    auto r = run(initial(tm::app(relabel, tm::val(encode_tree(t, false)))), 1000000, false);
    auto got = r.outcome == RunResult::Outcome::Finished ? decode_tree(r.value, true) : std::nullopt;
    if (!got || !tree_eq(*got, oracle_level_order(t))) ++bad_bfs;
  }

  TermP queue = prelude_function("runQueue");
  for (int i = 0; i < 200; ++i) {
    auto ops = random_ops(rng);
    auto r = run(initial(tm::app(queue, tm::val(encode_ops(ops)))), 1000000, false);
    auto got = r.outcome == RunResult::Outcome::Finished ? decode_fifo(r.value) : std::nullopt;
    if (got != oracle_fifo(ops)) ++bad_queue;
  }

  return {bad_map + bad_bfs + bad_queue == 0, "mismatches: map " + std::to_string(bad_map) + "/100, relabel " +
                                                  std::to_string(bad_bfs) + "/50, queue " +
                                                  std::to_string(bad_queue) + "/200"};
}

// ------------------------------------------------------------------ A7

Outcome sharing() {
  Built b = build("def s : List Nat = sharing", "s");
  auto r = run_built(b, false);
  auto got = decode_nat_list(r.value);
  std::string shown = got ? "[" : print(r.value);
  if (got)
    for (std::size_t i = 0; i < got->size(); ++i) shown += (i ? ", " : "") + std::to_string((*got)[i]);
  if (got) shown += "]";
  return {got == std::vector<std::uint64_t>{0, 1, 0, 2}, shown};
}

// ------------------------------------------------------------------ A8

Outcome checker_vs_oracle() {
  auto t0 = Clock::now();
  std::size_t n = 0, accepted = 0, agree = 0, biggest = 0;
  std::string first_mismatch;
  for (auto &src : oracle_pool()) {
    auto t = parse_term(src);
    if (!ok(t)) return {false, "pool term does not parse: " + src};
    biggest = std::max(biggest, term_size(value(t)));
    ++n;
    bool c = ok(check_term({}, {}, value(t)));
    bool o = oracle_declarative_check({}, value(t), {}, 12);
    accepted += c;
    if (c == o)
      ++agree;
    else if (first_mismatch.empty())
      first_mismatch = src;
  }
  double secs = seconds_since(t0);
  return {n >= 200 && agree == n && biggest <= 12 && secs < 60.0,
          std::to_string(agree) + "/" + std::to_string(n) + " agree (" + std::to_string(accepted) +
              " accepted, largest " + std::to_string(biggest) + " nodes), " + fmt(secs) + " s" +
              (first_mismatch.empty() ? "" : ", first mismatch " + first_mismatch)};
}

// ------------------------------------------------------------------ A9

Outcome algebra_laws() {
  std::vector<Mode> universe;
  for (Mult p : {Mult::One, Mult::Many}) {
    for (std::uint32_t k = 0; k <= 8; ++k) universe.push_back(Mode{p, Age::fin(k)});
    universe.push_back(Mode{p, Age::infinite()});
  }
  std::mt19937_64 rng(kSeed);
  std::uniform_int_distribution<std::size_t> pick(0, universe.size() - 1);
  std::size_t failures = 0;
  std::string first;
  auto law = [&](bool holds, const char *name, Mode a, Mode b, Mode c) {
    if (holds) return;
    if (first.empty())
      first = std::string(name) + " at " + to_string(a) + " " + to_string(b) + " " + to_string(c);
    ++failures;
  };
  for (int i = 0; i < 10000; ++i) {
    Mode a = universe[pick(rng)], b = universe[pick(rng)], c = universe[pick(rng)];
    law(mode_plus(a, b) == mode_plus(b, a), "+ commutes", a, b, c);
    law(mode_plus(mode_plus(a, b), c) == mode_plus(a, mode_plus(b, c)), "+ associates", a, b, c);
    law(mode_times(mode_times(a, b), c) == mode_times(a, mode_times(b, c)), "* associates", a, b, c);
    law(mode_times(m1nu(), a) == a && mode_times(a, m1nu()) == a, "1nu is the unit", a, b, c);
    law(mode_times(a, mode_plus(b, c)) == mode_plus(mode_times(a, b), mode_times(a, c)), "distributivity", a, b, c);
    if (mode_leq(a, b)) {
      law(mode_leq(mode_times(c, a), mode_times(c, b)), "* preserves order", a, b, c);
      law(mode_leq(mode_plus(a, c), mode_plus(b, c)), "+ preserves order", a, b, c);
    }
  }
  return {failures == 0, "10000 triples, " + std::to_string(failures) + " violations" +
                             (first.empty() ? "" : ", first: " + first)};
}

}  // namespace

int main() {
  struct Criterion {
    const char *id;
    const char *title;
    std::function<Outcome()> run;
  };
  const Criterion all[] = {
      {"A1", "golden trace", golden_trace},
      {"A2", "preservation", preservation},
      {"A3", "progress and determinism", progress_determinism},
      {"A4", "scope escape", scope_escape},
      {"A5", "step-count growth", complexity},
      {"A6", "programs against native oracles", program_oracles},
      {"A7", "sharing", sharing},
      {"A8", "checker against declarative oracle", checker_vs_oracle},
      {"A9", "mode algebra laws", algebra_laws},
      {"A10", "balance and coercions", balance},
  };
  int failed = 0;
  for (auto &c : all) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception &e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%-4s %s  %s: %s\n", c.id, o.pass ? "PASS" : "FAIL", c.title, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
