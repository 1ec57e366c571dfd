// ldc: check, run, trace or desugar a program written against the prelude.

#include "lambdad/desugar.hpp"
#include "lambdad/harness.hpp"
#include "lambdad/machine.hpp"
#include "lambdad/parser.hpp"
#include "lambdad/prelude.hpp"
#include "lambdad/printer.hpp"
#include "lambdad/typecheck.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <utility>

using namespace lambdad;
using json = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kTypeError = 1, kParseError = 2, kStuck = 3, kFuel = 4, kVerify = 5 };

struct Config {
  std::string command;
  std::string file;
  std::uint64_t fuel = 1000000;
  bool from_prime_primitive = false;
  bool json = false;
  bool verify = false;
};

int report(const TypeError &e, const std::string &file) {
  std::cerr << file << ": " << e.str() << "\n";
  return e.kind == ErrorKind::ParseError ? kParseError : kTypeError;
}

bool is_named(const TypeP &t, const char *name) {
  return t->kind == TypeKind::Named && t->name == name && t->args.empty();
}

// Decoded rendering for Nat, Bool and List Nat; the canonical value otherwise.
std::string render(const TypeDefs &defs, const TypeP &type, const ValueP &v) {
  if (is_named(type, "Nat"))
    if (auto n = decode_nat(v)) return std::to_string(*n);
  if (is_named(type, "Bool"))
    if (auto b = decode_bool(v)) return *b ? "true" : "false";
  if (type_equiv(defs, type, ty::named("List", {ty::named("Nat")})))
    if (auto xs = decode_nat_list(v)) {
      std::string s = "[";
      for (std::size_t i = 0; i < xs->size(); ++i) s += (i ? ", " : "") + std::to_string((*xs)[i]);
      return s + "]";
    }
  return print(canonicalize(v));
}

int run_cli(const Config &cfg) {
  std::ifstream in(cfg.file);
  if (!in) {
    std::cerr << cfg.file << ": cannot open\n";
    return kParseError;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  auto prog = parse_program(ss.str());
  if (!ok(prog)) return report(error(prog), cfg.file);

  auto env = prelude_environment();
  if (!ok(env)) return report(error(env), "prelude");
  Environment e = value(env);
  if (auto err = e.add(value(prog))) return report(*err, cfg.file);

  std::string main_name;
  if (value(prog).main) {
    main_name = *value(prog).main;
  } else {
    for (auto &d : value(prog).defs)
      if (d.params.empty()) main_name = d.name;
  }
  if (main_name.empty()) {
    std::cerr << cfg.file << ": no main definition\n";
    return kTypeError;
  }
  const TermDef *main_def = e.find(main_name);
  if (!main_def) return report(TypeError{ErrorKind::UnknownVar, "main '" + main_name + "' is not defined", {}, {}, false}, cfg.file);
  auto linked = e.link_def(main_name);
  if (!ok(linked)) return report(error(linked), cfg.file);

  DesugarOptions dopts;
  dopts.from_prime_primitive = cfg.from_prime_primitive;
  TermP core = desugar(value(linked), dopts);

  if (cfg.command == "desugar") {
    std::cout << print(core) << "\n";
    return kOk;
  }

  CheckOptions copts;
  copts.expected = main_def->annotation;
  auto ty = check_term(e.types(), {}, core, copts);
  if (!ok(ty)) return report(error(ty), cfg.file);
  TypeP type = value(ty);
  if (cfg.command == "check") {
    std::cout << print(type) << "\n";
    return kOk;
  }

  bool record = cfg.command == "trace" || cfg.json || cfg.verify;
  RunResult r = run(initial(core), cfg.fuel, record);

  json verdicts;
  bool verify_ok = true;
  if (cfg.verify) {
    std::size_t coercions = 0;
    Verdict pres = check_preservation(e.types(), r.trace, type, &coercions);
    Verdict prog_det = check_progress_determinism(r.trace, r.outcome);
    Verdict bal = scan_balance(r.trace);
    auto to_json = [](const Verdict &v) {
      json j;
      j["ok"] = v.ok;
      j["failures"] = json::array();
      for (auto &f : v.failures) j["failures"].push_back({{"step", f.step}, {"description", f.description}});
      return j;
    };
    verdicts["preservation"] = to_json(pres);
    verdicts["progress_determinism"] = to_json(prog_det);
    verdicts["balance"] = to_json(bal);
    verdicts["coercions"] = coercions;
    verify_ok = pres.ok && prog_det.ok && bal.ok && coercions == 0;
  }

  std::string final_str;
  if (r.outcome == RunResult::Outcome::Finished) final_str = render(e.types(), type, r.value);

  if (cfg.json) {
    json j;
    j["program"] = cfg.file;
    j["type"] = print(type);
    j["steps"] = json::array();
    for (std::size_t i = 0; i < r.trace.steps.size(); ++i) {
      json s;
      s["i"] = i + 1;
      s["rule"] = r.trace.steps[i].rule;
      s["command"] = print(r.trace.steps[i].cmd);
      if (cfg.verify) s["type"] = print(type);
      j["steps"].push_back(std::move(s));
    }
    j["final"] = r.outcome == RunResult::Outcome::Finished ? json(final_str) : json(nullptr);
    if (cfg.verify) j["verdicts"] = verdicts;
    std::cout << j.dump() << "\n";
  } else {
    if (cfg.command == "trace")
      for (std::size_t i = 0; i < r.trace.steps.size(); ++i)
        std::cout << "step " << i + 1 << "  " << r.trace.steps[i].rule << "  " << print(r.trace.steps[i].cmd) << "\n";
    if (r.outcome == RunResult::Outcome::Finished) std::cout << final_str << "\n";
    if (cfg.verify && !verify_ok) std::cerr << "verification failed: " << verdicts.dump() << "\n";
  }

  switch (r.outcome) {
    case RunResult::Outcome::Stuck:
      std::cerr << cfg.file << ": stuck after " << r.steps << " steps: " << r.reason << "\n";
      return kStuck;
    case RunResult::Outcome::OutOfFuel:
      std::cerr << cfg.file << ": fuel exhausted after " << r.steps << " steps\n";
      return kFuel;
    case RunResult::Outcome::Finished:
      break;
  }
  return verify_ok ? kOk : kVerify;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"lambda-d: check, run, trace or desugar a program"};
  app.require_subcommand(1);
  Config cfg;
  const std::pair<const char *, const char *> subs[] = {
      {"check", "typecheck main and print its type"},
      {"run", "typecheck and evaluate main"},
      {"trace", "print every machine step of main"},
      {"desugar", "print main with sugar expanded"},
  };
  for (auto [name, help] : subs) {
    auto *sub = app.add_subcommand(name, help);
    sub->add_option("file", cfg.file, "program file")->required();
    sub->add_option("--fuel", cfg.fuel, "maximum number of steps")->check(CLI::PositiveNumber);
    sub->add_flag("--from-prime-primitive", cfg.from_prime_primitive, "keep from'* as a primitive");
    sub->add_flag("--json", cfg.json, "emit the trace as JSON");
    sub->add_flag("--verify", cfg.verify, "check preservation, progress and balance on the trace");
    sub->callback([&cfg, name] { cfg.command = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e) == 0 ? 0 : kParseError;
  }
  return run_cli(cfg);
}
