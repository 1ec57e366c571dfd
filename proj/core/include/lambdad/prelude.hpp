#pragma once

#include "lambdad/ast.hpp"
#include "lambdad/context.hpp"
#include "lambdad/parser.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace lambdad {

// (file stem, source text) of every embedded prelude file, sorted by stem.
const std::vector<std::pair<std::string, std::string>> &prelude_sources();

// Definitions expected to be rejected, with the error they must produce.
const std::map<std::string, ErrorKind> &prelude_expected_failures();

// Type definitions plus term definitions, resolved by inlining: a reference
// to a definition is replaced by its body, and a macro applied to at least
// as many arguments as it has parameters is expanded with fresh binders.
class Environment {
 public:
  const TypeDefs &types() const { return types_; }
  const std::vector<std::string> &def_order() const { return order_; }
  const TermDef *find(const std::string &name) const;

  // Adds the types and definitions of `p`; duplicate names are errors.
  std::optional<TypeError> add(const Program &p);

  // Closed surface term with every definition reference inlined.
  Result<TermP> link(const TermP &t) const;
  Result<TermP> link_def(const std::string &name) const;

 private:
  TypeDefs types_;
  std::map<std::string, TermDef> defs_;
  std::vector<std::string> order_;
  mutable std::map<std::string, TermP> linked_;
  mutable int type_counter_ = 0;
};

// Parses the embedded prelude into an environment, without checking.
Result<Environment> prelude_environment();

struct EntryReport {
  std::string name;
  bool expect_failure = false;
  bool ok = false;
  TypeP type;           // set when the entry typechecks
  std::string message;  // error or mismatch description
};

// Checks every non-macro definition at its annotation; entries listed in
// prelude_expected_failures() must fail with the listed error.
std::vector<EntryReport> check_environment(const Environment &env);

// prelude_environment() followed by check_environment(); any failing entry
// aborts with its name.
Result<Environment> load_prelude();

}  // namespace lambdad
