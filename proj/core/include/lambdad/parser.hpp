#pragma once

#include "lambdad/ast.hpp"
#include "lambdad/context.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lambdad {

struct TermDef {
  std::string name;
  TypeP annotation;                 // may be null
  std::vector<std::string> params;  // non-empty: syntactic macro
  TermP body;
  Pos pos;
};

struct Program {
  TypeDefs type_defs;
  std::vector<std::string> type_order;
  std::vector<TermDef> defs;
  std::optional<std::string> main;
};

bool program_eq(const Program &a, const Program &b);

// Parse errors are reported with ErrorKind::ParseError.
Result<Program> parse_program(const std::string &src);
Result<TermP> parse_term(const std::string &src);
Result<TypeP> parse_type(const std::string &src);
Result<ValueP> parse_value(const std::string &src);
Result<Mode> parse_mode(const std::string &src);

}  // namespace lambdad
