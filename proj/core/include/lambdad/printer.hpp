#pragma once

#include "lambdad/ast.hpp"
#include "lambdad/parser.hpp"

#include <string>

namespace lambdad {

// ASCII renderings that parse back to the same tree.
std::string print(const Mode &m);
std::string print(const TypeP &t);
std::string print(const TermP &t);
std::string print(const ValueP &v);
std::string print(const Program &p);

}  // namespace lambdad
