#pragma once

#include "lambdad/ast.hpp"

#include <map>
#include <string>
#include <variant>

namespace lambdad {

// Variable names and hole names live in separate namespaces.
struct Name {
  bool is_hole = false;
  std::string var;
  HoleName h = 0;

  static Name of_var(std::string x) { return Name{false, std::move(x), 0}; }
  static Name of_hole(HoleName h) { return Name{true, {}, h}; }
  bool operator<(const Name &o) const {
    if (is_hole != o.is_hole) return !is_hole;
    return is_hole ? h < o.h : var < o.var;
  }
  bool operator==(const Name &o) const {
    return is_hole == o.is_hole && (is_hole ? h == o.h : var == o.var);
  }
  std::string str() const;
};

enum class BindingKind : std::uint8_t { Var, Dest, Hole };

// Var:  x :m T
// Dest: ->h :m Dest[n] T   (ty holds T, n is the inner mode)
// Hole: []h :n T           (n is held in `n`, `m` unused)
struct Binding {
  BindingKind kind = BindingKind::Var;
  Mode m;
  TypeP ty;
  Mode n;

  static Binding var(Mode m, TypeP t) { return {BindingKind::Var, m, std::move(t), {}}; }
  static Binding dest(Mode m, TypeP t, Mode n) { return {BindingKind::Dest, m, std::move(t), n}; }
  static Binding hole(TypeP t, Mode n) { return {BindingKind::Hole, {}, std::move(t), n}; }
};

using TypingContext = std::map<Name, Binding>;

enum class ErrorKind : std::uint8_t {
  ParseError,
  UnknownVar,
  TypeMismatch,
  ModeNotAchievable,
  AgeEscape,
  HoleInTermContext,
  AmparRightNotUnitOrBang,
  DestInnerModeNot1nu,
  AddClash,
  NotInvertible,
  ArityOrFormError,
  DisjointnessViolation,
};

const char *error_kind_name(ErrorKind k);

struct TypeError {
  ErrorKind kind = ErrorKind::TypeMismatch;
  std::string message;
  Pos pos;
  // set for ModeNotAchievable / AgeEscape
  std::string name;
  bool age_escape = false;

  std::string str() const;
};

template <class T>
using Result = std::variant<T, TypeError>;

template <class T>
bool ok(const Result<T> &r) {
  return r.index() == 0;
}
template <class T>
const T &value(const Result<T> &r) {
  return std::get<0>(r);
}
template <class T>
const TypeError &error(const Result<T> &r) {
  return std::get<1>(r);
}

// Scales the outer mode of every binding; the inner mode of destination and
// hole bindings is part of the type and stays.
TypingContext ctx_scale(Mode n, const TypingContext &ctx);
Result<TypingContext> ctx_add(const TypingContext &a, const TypingContext &b);
// Turns destination bindings at 1nu into the matching hole bindings.
Result<TypingContext> hole_inverse(const TypingContext &delta);

}  // namespace lambdad
