#include "lambdad/context.hpp"

namespace lambdad {

std::string Name::str() const { return is_hole ? "h" + std::to_string(h) : var; }

const char *error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::UnknownVar: return "UnknownVar";
    case ErrorKind::TypeMismatch: return "TypeMismatch";
    case ErrorKind::ModeNotAchievable: return "ModeNotAchievable";
    case ErrorKind::AgeEscape: return "AgeEscape";
    case ErrorKind::HoleInTermContext: return "HoleInTermContext";
    case ErrorKind::AmparRightNotUnitOrBang: return "AmparRightNotUnitOrBang";
    case ErrorKind::DestInnerModeNot1nu: return "DestInnerModeNot1nu";
    case ErrorKind::AddClash: return "AddClash";
    case ErrorKind::NotInvertible: return "NotInvertible";
    case ErrorKind::ArityOrFormError: return "ArityOrFormError";
    case ErrorKind::DisjointnessViolation: return "DisjointnessViolation";
  }
  return "?";
}

std::string TypeError::str() const {
  std::string s = error_kind_name(kind);
  if (age_escape && kind != ErrorKind::AgeEscape) s += " (AgeEscape)";
  if (pos.line > 0) s += " at " + std::to_string(pos.line) + ":" + std::to_string(pos.col);
  if (!message.empty()) s += ": " + message;
  return s;
}

TypingContext ctx_scale(Mode n, const TypingContext &ctx) {
  TypingContext out = ctx;
  for (auto &[name, b] : out)
    if (b.kind == BindingKind::Hole)
      b.n = mode_times(n, b.n);
    else
      b.m = mode_times(n, b.m);
  return out;
}

Result<TypingContext> ctx_add(const TypingContext &a, const TypingContext &b) {
  TypingContext out = a;
  for (auto &[name, bb] : b) {
    auto it = out.find(name);
    if (it == out.end()) {
      out.emplace(name, bb);
      continue;
    }
    Binding &ba = it->second;
    auto clash = [&](const char *why) {
      return TypeError{ErrorKind::AddClash, name.str() + ": " + why, {}, name.str(), false};
    };
    if (ba.kind != bb.kind) return clash("hole and destination bindings for one name");
    if (!type_eq(*ba.ty, *bb.ty)) return clash("different types");
    if (ba.kind == BindingKind::Hole) {
      ba.n = mode_plus(ba.n, bb.n);
      continue;
    }
    if (ba.kind == BindingKind::Dest && ba.n != bb.n) return clash("different inner modes");
    ba.m = mode_plus(ba.m, bb.m);
  }
  return out;
}

Result<TypingContext> hole_inverse(const TypingContext &delta) {
  TypingContext out;
  for (auto &[name, b] : delta) {
    if (b.kind != BindingKind::Dest)
      return TypeError{ErrorKind::ArityOrFormError, name.str() + " is not a destination", {}, name.str(), false};
    if (b.m != m1nu())
      return TypeError{ErrorKind::NotInvertible, name.str() + " has mode " + to_string(b.m), {},
                       name.str(), false};
    out.emplace(name, Binding::hole(b.ty, b.n));
  }
  return out;
}

}  // namespace lambdad
