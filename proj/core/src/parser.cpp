#include "lambdad/parser.hpp"

#include <cctype>
#include <set>

namespace lambdad {

namespace {

enum class Tok : std::uint8_t { Ident, Num, Sym, HoleTok, DestTok, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::uint64_t num = 0;
  Pos pos;
};

const std::set<std::string> kKeywords = {"case", "of",  "upd", "with", "fix",  "type", "def",  "main",
                                         "Inl",  "Inr", "Mod", "Unit", "Pair", "Fun",  "Dest", "Nil",
                                         "Cons", "inf", "w"};

struct ParseFailure {
  std::string message;
  Pos pos;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '#';
}

std::vector<Token> lex(const std::string &s) {
  std::vector<Token> out;
  std::size_t i = 0;
  int line = 1, col = 1;
  auto adv = [&](std::size_t k) {
    for (std::size_t j = 0; j < k && i < s.size(); ++j, ++i) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto peek = [&](std::size_t k) { return i + k < s.size() ? s[i + k] : '\0'; };
  auto digits_at = [&](std::size_t k) { return std::isdigit(static_cast<unsigned char>(peek(k))) != 0; };
  auto read_num = [&](std::size_t from) {
    std::uint64_t n = 0;
    std::size_t k = from;
    while (digits_at(k)) n = n * 10 + static_cast<std::uint64_t>(peek(k++) - '0');
    return std::pair{n, k};
  };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      adv(1);
      continue;
    }
    if (c == '-' && peek(1) == '-') {
      while (i < s.size() && s[i] != '\n') adv(1);
      continue;
    }
    Token t;
    t.pos = {line, col};
    if (ident_start(c)) {
      std::size_t k = 0;
      while (ident_char(peek(k))) ++k;
      t.text = s.substr(i, k);
      if (peek(k) == '*' && (t.text == "new" || t.text == "to" || t.text == "from" || t.text == "from'")) {
        t.kind = Tok::Sym;
        t.text += "*";
        ++k;
      } else {
        t.kind = Tok::Ident;
      }
      adv(k);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      auto [n, k] = read_num(0);
      t.kind = Tok::Num;
      t.num = n;
      t.text = s.substr(i, k);
      adv(k);
    } else if (c == '[' && peek(1) == ']' && digits_at(2)) {
      auto [n, k] = read_num(2);
      t.kind = Tok::HoleTok;
      t.num = n;
      adv(k);
    } else if (c == '-' && peek(1) == '>' && digits_at(2)) {
      auto [n, k] = read_num(2);
      t.kind = Tok::DestTok;
      t.num = n;
      adv(k);
    } else {
      static const char *two[] = {"[]", "->", "-o", "<|", "<!", "<o", "::", "><"};
      t.kind = Tok::Sym;
      for (const char *p : two)
        if (c == p[0] && peek(1) == p[1]) t.text = p;
      if (t.text.empty()) {
        if (std::string("()[]{},;:=\\^*+!/@").find(c) == std::string::npos)
          throw ParseFailure{std::string("unexpected character '") + c + "'", t.pos};
        t.text = std::string(1, c);
      }
      adv(t.text.size());
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.pos = {line, col};
  out.push_back(end);
  return out;
}

class Parser {
 public:
  explicit Parser(const std::string &src) : toks_(lex(src)) {}

  bool at_end() const { return cur().kind == Tok::End; }
  void expect_end() {
    if (!at_end()) fail("unexpected '" + describe(cur()) + "'");
  }

  // ------------------------------------------------------------ modes
  Mode mode() {
    expect("[");
    Mode m;
    if (is_num(1)) {
      next();
      m.mult = Mult::One;
    } else if (is_kw("w")) {
      next();
      m.mult = Mult::Many;
    } else {
      fail("expected multiplicity 1 or w");
    }
    if (accept("^")) {
      if (cur().kind != Tok::Num) fail("expected age after ^");
      m.age = Age::fin(static_cast<std::uint32_t>(next().num));
    } else if (is_kw("inf")) {
      next();
      m.age = Age::infinite();
    } else {
      m.age = Age::fin(0);
    }
    expect("]");
    return m;
  }
  Mode opt_mode() { return is_sym("[") ? mode() : m1nu(); }

  // ------------------------------------------------------------ types
  TypeP type() {
    TypeP l = ampar_type();
    if (accept("-o")) {
      Mode m = opt_mode();
      return ty::arrow(l, m, type());
    }
    return l;
  }
  TypeP ampar_type() {
    TypeP l = sum_type();
    if (accept("><")) return ty::ampar(l, sum_type());
    return l;
  }
  TypeP sum_type() {
    TypeP l = prod_type();
    if (accept("+")) return ty::sum(l, sum_type());
    return l;
  }
  TypeP prod_type() {
    TypeP l = prefix_type();
    if (accept("*")) return ty::prod(l, prod_type());
    return l;
  }
  TypeP prefix_type() {
    if (is_kw("Dest")) {
      next();
      Mode n = opt_mode();
      return ty::dest(n, prefix_type());
    }
    if (accept("!")) {
      Mode m = mode();
      return ty::bang(m, prefix_type());
    }
    if (is_type_name()) {
      std::string name = next().text;
      std::vector<TypeP> args;
      while (starts_type_atom()) args.push_back(type_atom());
      return ty::named(name, std::move(args));
    }
    return type_atom();
  }
  bool is_type_name() const { return cur().kind == Tok::Ident && !kKeywords.count(cur().text); }
  bool starts_type_atom() const { return is_num(1) || is_sym("(") || is_type_name(); }
  TypeP type_atom() {
    if (is_num(1)) {
      next();
      return ty::unit();
    }
    if (accept("(")) {
      TypeP t = type();
      expect(")");
      return t;
    }
    if (is_type_name()) return ty::named(next().text);
    fail("expected a type");
  }

  // ------------------------------------------------------------ values
  ValueP value() {
    if (is_kw("Inl")) {
      next();
      return val::inl(value_atom());
    }
    if (is_kw("Inr")) {
      next();
      return val::inr(value_atom());
    }
    if (is_kw("Mod")) {
      next();
      Mode m = mode();
      return val::mod(m, value_atom());
    }
    return value_atom();
  }
  ValueP value_atom() {
    const Token &t = cur();
    if (t.kind == Tok::HoleTok) return val::hole(static_cast<HoleName>(next().num));
    if (t.kind == Tok::DestTok) return val::dest(static_cast<HoleName>(next().num));
    if (is_sym("{")) return ampar_value();
    if (accept("(")) {
      if (accept(")")) return val::unit();
      if (accept("\\")) {
        std::string x = ident();
        Mode m = opt_mode();
        expect("->");
        TermP body = term();
        expect(")");
        return val::lam(x, m, body);
      }
      ValueP a = value();
      if (accept(",")) {
        ValueP b = value();
        expect(")");
        return val::pair(a, b);
      }
      expect(")");
      return a;
    }
    fail("expected a value");
  }
  ValueP ampar_value() {
    expect("{");
    std::set<HoleName> hs;
    if (!is_sym("}")) {
      do {
        if (cur().kind != Tok::Num) fail("expected a hole name");
        hs.insert(static_cast<HoleName>(next().num));
      } while (accept(","));
    }
    expect("}");
    expect("/");
    ValueP l = value();
    expect(",");
    ValueP r = value();
    expect("/");
    return val::ampar(hs_from(hs), l, r);
  }

  // ------------------------------------------------------------ terms
  TermP term() {
    Pos p = cur().pos;
    TermP l = cons_term();
    if (accept(";")) return tm::seq(l, term(), p);
    return l;
  }
  TermP cons_term() {
    Pos p = cur().pos;
    TermP l = fill_term();
    if (accept("::")) return tm::cons_s(l, cons_term(), p);
    return l;
  }
  TermP fill_term() {
    Pos p = cur().pos;
    TermP t = app_term();
    for (;;) {
      if (accept("<|")) {
        t = fill_ctor(t, p);
      } else if (accept("<!")) {
        t = tm::fill_leaf(t, app_term(), p);
      } else if (accept("<o")) {
        t = tm::fill_comp(t, app_term(), p);
      } else {
        return t;
      }
    }
  }
  TermP fill_ctor(TermP d, Pos p) {
    if (!(cur().kind == Tok::Ident && kKeywords.count(cur().text))) fail("expected a fill constructor");
    std::string k = next().text;
    if (k == "Unit") return tm::fill_unit(d, p);
    if (k == "Inl") return tm::fill_inl(d, p);
    if (k == "Inr") return tm::fill_inr(d, p);
    if (k == "Pair") return tm::fill_pair(d, p);
    if (k == "Nil") return tm::fill_unit(tm::fill_inl(d, p), p);
    if (k == "Cons") return tm::fill_pair(tm::fill_inr(d, p), p);
    if (k == "Mod") {
      Mode m = mode();
      return tm::fill_bang(d, m, p);
    }
    if (k == "Fun") {
      std::string x = ident();
      Mode m = opt_mode();
      expect("->");
      return tm::fill_fun(d, x, m, term(), p);
    }
    fail("unknown fill constructor '" + k + "'");
  }
  TermP app_term() {
    Pos p = cur().pos;
    TermP t = head_term();
    while (starts_atom()) {
      bool binder = starts_binder();
      TermP arg = atom();
      t = tm::app(t, arg, p);
      if (binder && arg->kind != TermKind::CaseSum) break;
    }
    return t;
  }
  TermP head_term() {
    Pos p = cur().pos;
    if (is_kw("Inl")) {
      next();
      return tm::inl_s(atom(), p);
    }
    if (is_kw("Inr")) {
      next();
      return tm::inr_s(atom(), p);
    }
    if (is_kw("Mod")) {
      next();
      Mode m = mode();
      return tm::mod_s(m, atom(), p);
    }
    if (accept("to*")) return tm::to(atom(), p);
    if (accept("from*")) return tm::from(atom(), p);
    if (accept("from'*")) return tm::from_prime_s(atom(), p);
    return atom();
  }
  bool starts_binder() const { return is_sym("\\") || is_kw("case") || is_kw("upd") || is_kw("fix"); }
  bool starts_atom() const {
    const Token &t = cur();
    if (t.kind == Tok::Ident) return !kKeywords.count(t.text) || starts_binder();
    if (t.kind == Tok::Num || t.kind == Tok::HoleTok || t.kind == Tok::DestTok) return true;
    return is_sym("(") || is_sym("new*") || is_sym("[]") || is_sym("{") || is_sym("@") || is_sym("\\");
  }
  TermP atom() {
    Pos p = cur().pos;
    const Token &t = cur();
    if (t.kind == Tok::HoleTok || t.kind == Tok::DestTok || is_sym("{")) return tm::val(value_atom(), p);
    if (t.kind == Tok::Num) return tm::nat_s(next().num, p);
    if (accept("@")) return tm::val(value_atom(), p);
    if (accept("new*")) return tm::new_(nullptr, p);
    if (accept("[]")) return tm::nil_s(p);
    if (accept("\\")) {
      std::string x = ident();
      Mode m = opt_mode();
      expect("->");
      return tm::lam_s(x, m, term(), p);
    }
    if (is_kw("case")) return case_term();
    if (is_kw("upd")) {
      next();
      TermP s = term();
      expect_kw("with");
      std::string x = ident();
      expect("->");
      return tm::upd(s, x, term(), p);
    }
    if (is_kw("fix")) {
      next();
      std::string x = ident();
      expect(":");
      TypeP ty = type();
      expect("->");
      return tm::fix(x, ty, term(), p);
    }
    if (accept("(")) {
      if (accept(")")) return tm::unit_s(p);
      TermP a = term();
      if (accept(",")) {
        TermP b = term();
        expect(")");
        return tm::pair_s(a, b, p);
      }
      if (accept(":")) {
        TypeP ty = type();
        expect(")");
        return tm::ann(a, ty, p);
      }
      expect(")");
      return a;
    }
    if (t.kind == Tok::Ident && !kKeywords.count(t.text)) return tm::var(next().text, p);
    fail("expected a term, found '" + describe(t) + "'");
  }
  TermP case_term() {
    Pos p = cur().pos;
    next();
    Mode m = opt_mode();
    TermP s = term();
    expect_kw("of");
    if (accept("{")) {
      expect_kw("Inl");
      std::string x1 = ident();
      expect("->");
      TermP b1 = term();
      expect(",");
      expect_kw("Inr");
      std::string x2 = ident();
      expect("->");
      TermP b2 = term();
      expect("}");
      return tm::case_sum(m, s, x1, b1, x2, b2, p);
    }
    if (accept("(")) {
      std::string x1 = ident();
      expect(",");
      std::string x2 = ident();
      expect(")");
      expect("->");
      return tm::case_pair(m, s, x1, x2, term(), p);
    }
    expect_kw("Mod");
    Mode n = mode();
    std::string x = ident();
    expect("->");
    return tm::case_bang(m, s, n, x, term(), p);
  }

  // ------------------------------------------------------------ files
  Program program() {
    Program prog;
    std::set<std::string> names;
    while (!at_end()) {
      if (is_kw("type")) {
        Pos p = cur().pos;
        next();
        std::string name = ident();
        TypeDef d;
        while (cur().kind == Tok::Ident && !kKeywords.count(cur().text)) d.params.push_back(next().text);
        expect("=");
        d.body = type();
        if (prog.type_defs.count(name)) fail_at("duplicate type '" + name + "'", p);
        prog.type_defs.emplace(name, d);
        prog.type_order.push_back(name);
      } else if (is_kw("def")) {
        TermDef d;
        d.pos = cur().pos;
        next();
        d.name = ident();
        while (cur().kind == Tok::Ident && !kKeywords.count(cur().text)) d.params.push_back(next().text);
        if (accept(":")) d.annotation = type();
        expect("=");
        d.body = term();
        if (!names.insert(d.name).second) fail_at("duplicate definition '" + d.name + "'", d.pos);
        prog.defs.push_back(std::move(d));
      } else if (is_kw("main")) {
        next();
        expect("=");
        prog.main = ident();
      } else {
        fail("expected 'type', 'def' or 'main'");
      }
    }
    return prog;
  }

 private:
  const Token &cur() const { return toks_[i_]; }
  Token next() { return toks_[i_ < toks_.size() - 1 ? i_++ : i_]; }
  bool is_sym(const char *s) const { return cur().kind == Tok::Sym && cur().text == s; }
  bool is_kw(const char *s) const { return cur().kind == Tok::Ident && cur().text == s; }
  bool is_num(std::uint64_t n) const { return cur().kind == Tok::Num && cur().num == n; }
  bool accept(const char *s) {
    if (!is_sym(s)) return false;
    next();
    return true;
  }
  void expect(const char *s) {
    if (!accept(s)) fail(std::string("expected '") + s + "', found '" + describe(cur()) + "'");
  }
  void expect_kw(const char *s) {
    if (!is_kw(s)) fail(std::string("expected '") + s + "', found '" + describe(cur()) + "'");
    next();
  }
  std::string ident() {
    if (cur().kind != Tok::Ident || kKeywords.count(cur().text))
      fail("expected an identifier, found '" + describe(cur()) + "'");
    return next().text;
  }
  static std::string describe(const Token &t) {
    switch (t.kind) {
      case Tok::End: return "end of input";
      case Tok::HoleTok: return "[]" + std::to_string(t.num);
      case Tok::DestTok: return "->" + std::to_string(t.num);
      default: return t.text;
    }
  }
  [[noreturn]] void fail(const std::string &msg) const { throw ParseFailure{msg, cur().pos}; }
  [[noreturn]] static void fail_at(const std::string &msg, Pos p) { throw ParseFailure{msg, p}; }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

template <class T, class F>
Result<T> run(const std::string &src, F f) {
  try {
    Parser p(src);
    T out = f(p);
    p.expect_end();
    return out;
  } catch (const ParseFailure &e) {
    return TypeError{ErrorKind::ParseError, e.message, e.pos, {}, false};
  }
}

}  // namespace

Result<Program> parse_program(const std::string &src) {
  return run<Program>(src, [](Parser &p) { return p.program(); });
}
Result<TermP> parse_term(const std::string &src) {
  return run<TermP>(src, [](Parser &p) { return p.term(); });
}
Result<TypeP> parse_type(const std::string &src) {
  return run<TypeP>(src, [](Parser &p) { return p.type(); });
}
Result<ValueP> parse_value(const std::string &src) {
  return run<ValueP>(src, [](Parser &p) { return p.value(); });
}
Result<Mode> parse_mode(const std::string &src) {
  return run<Mode>(src, [](Parser &p) { return p.mode(); });
}

bool program_eq(const Program &a, const Program &b) {
  if (a.type_order != b.type_order || a.main != b.main || a.defs.size() != b.defs.size()) return false;
  for (auto &name : a.type_order) {
    auto &da = a.type_defs.at(name);
    auto &db = b.type_defs.at(name);
    if (da.params != db.params || !type_eq(*da.body, *db.body)) return false;
  }
  for (std::size_t i = 0; i < a.defs.size(); ++i) {
    auto &x = a.defs[i];
    auto &y = b.defs[i];
    if (x.name != y.name || x.params != y.params || !term_eq(*x.body, *y.body)) return false;
    if (bool(x.annotation) != bool(y.annotation)) return false;
    if (x.annotation && !type_eq(*x.annotation, *y.annotation)) return false;
  }
  return true;
}

}  // namespace lambdad
