#pragma once

#include <cctype>
#include <cstddef>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "germkit/lipschitz.hpp"
#include "germkit/map_germ.hpp"
#include "germkit/polynomial.hpp"

namespace germkit {

// Expression grammar shared by polynomial and Lipschitz components:
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('+' | '-') unary | power
//   power   := primary ('^' INTEGER)?
//   primary := INTEGER | IDENT | IDENT '(' expr (',' expr)* ')' | '(' expr ')'
//
// Division is only by constant subexpressions. Function calls (abs, min, max)
// are only accepted in Lipschitz expressions.

namespace detail {

struct Token {
  enum Kind { number, ident, symbol, end } kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

inline std::vector<Token> tokenize(std::string_view text, std::size_t line, std::size_t column0) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    const std::size_t col = column0 + i;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      if (j < text.size() && (text[j] == '.' || text[j] == 'e' || text[j] == 'E')) {
        throw ParseError(line, column0 + j, "only integer and rational literals a/b are accepted");
      }
      out.push_back({Token::number, std::string(text.substr(i, j - i)), line, col});
      i = j;
    } else if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      out.push_back({Token::ident, std::string(text.substr(i, j - i)), line, col});
      i = j;
    } else if (std::string_view("+-*/^(),").find(c) != std::string_view::npos) {
      out.push_back({Token::symbol, std::string(1, c), line, col});
      ++i;
    } else {
      throw ParseError(line, col, std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({Token::end, "", line, column0 + text.size()});
  return out;
}

struct Syntax {
  enum Kind { number, variable, call, negate, add, sub, mul, div, pow } kind;
  Integer number_value;
  std::size_t var = 0;
  std::string name;
  std::vector<std::unique_ptr<Syntax>> args;
  std::size_t line = 0;
  std::size_t column = 0;
};

using SyntaxPtr = std::unique_ptr<Syntax>;

class Parser {
 public:
  Parser(std::vector<Token> tokens, const std::vector<std::string>& vars) : toks_(std::move(tokens)), vars_(vars) {}

  SyntaxPtr parse() {
    auto e = expr();
    if (peek().kind != Token::end) fail(peek(), "unexpected '" + peek().text + "'");
    return e;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }
  bool at_symbol(char c) const { return peek().kind == Token::symbol && peek().text[0] == c; }

  [[noreturn]] static void fail(const Token& t, const std::string& msg) { throw ParseError(t.line, t.column, msg); }

  static SyntaxPtr node(Syntax::Kind k, const Token& at) {
    auto s = std::make_unique<Syntax>();
    s->kind = k;
    s->line = at.line;
    s->column = at.column;
    return s;
  }

  static SyntaxPtr binary(Syntax::Kind k, const Token& at, SyntaxPtr a, SyntaxPtr b) {
    auto s = node(k, at);
    s->args.push_back(std::move(a));
    s->args.push_back(std::move(b));
    return s;
  }

  SyntaxPtr expr() {
    auto lhs = term();
    while (at_symbol('+') || at_symbol('-')) {
      const Token& op = next();
      lhs = binary(op.text[0] == '+' ? Syntax::add : Syntax::sub, op, std::move(lhs), term());
    }
    return lhs;
  }

  SyntaxPtr term() {
    auto lhs = unary();
    while (at_symbol('*') || at_symbol('/')) {
      const Token& op = next();
      lhs = binary(op.text[0] == '*' ? Syntax::mul : Syntax::div, op, std::move(lhs), unary());
    }
    return lhs;
  }

  SyntaxPtr unary() {
    if (at_symbol('+')) {
      next();
      return unary();
    }
    if (at_symbol('-')) {
      const Token& op = next();
      auto s = node(Syntax::negate, op);
      s->args.push_back(unary());
      return s;
    }
    return power();
  }

  SyntaxPtr power() {
    auto base = primary();
    if (at_symbol('^')) {
      const Token& op = next();
      const Token& e = peek();
      if (e.kind != Token::number) fail(e, "non-negative integer exponent required after '^'");
      next();
      if (e.text.size() > 6) fail(e, "exponent too large");
      auto s = node(Syntax::pow, op);
      s->args.push_back(std::move(base));
      s->number_value = Integer(e.text);
      return s;
    }
    return base;
  }

  SyntaxPtr primary() {
    const Token& t = peek();
    if (t.kind == Token::number) {
      next();
      auto s = node(Syntax::number, t);
      s->number_value = Integer(t.text);
      return s;
    }
    if (t.kind == Token::ident) {
      next();
      if (at_symbol('(')) {
        next();
        auto s = node(Syntax::call, t);
        s->name = t.text;
        s->args.push_back(expr());
        while (at_symbol(',')) {
          next();
          s->args.push_back(expr());
        }
        if (!at_symbol(')')) fail(peek(), "expected ')' to close call to " + t.text);
        next();
        return s;
      }
      for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (vars_[i] == t.text) {
          auto s = node(Syntax::variable, t);
          s->var = i;
          s->name = t.text;
          return s;
        }
      }
      fail(t, "unknown variable '" + t.text + "'");
    }
    if (at_symbol('(')) {
      next();
      auto e = expr();
      if (!at_symbol(')')) fail(peek(), "expected ')'");
      next();
      return e;
    }
    if (t.kind == Token::end) fail(t, "unexpected end of expression");
    fail(t, "unexpected '" + t.text + "'");
  }

  std::vector<Token> toks_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

inline Polynomial to_polynomial(const Syntax& s, std::size_t nvars) {
  auto err = [&](const std::string& msg) { return ParseError(s.line, s.column, msg); };
  switch (s.kind) {
    case Syntax::number: return Polynomial::constant(nvars, Rational(s.number_value));
    case Syntax::variable: return Polynomial::variable(nvars, s.var);
    case Syntax::call: throw err("function '" + s.name + "' is not allowed in a polynomial expression");
    case Syntax::negate: return -to_polynomial(*s.args[0], nvars);
    case Syntax::add: return to_polynomial(*s.args[0], nvars) + to_polynomial(*s.args[1], nvars);
    case Syntax::sub: return to_polynomial(*s.args[0], nvars) - to_polynomial(*s.args[1], nvars);
    case Syntax::mul: return to_polynomial(*s.args[0], nvars) * to_polynomial(*s.args[1], nvars);
    case Syntax::div: {
      Polynomial d = to_polynomial(*s.args[1], nvars);
      if (!d.is_constant()) throw err("division is only allowed by a constant");
      if (d.is_zero()) throw err("division by zero");
      return to_polynomial(*s.args[0], nvars) * Rational(1 / d.constant_term());
    }
    case Syntax::pow: return germkit::pow(to_polynomial(*s.args[0], nvars), s.number_value.get_ui());
  }
  throw err("unsupported syntax");
}

inline LipschitzExpr to_lipschitz(const Syntax& s) {
  auto err = [&](const std::string& msg) { return ParseError(s.line, s.column, msg); };
  switch (s.kind) {
    case Syntax::number: return LipschitzExpr::constant(Rational(s.number_value));
    case Syntax::variable: return LipschitzExpr::variable(s.var);
    case Syntax::call: {
      if (s.name == "abs") {
        if (s.args.size() != 1) throw err("abs takes one argument");
        return abs(to_lipschitz(*s.args[0]));
      }
      if (s.name == "min" || s.name == "max") {
        if (s.args.size() != 2) throw err(s.name + " takes two arguments");
        auto a = to_lipschitz(*s.args[0]);
        auto b = to_lipschitz(*s.args[1]);
        return s.name == "min" ? min(a, b) : max(a, b);
      }
      throw err("unknown function '" + s.name + "'");
    }
    case Syntax::negate: return -to_lipschitz(*s.args[0]);
    case Syntax::add: return to_lipschitz(*s.args[0]) + to_lipschitz(*s.args[1]);
    case Syntax::sub: return to_lipschitz(*s.args[0]) - to_lipschitz(*s.args[1]);
    case Syntax::mul: return to_lipschitz(*s.args[0]) * to_lipschitz(*s.args[1]);
    case Syntax::div: {
      auto d = to_lipschitz(*s.args[1]);
      if (!d.is_constant()) throw err("division is only allowed by a constant");
      const Rational dv = d.eval<Rational>({});
      if (dv == 0) throw err("division by zero");
      return to_lipschitz(*s.args[0]) * LipschitzExpr::constant(Rational(1 / dv));
    }
    case Syntax::pow: {
      const auto base = to_lipschitz(*s.args[0]);
      auto e = s.number_value.get_ui();
      LipschitzExpr r = LipschitzExpr::constant(1);
      if (e == 0) return r;
      r = base;
      for (unsigned long k = 1; k < e; ++k) r = r * base;
      return r;
    }
  }
  throw err("unsupported syntax");
}

}  // namespace detail

inline bool valid_identifier(std::string_view s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  }
  return true;
}

/// Default variable names: x, y, z for up to three variables, x1..xn beyond.
inline std::vector<std::string> default_var_names(std::size_t n) {
  std::vector<std::string> names;
  if (n <= 3) {
    const char* base[] = {"x", "y", "z"};
    for (std::size_t i = 0; i < n; ++i) names.emplace_back(base[i]);
  } else {
    for (std::size_t i = 0; i < n; ++i) names.push_back("x" + std::to_string(i + 1));
  }
  return names;
}

/// Parses an exact polynomial. `line` and `column` place errors inside a larger file.
inline Polynomial parse_polynomial(std::string_view text, const std::vector<std::string>& vars, std::size_t line = 1,
                                   std::size_t column = 1) {
  detail::Parser parser(detail::tokenize(text, line, column), vars);
  return detail::to_polynomial(*parser.parse(), vars.size());
}

inline LipschitzExpr parse_lipschitz(std::string_view text, const std::vector<std::string>& vars, std::size_t line = 1,
                                     std::size_t column = 1) {
  detail::Parser parser(detail::tokenize(text, line, column), vars);
  return detail::to_lipschitz(*parser.parse());
}

/// Canonical text form: terms by ascending degree, e.g. "x^4 - 2*x^2*y^3 + y^6".
inline std::string print_polynomial(const Polynomial& p, const std::vector<std::string>& vars) {
  if (vars.size() != p.nvars()) throw StructuralError("variable name count does not match polynomial");
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : p.terms()) {
    std::string mono;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (t.exponents[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += vars[i];
      if (t.exponents[i] > 1) mono += "^" + std::to_string(t.exponents[i]);
    }
    const bool negative = t.coefficient < 0;
    const Rational mag = abs(t.coefficient);
    std::string body;
    if (mono.empty()) {
      body = mag.get_str();
    } else if (mag == 1) {
      body = mono;
    } else {
      body = mag.get_str() + "*" + mono;
    }
    if (first) {
      out += negative ? "-" + body : body;
    } else {
      out += negative ? " - " + body : " + " + body;
    }
    first = false;
  }
  return out;
}

inline std::string print_polynomial(const Polynomial& p) { return print_polynomial(p, default_var_names(p.nvars())); }

enum class GermKind { polynomial_map, lipschitz_map };

/// Parsed germ file:
///
///   format 1
///   kind polynomial-map        # or lipschitz-map
///   vars x y
///   component x^4 + y^5
struct GermFile {
  std::vector<std::string> vars;
  GermKind kind = GermKind::polynomial_map;
  std::vector<std::string> sources;
  std::vector<Polynomial> polynomials;    // polynomial-map only
  std::vector<LipschitzExpr> expressions;  // both kinds

  MapGerm polynomial_map() const {
    if (kind != GermKind::polynomial_map) throw StructuralError("germ file is not a polynomial map");
    return MapGerm(vars.size(), polynomials);
  }

  LipschitzMap lipschitz_map() const { return LipschitzMap(vars.size(), expressions); }
};

inline GermFile parse_germ_file(std::string_view text) {
  GermFile file;
  bool have_format = false;
  bool have_vars = false;
  bool have_kind = false;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::size_t start = 0;
    while (start < line.size() && std::isspace(static_cast<unsigned char>(line[start]))) ++start;
    if (start == line.size()) continue;
    std::size_t kw_end = start;
    while (kw_end < line.size() && !std::isspace(static_cast<unsigned char>(line[kw_end]))) ++kw_end;
    const std::string keyword(line.substr(start, kw_end - start));
    std::size_t rest_start = kw_end;
    while (rest_start < line.size() && std::isspace(static_cast<unsigned char>(line[rest_start]))) ++rest_start;
    std::string_view rest = line.substr(rest_start);
    while (!rest.empty() && std::isspace(static_cast<unsigned char>(rest.back()))) rest.remove_suffix(1);
    const std::size_t col = start + 1;
    const std::size_t rest_col = rest_start + 1;

    if (!have_format) {
      if (keyword != "format") throw ParseError(line_no, col, "germ file must start with 'format 1'");
      if (rest != "1") throw ParseError(line_no, rest_col, "unsupported format version '" + std::string(rest) + "'");
      have_format = true;
    } else if (keyword == "format") {
      throw ParseError(line_no, col, "duplicate format line");
    } else if (keyword == "kind") {
      if (have_kind) throw ParseError(line_no, col, "duplicate kind line");
      if (!file.sources.empty()) throw ParseError(line_no, col, "kind must precede components");
      if (rest == "polynomial-map") {
        file.kind = GermKind::polynomial_map;
      } else if (rest == "lipschitz-map") {
        file.kind = GermKind::lipschitz_map;
      } else {
        throw ParseError(line_no, rest_col, "unknown kind '" + std::string(rest) + "'");
      }
      have_kind = true;
    } else if (keyword == "vars") {
      if (have_vars) throw ParseError(line_no, col, "duplicate vars line");
      std::istringstream names{std::string(rest)};
      std::string name;
      std::unordered_set<std::string> seen;
      while (names >> name) {
        if (!valid_identifier(name)) throw ParseError(line_no, rest_col, "invalid variable name '" + name + "'");
        if (name == "abs" || name == "min" || name == "max") {
          throw ParseError(line_no, rest_col, "reserved variable name '" + name + "'");
        }
        if (!seen.insert(name).second) throw ParseError(line_no, rest_col, "duplicate variable '" + name + "'");
        file.vars.push_back(name);
      }
      if (file.vars.empty()) throw ParseError(line_no, col, "vars line declares no variables");
      have_vars = true;
    } else if (keyword == "component") {
      if (!have_vars) throw ParseError(line_no, col, "component before vars");
      if (rest.empty()) throw ParseError(line_no, col, "empty component");
      const std::size_t index = file.sources.size() + 1;
      file.sources.emplace_back(rest);
      if (file.kind == GermKind::polynomial_map) {
        Polynomial p = parse_polynomial(rest, file.vars, line_no, rest_col);
        if (p.constant_term() != 0) {
          throw GermConditionError("not a germ at 0: component " + std::to_string(index) + " (line " +
                                   std::to_string(line_no) + ") has nonzero constant term");
        }
        file.expressions.push_back(LipschitzExpr::from_polynomial(p));
        file.polynomials.push_back(std::move(p));
      } else {
        LipschitzExpr e = parse_lipschitz(rest, file.vars, line_no, rest_col);
        const std::vector<Rational> origin(file.vars.size(), Rational(0));
        if (e.eval<Rational>(origin) != 0) {
          throw GermConditionError("not a germ at 0: component " + std::to_string(index) + " (line " +
                                   std::to_string(line_no) + ") does not vanish at the origin");
        }
        file.expressions.push_back(std::move(e));
      }
    } else {
      throw ParseError(line_no, col, "unknown directive '" + keyword + "'");
    }
  }
  if (!have_format) throw ParseError(line_no + 1, 1, "germ file must start with 'format 1'");
  if (!have_vars) throw ParseError(line_no + 1, 1, "missing vars line");
  if (file.sources.empty()) throw ParseError(line_no + 1, 1, "empty map: no components");
  return file;
}

/// Serializes a polynomial map germ back to the germ-file format.
inline std::string write_germ_file(const MapGerm& f, const std::vector<std::string>& vars) {
  std::string out = "format 1\nkind polynomial-map\nvars";
  for (const auto& v : vars) out += " " + v;
  out += "\n";
  for (const auto& c : f.components()) out += "component " + print_polynomial(c, vars) + "\n";
  return out;
}

}  // namespace germkit
