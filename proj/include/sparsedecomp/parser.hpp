#pragma once

// Text format for Laurent systems. One polynomial per line (or separated by
// ';'), an optional header line "vars: x, y, z", '#' starts a comment.
//
//   term    := [complex] ('*' var ('^' int)?)*     (the first factor may omit '*')
//   complex := float | '(' float ('+'|'-') float 'i' ')'
//
// Without a header, variables are numbered in order of first appearance.

#include "sparsedecomp/errors.hpp"
#include "sparsedecomp/polynomial.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace sparsedecomp {

namespace detail {

enum class Tok { Number, Ident, Plus, Minus, Star, Caret, LParen, RParen, Colon, Comma, Sep, End };

struct Token {
  Tok kind;
  std::string text;
  double value = 0.0;
  std::size_t line = 1;
  std::size_t column = 1;
};

inline const char* describe(Tok t) {
  switch (t) {
    case Tok::Number: return "number";
    case Tok::Ident: return "identifier";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Caret: return "'^'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Colon: return "':'";
    case Tok::Comma: return "','";
    case Tok::Sep: return "end of polynomial";
    case Tok::End: return "end of input";
  }
  return "token";
}

inline std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  int depth = 0;
  auto advance = [&](std::size_t k) {
    for (std::size_t s = 0; s < k; ++s) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < text.size()) {
    const char c = text[i];
    Token tok{Tok::End, {}, 0.0, line, col};
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (c == '\n' || c == ';') {
      if (depth > 0) throw ParseError(line, col, "unbalanced '(' before end of polynomial");
      tok.kind = Tok::Sep;
      out.push_back(tok);
      advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t j = i;
      while (j < text.size() && (std::isdigit(static_cast<unsigned char>(text[j])) || text[j] == '.')) ++j;
      if (j < text.size() && (text[j] == 'e' || text[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < text.size() && (text[k] == '+' || text[k] == '-')) ++k;
        if (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) {
          while (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) ++k;
          j = k;
        }
      }
      tok.kind = Tok::Number;
      tok.text = std::string(text.substr(i, j - i));
      char* end = nullptr;
      tok.value = std::strtod(tok.text.c_str(), &end);
      if (end != tok.text.c_str() + tok.text.size()) throw ParseError(line, col, "malformed number '" + tok.text + "'");
      out.push_back(tok);
      advance(j - i);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      tok.kind = Tok::Ident;
      tok.text = std::string(text.substr(i, j - i));
      out.push_back(tok);
      advance(j - i);
      continue;
    }
    switch (c) {
      case '+': tok.kind = Tok::Plus; break;
      case '-': tok.kind = Tok::Minus; break;
      case '*': tok.kind = Tok::Star; break;
      case '^': tok.kind = Tok::Caret; break;
      case '(': tok.kind = Tok::LParen; ++depth; break;
      case ')': tok.kind = Tok::RParen; --depth; break;
      case ':': tok.kind = Tok::Colon; break;
      case ',': tok.kind = Tok::Comma; break;
      default: throw ParseError(line, col, std::string("unexpected character '") + c + "'");
    }
    tok.text = std::string(1, c);
    out.push_back(tok);
    advance(1);
  }
  out.push_back({Tok::End, {}, 0.0, line, col});
  return out;
}

struct RawTerm {
  Complex coeff;
  std::map<std::size_t, std::int64_t> powers;  // variable index -> exponent
};

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(tokenize(text)) {}

  SparseSystem parse() {
    std::vector<std::vector<RawTerm>> polys;
    std::vector<std::pair<std::size_t, std::size_t>> where;
    while (true) {
      skip_separators();
      if (peek().kind == Tok::End) break;
      if (peek().kind == Tok::Ident && peek().text == "vars" && peek(1).kind == Tok::Colon) {
        if (declared_ || !polys.empty()) fail(peek(), "variable header must come first and only once");
        parse_header();
        continue;
      }
      where.emplace_back(peek().line, peek().column);
      polys.push_back(parse_polynomial());
      if (peek().kind != Tok::Sep && peek().kind != Tok::End)
        fail(peek(), std::string("expected '+', '-', '*' or end of polynomial, found ") + describe(peek().kind));
    }
    if (polys.empty()) fail(peek(), "expected at least one polynomial");

    const std::size_t n = names_.size();
    std::vector<SparsePolynomial> out;
    for (std::size_t p = 0; p < polys.size(); ++p) {
      std::vector<Term> terms;
      for (const auto& rt : polys[p]) {
        Exponent e(n, 0);
        for (const auto& [v, k] : rt.powers) e[v] += k;
        terms.push_back({rt.coeff, std::move(e)});
      }
      SparsePolynomial poly(n, terms);
      if (poly.empty())
        throw ParseError(where[p].first, where[p].second,
                         "polynomial " + std::to_string(p + 1) + " has no nonzero terms");
      out.push_back(std::move(poly));
    }
    if (out.size() != n)
      throw ParseError(peek().line, peek().column,
                       "system is not square: " + std::to_string(out.size()) + " polynomials in " +
                           std::to_string(n) + " variables");
    return SparseSystem(std::move(out), names_);
  }

 private:
  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  const Token& next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

  [[noreturn]] static void fail(const Token& t, const std::string& msg) { throw ParseError(t.line, t.column, msg); }

  const Token& expect(Tok kind, const char* context) {
    if (peek().kind != kind)
      fail(peek(), std::string("expected ") + describe(kind) + " " + context + ", found " + describe(peek().kind));
    return next();
  }

  void skip_separators() {
    while (peek().kind == Tok::Sep) next();
  }

  void parse_header() {
    next();
    next();
    while (true) {
      const Token& id = expect(Tok::Ident, "in variable list");
      if (index_.count(id.text)) fail(id, "variable '" + id.text + "' declared twice");
      index_[id.text] = names_.size();
      names_.push_back(id.text);
      if (peek().kind != Tok::Comma) break;
      next();
    }
    declared_ = true;
    if (peek().kind != Tok::Sep && peek().kind != Tok::End) fail(peek(), "expected ',' or end of line in variable list");
  }

  std::size_t variable(const Token& id) {
    auto it = index_.find(id.text);
    if (it != index_.end()) return it->second;
    if (declared_) fail(id, "unknown variable '" + id.text + "'");
    index_[id.text] = names_.size();
    names_.push_back(id.text);
    return names_.size() - 1;
  }

  std::vector<RawTerm> parse_polynomial() {
    std::vector<RawTerm> terms;
    double sign = 1.0;
    if (peek().kind == Tok::Plus || peek().kind == Tok::Minus) sign = next().kind == Tok::Minus ? -1.0 : 1.0;
    terms.push_back(parse_term(sign));
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      sign = next().kind == Tok::Minus ? -1.0 : 1.0;
      terms.push_back(parse_term(sign));
    }
    return terms;
  }

  double parse_signed_number(const char* context) {
    double s = 1.0;
    if (peek().kind == Tok::Plus || peek().kind == Tok::Minus) s = next().kind == Tok::Minus ? -1.0 : 1.0;
    return s * expect(Tok::Number, context).value;
  }

  bool at_imaginary_unit() const { return peek().kind == Tok::Ident && peek().text == "i"; }

  Complex parse_complex() {
    if (peek().kind == Tok::Number) return {next().value, 0.0};
    expect(Tok::LParen, "to open a coefficient");
    const double first = parse_signed_number("in coefficient");
    Complex c{first, 0.0};
    if (at_imaginary_unit()) {
      next();
      c = {0.0, first};
    } else if (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      const double s = next().kind == Tok::Minus ? -1.0 : 1.0;
      c.imag(s * expect(Tok::Number, "for the imaginary part").value);
      if (!at_imaginary_unit()) fail(peek(), "expected 'i' after the imaginary part");
      next();
    }
    expect(Tok::RParen, "to close a coefficient");
    return c;
  }

  void parse_factor(RawTerm& term) {
    const Token& id = expect(Tok::Ident, "(a variable)");
    const std::size_t v = variable(id);
    std::int64_t k = 1;
    if (peek().kind == Tok::Caret) {
      next();
      bool paren = false;
      if (peek().kind == Tok::LParen) {
        next();
        paren = true;
      }
      std::int64_t s = 1;
      if (peek().kind == Tok::Minus || peek().kind == Tok::Plus) s = next().kind == Tok::Minus ? -1 : 1;
      const Token& num = expect(Tok::Number, "as exponent");
      if (num.text.find_first_not_of("0123456789") != std::string::npos) fail(num, "exponent must be an integer");
      k = s * std::stoll(num.text);
      if (paren) expect(Tok::RParen, "after exponent");
    }
    term.powers[v] += k;
  }

  RawTerm parse_term(double sign) {
    RawTerm term{Complex(sign, 0.0), {}};
    if (peek().kind == Tok::Number || peek().kind == Tok::LParen) {
      term.coeff *= parse_complex();
    } else if (peek().kind == Tok::Ident) {
      parse_factor(term);
    } else {
      fail(peek(), std::string("expected a coefficient or variable, found ") + describe(peek().kind));
    }
    while (peek().kind == Tok::Star) {
      next();
      parse_factor(term);
    }
    return term;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<std::string> names_;
  std::map<std::string, std::size_t> index_;
  bool declared_ = false;
};

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

inline SparseSystem parse_system(std::string_view text) { return detail::Parser(text).parse(); }

// Inverse of parse_system; coefficients printed with 17 significant digits.
inline std::string format_system(const SparseSystem& system) {
  std::ostringstream os;
  const auto& names = system.variables();
  os << "vars: ";
  for (std::size_t i = 0; i < names.size(); ++i) os << (i ? ", " : "") << names[i];
  os << '\n';
  for (const auto& p : system.polynomials()) {
    bool first = true;
    for (const auto& t : p.terms()) {
      os << (first ? "" : " + ");
      first = false;
      const double im = t.coeff.imag();
      os << '(' << detail::format_double(t.coeff.real()) << (std::signbit(im) ? '-' : '+')
         << detail::format_double(std::abs(im)) << "i)";
      for (std::size_t v = 0; v < t.exponent.size(); ++v) {
        if (t.exponent[v] == 0) continue;
        os << '*' << names[v];
        if (t.exponent[v] != 1) os << '^' << t.exponent[v];
      }
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace sparsedecomp
