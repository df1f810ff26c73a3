#pragma once

#include <gmpxx.h>

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>

#include "starext/errors.hpp"
#include "starext/scalar/exact_scalar.hpp"

namespace starext {

namespace detail {

enum class Tok { Int, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t column;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) { advance(); }
  const Token& peek() const { return current_; }
  Token take() {
    Token t = current_;
    advance();
    return t;
  }

 private:
  void advance();
  std::string_view src_;
  std::size_t pos_ = 0;
  Token current_{Tok::End, "", 0};
};

inline void Lexer::advance() {
  while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  std::size_t start = pos_;
  if (pos_ >= src_.size()) {
    current_ = {Tok::End, "", start};
    return;
  }
  auto rest = src_.substr(pos_);
  auto starts = [&](std::string_view s) { return rest.substr(0, s.size()) == s; };
  unsigned char c = static_cast<unsigned char>(src_[pos_]);
  if (std::isdigit(c)) {
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    current_ = {Tok::Int, std::string(src_.substr(start, pos_ - start)), start};
    return;
  }
  if (std::isalpha(c) || c == '_') {
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    current_ = {Tok::Ident, std::string(src_.substr(start, pos_ - start)), start};
    return;
  }
  // UTF-8 spellings used by the display printer.
  if (starts("\xC2\xB7")) {  // middle dot
    pos_ += 2;
    current_ = {Tok::Star, "*", start};
    return;
  }
  if (starts("\xE2\x88\x92")) {  // minus sign
    pos_ += 3;
    current_ = {Tok::Minus, "-", start};
    return;
  }
  if (starts("\xCE\xB4") || starts("\xCE\xBD")) {  // delta, nu
    pos_ += 2;
    current_ = {Tok::Ident, std::string(rest.substr(0, 2)), start};
    return;
  }
  ++pos_;
  switch (c) {
    case '+': current_ = {Tok::Plus, "+", start}; return;
    case '-': current_ = {Tok::Minus, "-", start}; return;
    case '*': current_ = {Tok::Star, "*", start}; return;
    case '/': current_ = {Tok::Slash, "/", start}; return;
    case '^': current_ = {Tok::Caret, "^", start}; return;
    case '(': current_ = {Tok::LParen, "(", start}; return;
    case ')': current_ = {Tok::RParen, ")", start}; return;
    default:
      throw ParseError(start, std::string("unexpected character '") + static_cast<char>(c) + "'");
  }
}

}  // namespace detail

/// Recursive-descent parser for
///   expr    := term (('+'|'-') term)*
///   term    := unary (('*'|'/') unary)*
///   unary   := ('+'|'-') unary | power
///   power   := primary ('^' ['-'] INT)?
///   primary := INT | IDENT | '(' expr ')'
/// The value semantics come from `Algebra` (scalars, δ-operators, ...).
template <class Algebra>
class ExprParser {
 public:
  using Value = typename Algebra::Value;

  ExprParser(std::string_view text, Algebra& algebra) : lex_(text), alg_(algebra) {}

  Value parse() {
    Value v = expr();
    if (lex_.peek().kind != detail::Tok::End) throw ParseError(lex_.peek().column, "unexpected '" + lex_.peek().text + "'");
    return v;
  }

 private:
  Value expr() {
    Value v = term();
    for (;;) {
      auto k = lex_.peek().kind;
      if (k == detail::Tok::Plus) {
        lex_.take();
        v = alg_.add(std::move(v), term());
      } else if (k == detail::Tok::Minus) {
        lex_.take();
        v = alg_.sub(std::move(v), term());
      } else {
        return v;
      }
    }
  }

  Value term() {
    Value v = unary();
    for (;;) {
      auto k = lex_.peek().kind;
      if (k == detail::Tok::Star) {
        lex_.take();
        v = alg_.mul(std::move(v), unary());
      } else if (k == detail::Tok::Slash) {
        auto col = lex_.take().column;
        v = alg_.div(std::move(v), unary(), col);
      } else {
        return v;
      }
    }
  }

  Value unary() {
    auto k = lex_.peek().kind;
    if (k == detail::Tok::Minus) {
      lex_.take();
      return alg_.neg(unary());
    }
    if (k == detail::Tok::Plus) {
      lex_.take();
      return unary();
    }
    return power();
  }

  Value power() {
    Value base = primary();
    if (lex_.peek().kind != detail::Tok::Caret) return base;
    auto col = lex_.take().column;
    bool negative = false;
    bool paren = false;
    if (lex_.peek().kind == detail::Tok::LParen) {
      lex_.take();
      paren = true;
    }
    if (lex_.peek().kind == detail::Tok::Minus) {
      lex_.take();
      negative = true;
    }
    if (lex_.peek().kind != detail::Tok::Int) throw ParseError(lex_.peek().column, "expected integer exponent");
    auto tok = lex_.take();
    if (tok.text.size() > 6) throw ParseError(tok.column, "exponent too large");
    long e = std::stol(tok.text);
    if (paren) expect(detail::Tok::RParen, "')'");
    return alg_.pow(std::move(base), negative ? -e : e, col);
  }

  Value primary() {
    const auto& t = lex_.peek();
    switch (t.kind) {
      case detail::Tok::Int: {
        auto tok = lex_.take();
        return alg_.number(mpz_class(tok.text));
      }
      case detail::Tok::Ident: {
        auto tok = lex_.take();
        return alg_.identifier(tok.text, tok.column);
      }
      case detail::Tok::LParen: {
        lex_.take();
        Value v = expr();
        expect(detail::Tok::RParen, "')'");
        return alg_.group(std::move(v));
      }
      case detail::Tok::End:
        throw ParseError(t.column, "unexpected end of input");
      default:
        throw ParseError(t.column, "unexpected '" + t.text + "'");
    }
  }

  void expect(detail::Tok kind, const char* what) {
    if (lex_.peek().kind != kind) throw ParseError(lex_.peek().column, std::string("expected ") + what);
    lex_.take();
  }

  detail::Lexer lex_;
  Algebra& alg_;
};

/// Parses a rational expression in chart variables (z1, zb1, ...), t-variables
/// and auxiliary names (only already-interned ones unless `intern_aux`).
ExactScalar parse_scalar(std::string_view text, bool intern_aux = false);
/// Like parse_scalar but requires a polynomial result.
Poly parse_poly(std::string_view text, bool intern_aux = false);

}  // namespace starext
