// Recursive-descent parser for the expression grammar:
//
//   expr   := term (("+"|"-") term)* ;
//   term   := factor (("*"|"/") factor)* ;
//   factor := unary ("^" integer)? ;
//   unary  := "-" unary | atom ;
//   atom   := number | ident | func "(" expr ")" | "(" expr ")" ;
//
// Note that "-x^2" parses as (-x)^2 under this grammar.

#include <cctype>
#include <charconv>
#include <climits>

#include "herglotz/expr.hpp"

namespace herglotz {

namespace {

class Parser {
 public:
  Parser(const std::string& text, int n) : text_(text), n_(n) {}

  Expr parse_all() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("empty expression", pos_);
    Expr e = parse_expr();
    skip_ws();
    if (pos_ < text_.size()) throw ParseError(std::string("unexpected character '") + text_[pos_] + "'", pos_);
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  void expect(char c) {
    if (!peek(c)) {
      if (pos_ >= text_.size()) throw ParseError(std::string("expected '") + c + "' before end of input", pos_);
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
    ++pos_;
  }

  Expr parse_expr() {
    Expr lhs = parse_term();
    while (true) {
      skip_ws();
      if (peek('+') || peek('-')) {
        const long at = static_cast<long>(pos_);
        const Op op = text_[pos_] == '+' ? Op::add : Op::sub;
        ++pos_;
        Expr rhs = parse_term();
        lhs = Expr::raw_binary(op, lhs, rhs, at);
      } else {
        return lhs;
      }
    }
  }

  Expr parse_term() {
    Expr lhs = parse_factor();
    while (true) {
      if (peek('*') || peek('/')) {
        const long at = static_cast<long>(pos_);
        const Op op = text_[pos_] == '*' ? Op::mul : Op::div;
        ++pos_;
        Expr rhs = parse_factor();
        lhs = Expr::raw_binary(op, lhs, rhs, at);
      } else {
        return lhs;
      }
    }
  }

  Expr parse_factor() {
    Expr base = parse_unary();
    if (peek('^')) {
      const long at = static_cast<long>(pos_);
      ++pos_;
      skip_ws();
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) throw ParseError("expected integer exponent after '^'", start);
      int k = 0;
      auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, k);
      if (ec != std::errc()) throw ParseError("integer exponent out of range", start);
      return Expr::raw_pow(base, k, at);
    }
    return base;
  }

  Expr parse_unary() {
    if (peek('-')) {
      const long at = static_cast<long>(pos_);
      ++pos_;
      return Expr::raw_unary(Op::neg, parse_unary(), at);
    }
    return parse_atom();
  }

  Expr parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr inner = parse_expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t d = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
        ++d;
      }
      return d;
    };
    std::size_t mantissa = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) throw ParseError("malformed number", start);
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (digits() == 0) throw ParseError("malformed exponent in number", start);
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc() || ptr != text_.data() + pos_) throw ParseError("malformed number", start);
    return Expr::raw_constant(value, static_cast<long>(start));
  }

  Expr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string ident = text_.substr(start, pos_ - start);
    const long at = static_cast<long>(start);

    if (peek('(')) {
      Op f;
      if (ident == "sin") f = Op::sin;
      else if (ident == "cos") f = Op::cos;
      else if (ident == "exp") f = Op::exp;
      else if (ident == "log") f = Op::log;
      else if (ident == "sqrt") f = Op::sqrt;
      else if (ident == "tanh") f = Op::tanh;
      else throw ParseError("unknown function '" + ident + "'", start);
      ++pos_;
      Expr arg = parse_expr();
      expect(')');
      return Expr::raw_unary(f, arg, at);
    }

    if (ident == "z") return Expr::raw_coord(CoordId::z(), at);
    if ((ident[0] == 'q' || ident[0] == 'v') && ident.size() > 1) {
      bool all_digits = true;
      for (std::size_t i = 1; i < ident.size(); ++i)
        all_digits = all_digits && std::isdigit(static_cast<unsigned char>(ident[i]));
      if (all_digits) {
        int idx = 0;
        auto [ptr, ec] = std::from_chars(ident.data() + 1, ident.data() + ident.size(), idx);
        if (ec != std::errc() || idx < 1 || idx > n_)
          throw ParseError("coordinate index out of range: '" + ident + "' (dimension " + std::to_string(n_) + ")",
                           start);
        return Expr::raw_coord(ident[0] == 'q' ? CoordId::q(idx - 1) : CoordId::v(idx - 1), at);
      }
    }
    if (ident == "sin" || ident == "cos" || ident == "exp" || ident == "log" || ident == "sqrt" || ident == "tanh")
      throw ParseError("function '" + ident + "' requires an argument", start);
    return Expr::raw_param(ident, at);
  }

  const std::string& text_;
  int n_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(const std::string& text, int n) {
  if (n < 0) throw Error("parse: negative dimension");
  return Parser(text, n).parse_all();
}

}  // namespace herglotz
