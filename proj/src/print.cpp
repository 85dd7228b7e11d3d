#include <charconv>
#include <cmath>

#include "herglotz/expr.hpp"

namespace herglotz {

namespace {

// Binding strength of the grammar levels.
enum Level { kSum = 1, kProduct = 2, kPower = 3, kUnary = 4, kAtom = 5 };

Level level_of(const Expr& e) {
  switch (e.op()) {
    case Op::add:
    case Op::sub:
      return kSum;
    case Op::mul:
    case Op::div:
      return kProduct;
    case Op::pow:
      return e.exponent() < 0 ? kProduct : kPower;
    case Op::neg:
      return kUnary;
    case Op::constant:
      return e.value() < 0.0 || std::signbit(e.value()) ? kUnary : kAtom;
    default:
      return kAtom;
  }
}

std::string number(double x) {
  if (!std::isfinite(x)) throw Error("cannot print non-finite constant");
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

void emit(const Expr& e, int min_level, std::string& out);

void emit_wrapped(const Expr& e, int min_level, std::string& out) {
  if (level_of(e) < min_level) {
    out += '(';
    emit(e, 0, out);
    out += ')';
  } else {
    emit(e, min_level, out);
  }
}

void emit(const Expr& e, int, std::string& out) {
  switch (e.op()) {
    case Op::constant:
      out += number(e.value());
      return;
    case Op::coord:
      out += e.coord().name();
      return;
    case Op::param:
      out += e.name();
      return;
    case Op::neg:
      out += '-';
      emit_wrapped(e.lhs(), kUnary, out);
      return;
    case Op::add:
    case Op::sub:
      emit_wrapped(e.lhs(), kSum, out);
      out += e.op() == Op::add ? " + " : " - ";
      emit_wrapped(e.rhs(), kProduct, out);
      return;
    case Op::mul:
    case Op::div:
      emit_wrapped(e.lhs(), kProduct, out);
      out += e.op() == Op::mul ? "*" : "/";
      emit_wrapped(e.rhs(), kPower, out);
      return;
    case Op::pow:
      if (e.exponent() < 0) {
        // not expressible in the grammar; print the reciprocal form
        out += "1/";
        out += '(';
        emit_wrapped(e.lhs(), kUnary, out);
        out += '^' + std::to_string(-e.exponent());
        out += ')';
        return;
      }
      emit_wrapped(e.lhs(), kUnary, out);
      out += '^';
      out += std::to_string(e.exponent());
      return;
    default:
      out += function_name(e.op());
      out += '(';
      emit(e.lhs(), 0, out);
      out += ')';
      return;
  }
}

}  // namespace

std::string to_string(const Expr& e) {
  std::string out;
  emit(e, 0, out);
  return out;
}

}  // namespace herglotz
