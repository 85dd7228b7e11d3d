#include <unordered_map>

#include "herglotz/expr.hpp"

namespace herglotz {

namespace {

class Differentiator {
 public:
  explicit Differentiator(CoordId var) : var_(var) {}

  Expr run(const Expr& e) {
    auto it = memo_.find(e.node());
    if (it != memo_.end()) return it->second;
    Expr d = compute(e);
    memo_.emplace(e.node(), d);
    return d;
  }

 private:
  Expr compute(const Expr& e) {
    using namespace ops;
    switch (e.op()) {
      case Op::constant:
      case Op::param:
        return constant(0.0);
      case Op::coord:
        return constant(e.coord() == var_ ? 1.0 : 0.0);
      case Op::neg:
        return neg(run(e.lhs()));
      case Op::add:
        return add(run(e.lhs()), run(e.rhs()));
      case Op::sub:
        return sub(run(e.lhs()), run(e.rhs()));
      case Op::mul: {
        const Expr a = e.lhs(), b = e.rhs();
        return add(mul(run(a), b), mul(a, run(b)));
      }
      case Op::div: {
        const Expr a = e.lhs(), b = e.rhs();
        const Expr da = run(a), db = run(b);
        if (db.is_constant(0.0)) return div(da, b);
        return div(sub(mul(da, b), mul(a, db)), pow(b, 2));
      }
      case Op::pow: {
        const Expr u = e.lhs();
        const int k = e.exponent();
        return mul(mul(constant(static_cast<double>(k)), run(u)), pow(u, k - 1));
      }
      default:
        break;
    }
    // chain rule: u' * f'(u)
    const Expr u = e.lhs();
    const Expr du = run(u);
    if (du.is_constant(0.0)) return constant(0.0);
    switch (e.op()) {
      case Op::sin:
        return mul(du, cos(u));
      case Op::cos:
        return neg(mul(du, sin(u)));
      case Op::exp:
        return mul(du, e);
      case Op::log:
        return div(du, u);
      case Op::sqrt:
        return div(du, mul(constant(2.0), e));
      case Op::tanh: {
        return mul(du, sub(constant(1.0), pow(e, 2)));
      }
      default:
        throw Error("differentiate: unsupported node");
    }
  }

  CoordId var_;
  std::unordered_map<const Node*, Expr> memo_;
};

}  // namespace

Expr differentiate(const Expr& e, CoordId var) { return Differentiator(var).run(e); }

}  // namespace herglotz
