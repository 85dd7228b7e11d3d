#include "herglotz/expr.hpp"

#include <cmath>
#include <functional>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace herglotz {

ParseError::ParseError(const std::string& message, std::size_t offset)
    : Error(message + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

UnboundParameter::UnboundParameter(const std::string& name)
    : Error("unbound parameter '" + name + "'") {}

int CoordId::flat(int n) const {
  switch (kind) {
    case CoordKind::q:
      return index;
    case CoordKind::v:
      return n + index;
    case CoordKind::z:
      return 2 * n;
  }
  return -1;
}

CoordId CoordId::from_flat(int flat_index, int n) {
  if (flat_index < n) return q(flat_index);
  if (flat_index < 2 * n) return v(flat_index - n);
  return z();
}

std::string CoordId::name() const {
  switch (kind) {
    case CoordKind::q:
      return "q" + std::to_string(index + 1);
    case CoordKind::v:
      return "v" + std::to_string(index + 1);
    case CoordKind::z:
      return "z";
  }
  return "?";
}

StatePoint::StatePoint(std::vector<double> q_, std::vector<double> v_, double z_)
    : q(std::move(q_)), v(std::move(v_)), z(z_) {
  if (q.size() != v.size()) throw Error("StatePoint: q and v must have equal length");
}

double StatePoint::coord(CoordId c) const {
  switch (c.kind) {
    case CoordKind::q:
      return q.at(c.index);
    case CoordKind::v:
      return v.at(c.index);
    case CoordKind::z:
      return z;
  }
  return 0.0;
}

Eigen::VectorXd StatePoint::flat() const {
  const int n = dim();
  Eigen::VectorXd x(2 * n + 1);
  for (int i = 0; i < n; ++i) {
    x[i] = q[i];
    x[n + i] = v[i];
  }
  x[2 * n] = z;
  return x;
}

StatePoint StatePoint::from_flat(const Eigen::VectorXd& x, int n) {
  StatePoint p;
  p.q.resize(n);
  p.v.resize(n);
  for (int i = 0; i < n; ++i) {
    p.q[i] = x[i];
    p.v[i] = x[n + i];
  }
  p.z = x[2 * n];
  return p;
}

ParamSet::ParamSet(std::initializer_list<std::pair<const std::string, double>> values) {
  for (const auto& [k, val] : values) bind(k, val);
}

void ParamSet::bind(const std::string& name, double value) {
  if (!std::isfinite(value)) throw Error("parameter '" + name + "' is not finite");
  if (!values_.emplace(name, value).second) throw Error("parameter '" + name + "' bound twice");
}

double ParamSet::get(const std::string& name) const {
  auto it = values_.find(name);
  if (it == values_.end()) throw UnboundParameter(name);
  return it->second;
}

ParamSet ParamSet::merged(const ParamSet& a, const ParamSet& b) {
  ParamSet out = a;
  for (const auto& [k, val] : b.values_) {
    auto it = out.values_.find(k);
    if (it == out.values_.end()) {
      out.values_.emplace(k, val);
    } else if (it->second != val) {
      throw Error("parameter '" + k + "' bound to conflicting values");
    }
  }
  return out;
}

bool is_function(Op op) {
  switch (op) {
    case Op::sin:
    case Op::cos:
    case Op::exp:
    case Op::log:
    case Op::sqrt:
    case Op::tanh:
      return true;
    default:
      return false;
  }
}

const char* function_name(Op op) {
  switch (op) {
    case Op::sin:
      return "sin";
    case Op::cos:
      return "cos";
    case Op::exp:
      return "exp";
    case Op::log:
      return "log";
    case Op::sqrt:
      return "sqrt";
    case Op::tanh:
      return "tanh";
    default:
      return "";
  }
}

namespace {

std::shared_ptr<const Node> zero_node() {
  static const auto zero = std::make_shared<const Node>();
  return zero;
}

}  // namespace

Expr::Expr() : node_(zero_node()) {}

Expr::Expr(double value) : Expr(raw_constant(value)) {}

Op Expr::op() const { return node_->op; }
double Expr::value() const { return node_->value; }
CoordId Expr::coord() const { return node_->coord; }
const std::string& Expr::name() const { return node_->name; }
int Expr::exponent() const { return node_->exponent; }
Expr Expr::lhs() const { return Expr(node_->a); }
Expr Expr::rhs() const { return Expr(node_->b); }
long Expr::offset() const { return node_->offset; }

Expr Expr::raw_constant(double value, long offset) {
  auto n = std::make_shared<Node>();
  n->op = Op::constant;
  n->value = value;
  n->offset = offset;
  return Expr(std::move(n));
}

Expr Expr::raw_coord(CoordId c, long offset) {
  auto n = std::make_shared<Node>();
  n->op = Op::coord;
  n->coord = c;
  n->offset = offset;
  return Expr(std::move(n));
}

Expr Expr::raw_param(std::string name, long offset) {
  auto n = std::make_shared<Node>();
  n->op = Op::param;
  n->name = std::move(name);
  n->offset = offset;
  return Expr(std::move(n));
}

Expr Expr::raw_unary(Op op, Expr operand, long offset) {
  if (op != Op::neg && !is_function(op)) throw Error("raw_unary: not a unary operation");
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = operand.node_;
  n->offset = offset;
  return Expr(std::move(n));
}

Expr Expr::raw_binary(Op op, Expr lhs, Expr rhs, long offset) {
  if (op != Op::add && op != Op::sub && op != Op::mul && op != Op::div)
    throw Error("raw_binary: not a binary operation");
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = lhs.node_;
  n->b = rhs.node_;
  n->offset = offset;
  return Expr(std::move(n));
}

Expr Expr::raw_pow(Expr base, int exponent, long offset) {
  auto n = std::make_shared<Node>();
  n->op = Op::pow;
  n->a = base.node_;
  n->exponent = exponent;
  n->offset = offset;
  return Expr(std::move(n));
}

namespace {

double apply_unary(Op op, double x) {
  switch (op) {
    case Op::neg:
      return -x;
    case Op::sin:
      return std::sin(x);
    case Op::cos:
      return std::cos(x);
    case Op::exp:
      return std::exp(x);
    case Op::log:
      return std::log(x);
    case Op::sqrt:
      return std::sqrt(x);
    case Op::tanh:
      return std::tanh(x);
    default:
      return x;
  }
}

double int_pow(double x, int k) {
  if (k < 0) return 1.0 / int_pow(x, -k);
  double result = 1.0;
  double base = x;
  while (k > 0) {
    if (k & 1) result *= base;
    base *= base;
    k >>= 1;
  }
  return result;
}

}  // namespace

namespace ops {

Expr constant(double value) { return Expr::raw_constant(value); }
Expr coord(CoordId c) { return Expr::raw_coord(c); }
Expr q(int i) { return coord(CoordId::q(i)); }
Expr v(int i) { return coord(CoordId::v(i)); }
Expr z() { return coord(CoordId::z()); }
Expr param(const std::string& name) { return Expr::raw_param(name); }

Expr neg(const Expr& a) {
  if (a.is_constant()) return constant(-a.value());
  if (a.op() == Op::neg) return a.lhs();
  return Expr::raw_unary(Op::neg, a);
}

Expr add(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return constant(a.value() + b.value());
  if (a.is_constant(0.0)) return b;
  if (b.is_constant(0.0)) return a;
  if (b.op() == Op::neg) return sub(a, b.lhs());
  return Expr::raw_binary(Op::add, a, b);
}

Expr sub(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return constant(a.value() - b.value());
  if (b.is_constant(0.0)) return a;
  if (a.is_constant(0.0)) return neg(b);
  if (b.op() == Op::neg) return add(a, b.lhs());
  return Expr::raw_binary(Op::sub, a, b);
}

Expr mul(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return constant(a.value() * b.value());
  if (a.is_constant(0.0) || b.is_constant(0.0)) return constant(0.0);
  if (a.is_constant(1.0)) return b;
  if (b.is_constant(1.0)) return a;
  if (a.is_constant(-1.0)) return neg(b);
  if (b.is_constant(-1.0)) return neg(a);
  if (b.is_constant() && !a.is_constant()) return mul(b, a);
  if (a.is_constant() && b.op() == Op::mul && b.lhs().is_constant())
    return mul(constant(a.value() * b.lhs().value()), b.rhs());
  if (a.op() == Op::neg && b.op() == Op::neg) return mul(a.lhs(), b.lhs());
  if (a.op() == Op::neg) return neg(mul(a.lhs(), b));
  if (b.op() == Op::neg) return neg(mul(a, b.lhs()));
  return Expr::raw_binary(Op::mul, a, b);
}

Expr div(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant() && b.value() != 0.0) return constant(a.value() / b.value());
  if (a.is_constant(0.0) && !(b.is_constant(0.0))) return constant(0.0);
  if (b.is_constant(1.0)) return a;
  if (b.is_constant(-1.0)) return neg(a);
  return Expr::raw_binary(Op::div, a, b);
}

Expr pow(const Expr& a, int k) {
  if (k == 0) return constant(1.0);
  if (k == 1) return a;
  if (a.is_constant()) return constant(int_pow(a.value(), k));
  if (k < 0) return div(constant(1.0), pow(a, -k));
  return Expr::raw_pow(a, k);
}

Expr unary(Op f, const Expr& a) {
  if (f == Op::neg) return neg(a);
  if (a.is_constant()) {
    const double r = apply_unary(f, a.value());
    if (std::isfinite(r) && !(f == Op::log && a.value() <= 0.0) && !(f == Op::sqrt && a.value() < 0.0))
      return constant(r);
  }
  return Expr::raw_unary(f, a);
}

Expr sin(const Expr& a) { return unary(Op::sin, a); }
Expr cos(const Expr& a) { return unary(Op::cos, a); }
Expr exp(const Expr& a) { return unary(Op::exp, a); }
Expr log(const Expr& a) { return unary(Op::log, a); }
Expr sqrt(const Expr& a) { return unary(Op::sqrt, a); }
Expr tanh(const Expr& a) { return unary(Op::tanh, a); }

Expr sum(const std::vector<Expr>& terms) {
  Expr acc = constant(0.0);
  for (const auto& t : terms) acc = add(acc, t);
  return acc;
}

}  // namespace ops

Expr operator+(const Expr& a, const Expr& b) { return ops::add(a, b); }
Expr operator-(const Expr& a, const Expr& b) { return ops::sub(a, b); }
Expr operator*(const Expr& a, const Expr& b) { return ops::mul(a, b); }
Expr operator/(const Expr& a, const Expr& b) { return ops::div(a, b); }
Expr operator-(const Expr& a) { return ops::neg(a); }
Expr operator*(double a, const Expr& b) { return ops::mul(ops::constant(a), b); }

namespace {

std::string describe(const Expr& e) {
  std::string text;
  try {
    text = to_string(e);
  } catch (const Error&) {
    text = "<unprintable>";
  }
  if (text.size() > 80) text = text.substr(0, 77) + "...";
  std::string where = e.offset() >= 0 ? " at byte " + std::to_string(e.offset()) : "";
  return "'" + text + "'" + where;
}

class Evaluator {
 public:
  Evaluator(const StatePoint& p, const ParamSet& params) : p_(p), params_(params) {}

  double run(const Expr& e) {
    const Node* key = e.node();
    const bool interior = e.op() != Op::constant && e.op() != Op::coord && e.op() != Op::param;
    if (interior) {
      auto it = memo_.find(key);
      if (it != memo_.end()) return it->second;
    }
    const double r = compute(e);
    if (interior) memo_.emplace(key, r);
    return r;
  }

 private:
  double compute(const Expr& e) {
    switch (e.op()) {
      case Op::constant:
        return e.value();
      case Op::coord: {
        const CoordId c = e.coord();
        if (c.kind != CoordKind::z && c.index >= p_.dim())
          throw Error("coordinate " + c.name() + " out of range for a point of dimension " +
                      std::to_string(p_.dim()));
        return p_.coord(c);
      }
      case Op::param:
        return params_.get(e.name());
      case Op::neg:
        return -run(e.lhs());
      case Op::log: {
        const double x = run(e.lhs());
        if (!(x > 0.0)) throw DomainError("log of non-positive value " + fmt(x) + " in " + describe(e));
        return std::log(x);
      }
      case Op::sqrt: {
        const double x = run(e.lhs());
        if (x < 0.0) throw DomainError("sqrt of negative value " + fmt(x) + " in " + describe(e));
        return std::sqrt(x);
      }
      case Op::sin:
      case Op::cos:
      case Op::exp:
      case Op::tanh:
        return checked(apply_unary(e.op(), run(e.lhs())), e);
      case Op::add:
        return run(e.lhs()) + run(e.rhs());
      case Op::sub:
        return run(e.lhs()) - run(e.rhs());
      case Op::mul:
        return run(e.lhs()) * run(e.rhs());
      case Op::div: {
        const double num = run(e.lhs());
        const double den = run(e.rhs());
        if (den == 0.0) throw DomainError("division by zero in " + describe(e));
        return num / den;
      }
      case Op::pow: {
        const double base = run(e.lhs());
        if (base == 0.0 && e.exponent() < 0) throw DomainError("division by zero in " + describe(e));
        return int_pow(base, e.exponent());
      }
    }
    return 0.0;
  }

  static std::string fmt(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
  }

  static double checked(double r, const Expr& e) {
    if (!std::isfinite(r)) throw DomainError("non-finite result in " + describe(e));
    return r;
  }

  const StatePoint& p_;
  const ParamSet& params_;
  std::unordered_map<const Node*, double> memo_;
};

template <typename F>
void visit_unique(const Expr& root, F&& f) {
  std::unordered_set<const Node*> seen;
  std::vector<Expr> stack{root};
  while (!stack.empty()) {
    Expr e = stack.back();
    stack.pop_back();
    if (!seen.insert(e.node()).second) continue;
    f(e);
    switch (e.op()) {
      case Op::constant:
      case Op::coord:
      case Op::param:
        break;
      case Op::add:
      case Op::sub:
      case Op::mul:
      case Op::div:
        stack.push_back(e.lhs());
        stack.push_back(e.rhs());
        break;
      default:
        stack.push_back(e.lhs());
        break;
    }
  }
}

}  // namespace

double eval(const Expr& e, const StatePoint& p, const ParamSet& params) {
  Evaluator ev(p, params);
  return ev.run(e);
}

Expr substitute(const Expr& e, const std::string& name, const Expr& replacement) {
  std::unordered_map<const Node*, Expr> memo;
  std::function<Expr(const Expr&)> rec = [&](const Expr& x) -> Expr {
    auto it = memo.find(x.node());
    if (it != memo.end()) return it->second;
    Expr r;
    switch (x.op()) {
      case Op::constant:
      case Op::coord:
        r = x;
        break;
      case Op::param:
        r = x.name() == name ? replacement : x;
        break;
      case Op::add:
      case Op::sub:
      case Op::mul:
      case Op::div:
        r = Expr::raw_binary(x.op(), rec(x.lhs()), rec(x.rhs()), x.offset());
        break;
      case Op::pow:
        r = Expr::raw_pow(rec(x.lhs()), x.exponent(), x.offset());
        break;
      default:
        r = Expr::raw_unary(x.op(), rec(x.lhs()), x.offset());
        break;
    }
    memo.emplace(x.node(), r);
    return r;
  };
  return rec(e);
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.node() == b.node()) return true;
  if (a.op() != b.op()) return false;
  switch (a.op()) {
    case Op::constant:
      return a.value() == b.value();
    case Op::coord:
      return a.coord() == b.coord();
    case Op::param:
      return a.name() == b.name();
    case Op::pow:
      return a.exponent() == b.exponent() && structurally_equal(a.lhs(), b.lhs());
    case Op::add:
    case Op::sub:
    case Op::mul:
    case Op::div:
      return structurally_equal(a.lhs(), b.lhs()) && structurally_equal(a.rhs(), b.rhs());
    default:
      return structurally_equal(a.lhs(), b.lhs());
  }
}

bool depends_on(const Expr& e, CoordId c) {
  bool found = false;
  visit_unique(e, [&](const Expr& x) {
    if (x.op() == Op::coord && x.coord() == c) found = true;
  });
  return found;
}

bool depends_on_param(const Expr& e, const std::string& name) {
  bool found = false;
  visit_unique(e, [&](const Expr& x) {
    if (x.op() == Op::param && x.name() == name) found = true;
  });
  return found;
}

int max_index(const Expr& e) {
  int m = 0;
  visit_unique(e, [&](const Expr& x) {
    if (x.op() == Op::coord && x.coord().kind != CoordKind::z) m = std::max(m, x.coord().index + 1);
  });
  return m;
}

std::vector<std::string> parameter_names(const Expr& e) {
  std::set<std::string> names;
  visit_unique(e, [&](const Expr& x) {
    if (x.op() == Op::param) names.insert(x.name());
  });
  return {names.begin(), names.end()};
}

std::size_t node_count(const Expr& e) {
  std::size_t count = 0;
  visit_unique(e, [&](const Expr&) { ++count; });
  return count;
}

std::vector<Expr> gradient(const Expr& e, int n) {
  std::vector<Expr> g;
  g.reserve(2 * n + 1);
  for (int a = 0; a < 2 * n + 1; ++a) g.push_back(differentiate(e, CoordId::from_flat(a, n)));
  return g;
}

ExprJet::ExprJet(Expr e, int n) : n_(n), value_(std::move(e)) {
  const int m = 2 * n + 1;
  first_ = gradient(value_, n);
  second_.reserve(m * (m + 1) / 2);
  for (int a = 0; a < m; ++a)
    for (int b = a; b < m; ++b) second_.push_back(differentiate(first_[a], CoordId::from_flat(b, n)));
}

const Expr& ExprJet::second(int a, int b) const {
  if (a > b) std::swap(a, b);
  const int m = 2 * n_ + 1;
  // row a of the upper triangle starts after sum_{r<a} (m - r) entries
  const int start = a * m - a * (a - 1) / 2;
  return second_[start + (b - a)];
}

Jet2 ExprJet::eval(const StatePoint& p, const ParamSet& params) const {
  const int m = 2 * n_ + 1;
  Jet2 jet;
  jet.value = herglotz::eval(value_, p, params);
  jet.gradient.resize(m);
  jet.hessian.resize(m, m);
  for (int a = 0; a < m; ++a) jet.gradient[a] = herglotz::eval(first_[a], p, params);
  for (int a = 0; a < m; ++a) {
    for (int b = a; b < m; ++b) {
      const double h = herglotz::eval(second(a, b), p, params);
      jet.hessian(a, b) = h;
      jet.hessian(b, a) = h;
    }
  }
  return jet;
}

Jet2 eval_jet2(const Expr& e, const StatePoint& p, const ParamSet& params) {
  return ExprJet(e, p.dim()).eval(p, params);
}

}  // namespace herglotz
