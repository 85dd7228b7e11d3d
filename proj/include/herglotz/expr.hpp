#pragma once

// Scalar expressions over the chart coordinates (q1..qn, v1..vn, z) and named
// parameters. Every scalar field used by the library (Lagrangians,
// Hamiltonians, action functions, form and field components) is an Expr.

#include <cstddef>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace herglotz {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Syntax errors carry the byte offset into the source text.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t offset);
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// log/sqrt of a negative number, division by zero, non-finite results.
class DomainError : public Error {
 public:
  using Error::Error;
};

class UnboundParameter : public Error {
 public:
  explicit UnboundParameter(const std::string& name);
};

enum class CoordKind { q, v, z };

/// A chart coordinate. Indices are zero-based; the textual names are
/// one-based (q1 is CoordId::q(0)).
struct CoordId {
  CoordKind kind = CoordKind::z;
  int index = 0;

  static CoordId q(int i) { return {CoordKind::q, i}; }
  static CoordId v(int i) { return {CoordKind::v, i}; }
  static CoordId z() { return {CoordKind::z, 0}; }

  /// Position in the flattened (q, v, z) ordering of a 2n+1 chart.
  int flat(int n) const;
  static CoordId from_flat(int flat_index, int n);
  std::string name() const;

  friend bool operator==(const CoordId&, const CoordId&) = default;
};

/// A point (q, v, z) of the chart. On the Hamiltonian side v stores p.
struct StatePoint {
  std::vector<double> q;
  std::vector<double> v;
  double z = 0.0;

  StatePoint() = default;
  StatePoint(std::vector<double> q_, std::vector<double> v_, double z_);

  int dim() const { return static_cast<int>(q.size()); }
  double coord(CoordId c) const;
  Eigen::VectorXd flat() const;
  static StatePoint from_flat(const Eigen::VectorXd& x, int n);
};

class ParamSet {
 public:
  ParamSet() = default;
  ParamSet(std::initializer_list<std::pair<const std::string, double>> values);

  /// Throws if the name is already bound or the value is not finite.
  void bind(const std::string& name, double value);
  double get(const std::string& name) const;
  bool contains(const std::string& name) const { return values_.count(name) != 0; }
  const std::map<std::string, double>& values() const { return values_; }

  /// Union of two sets; a name bound in both must carry the same value.
  static ParamSet merged(const ParamSet& a, const ParamSet& b);

 private:
  std::map<std::string, double> values_;
};

enum class Op {
  constant,
  coord,
  param,
  neg,
  sin,
  cos,
  exp,
  log,
  sqrt,
  tanh,
  add,
  sub,
  mul,
  div,
  pow,
};

bool is_function(Op op);
const char* function_name(Op op);

class Expr;

struct Node;

class Expr {
 public:
  /// The constant 0.
  Expr();
  explicit Expr(double value);

  Op op() const;
  double value() const;              // constant
  CoordId coord() const;             // coord
  const std::string& name() const;   // param
  int exponent() const;              // pow
  Expr lhs() const;                  // unary operand / binary left / pow base
  Expr rhs() const;                  // binary right
  long offset() const;               // source byte offset, -1 if derived

  bool is_constant() const { return op() == Op::constant; }
  bool is_constant(double v) const { return is_constant() && value() == v; }

  const Node* node() const { return node_.get(); }

  // Unsimplified constructors; the parser uses these so that the AST mirrors
  // the source text.
  static Expr raw_constant(double value, long offset = -1);
  static Expr raw_coord(CoordId c, long offset = -1);
  static Expr raw_param(std::string name, long offset = -1);
  static Expr raw_unary(Op op, Expr operand, long offset = -1);
  static Expr raw_binary(Op op, Expr lhs, Expr rhs, long offset = -1);
  static Expr raw_pow(Expr base, int exponent, long offset = -1);

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct Node {
  Op op = Op::constant;
  double value = 0.0;
  CoordId coord{};
  std::string name;
  int exponent = 0;
  std::shared_ptr<const Node> a;
  std::shared_ptr<const Node> b;
  long offset = -1;
};

// Simplifying constructors: constant folding and 0/1 elimination only.
namespace ops {
Expr constant(double value);
Expr coord(CoordId c);
Expr q(int i);
Expr v(int i);
Expr z();
Expr param(const std::string& name);
Expr neg(const Expr& a);
Expr add(const Expr& a, const Expr& b);
Expr sub(const Expr& a, const Expr& b);
Expr mul(const Expr& a, const Expr& b);
Expr div(const Expr& a, const Expr& b);
Expr pow(const Expr& a, int k);
Expr unary(Op f, const Expr& a);
Expr sin(const Expr& a);
Expr cos(const Expr& a);
Expr exp(const Expr& a);
Expr log(const Expr& a);
Expr sqrt(const Expr& a);
Expr tanh(const Expr& a);
Expr sum(const std::vector<Expr>& terms);
}  // namespace ops

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr operator*(double a, const Expr& b);

/// Parses the expression grammar; q/v indices must lie in 1..n.
Expr parse(const std::string& text, int n);

/// Canonical serializer; parse(to_string(e), n) reproduces e for any AST the
/// parser can produce.
std::string to_string(const Expr& e);

/// Exact symbolic partial derivative.
Expr differentiate(const Expr& e, CoordId var);

double eval(const Expr& e, const StatePoint& p, const ParamSet& params);

/// Replaces every reference to parameter `name` with `replacement`.
Expr substitute(const Expr& e, const std::string& name, const Expr& replacement);

bool structurally_equal(const Expr& a, const Expr& b);
bool depends_on(const Expr& e, CoordId c);
bool depends_on_param(const Expr& e, const std::string& name);
/// Largest one-based q/v index referenced, 0 if none.
int max_index(const Expr& e);
std::vector<std::string> parameter_names(const Expr& e);
/// Number of distinct nodes in the expression DAG.
std::size_t node_count(const Expr& e);

/// Value, gradient and Hessian over all 2n+1 chart coordinates.
struct Jet2 {
  double value = 0.0;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;
};

/// Precomputed symbolic first and second derivatives of one expression.
class ExprJet {
 public:
  ExprJet(Expr e, int n);
  int dim() const { return n_; }
  const Expr& expr() const { return value_; }
  const Expr& first(int a) const { return first_[a]; }
  const Expr& second(int a, int b) const;
  Jet2 eval(const StatePoint& p, const ParamSet& params) const;

 private:
  int n_;
  Expr value_;
  std::vector<Expr> first_;
  std::vector<Expr> second_;  // upper triangle, row-major
};

Jet2 eval_jet2(const Expr& e, const StatePoint& p, const ParamSet& params);

/// Gradient expressions over all 2n+1 coordinates.
std::vector<Expr> gradient(const Expr& e, int n);

}  // namespace herglotz
