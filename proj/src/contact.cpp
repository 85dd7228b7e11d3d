#include "herglotz/contact.hpp"

#include <cmath>

#include "linalg.hpp"

namespace herglotz {

CoordOneForm::CoordOneForm(int n, std::vector<Expr> components, ParamSet params)
    : n_(n), components_(std::move(components)), params_(std::move(params)) {
  const int m = 2 * n + 1;
  if (n < 0 || static_cast<int>(components_.size()) != m)
    throw Error("CoordOneForm: expected " + std::to_string(m) + " components");
  for (const auto& c : components_)
    if (max_index(c) > n) throw Error("CoordOneForm: component references a coordinate beyond dimension");
  gradients_.reserve(m * m);
  for (int b = 0; b < m; ++b)
    for (int a = 0; a < m; ++a) gradients_.push_back(differentiate(components_[b], CoordId::from_flat(a, n)));
}

Eigen::VectorXd CoordOneForm::at(const StatePoint& p) const {
  const int m = 2 * n_ + 1;
  Eigen::VectorXd out(m);
  for (int a = 0; a < m; ++a) out[a] = eval(components_[a], p, params_);
  return out;
}

Eigen::MatrixXd CoordOneForm::jacobian_at(const StatePoint& p) const {
  const int m = 2 * n_ + 1;
  Eigen::MatrixXd J(m, m);
  for (int b = 0; b < m; ++b)
    for (int a = 0; a < m; ++a) J(a, b) = eval(gradients_[b * m + a], p, params_);
  return J;
}

CoordOneForm CoordOneForm::scaled(const Expr& f, const ParamSet& f_params) const {
  std::vector<Expr> comps;
  comps.reserve(components_.size());
  for (const auto& c : components_) comps.push_back(ops::mul(f, c));
  return CoordOneForm(n_, std::move(comps), ParamSet::merged(params_, f_params));
}

CoordOneForm CoordOneForm::darboux(int n) {
  std::vector<Expr> comps;
  for (int i = 0; i < n; ++i) comps.push_back(ops::neg(ops::v(i)));
  for (int i = 0; i < n; ++i) comps.push_back(ops::constant(0.0));
  comps.push_back(ops::constant(1.0));
  return CoordOneForm(n, std::move(comps));
}

CoordVectorField::CoordVectorField(int n, std::vector<Expr> components, ParamSet params)
    : n_(n), components_(std::move(components)), params_(std::move(params)) {
  if (n < 0 || static_cast<int>(components_.size()) != 2 * n + 1)
    throw Error("CoordVectorField: expected " + std::to_string(2 * n + 1) + " components");
  for (const auto& c : components_)
    if (max_index(c) > n) throw Error("CoordVectorField: component references a coordinate beyond dimension");
}

Eigen::VectorXd CoordVectorField::at(const StatePoint& p) const {
  Eigen::VectorXd out(components_.size());
  for (std::size_t a = 0; a < components_.size(); ++a) out[a] = eval(components_[a], p, params_);
  return out;
}

Expr CoordVectorField::apply(const Expr& f) const {
  Expr acc = ops::constant(0.0);
  for (int a = 0; a < 2 * n_ + 1; ++a)
    acc = ops::add(acc, ops::mul(components_[a], differentiate(f, CoordId::from_flat(a, n_))));
  return acc;
}

ContactHamiltonianSystem::ContactHamiltonianSystem(CoordOneForm eta, Expr hamiltonian, ParamSet params)
    : eta_(std::move(eta)),
      hamiltonian_(std::move(hamiltonian)),
      params_(ParamSet::merged(eta_.params(), params)) {
  if (max_index(hamiltonian_) > eta_.dim())
    throw Error("ContactHamiltonianSystem: Hamiltonian references a coordinate beyond dimension");
  h_gradient_ = gradient(hamiltonian_, eta_.dim());
}

double ContactHamiltonianSystem::hamiltonian_at(const StatePoint& p) const { return eval(hamiltonian_, p, params_); }

Eigen::VectorXd ContactHamiltonianSystem::hamiltonian_gradient_at(const StatePoint& p) const {
  Eigen::VectorXd g(h_gradient_.size());
  for (std::size_t a = 0; a < h_gradient_.size(); ++a) g[a] = eval(h_gradient_[a], p, params_);
  return g;
}

namespace {

Eigen::MatrixXd d_from_jacobian(const Eigen::MatrixXd& J) {
  const auto m = J.rows();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    for (Eigen::Index b = a + 1; b < m; ++b) {
      const double w = J(a, b) - J(b, a);
      M(a, b) = w;
      M(b, a) = -w;
    }
  }
  return M;
}

// Rows 0..m-1: (i_X d alpha)_b = sum_a X^a M(a, b), i.e. M^T X. Last row: alpha.
Eigen::MatrixXd stacked(const Eigen::MatrixXd& M, const Eigen::VectorXd& alpha) {
  const auto m = M.rows();
  Eigen::MatrixXd A(m + 1, m);
  A.topRows(m) = M.transpose();
  A.row(m) = alpha.transpose();
  return A;
}

Eigen::VectorXd reeb_from(const Eigen::MatrixXd& M, const Eigen::VectorXd& alpha) {
  const auto m = M.rows();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + 1);
  rhs[m] = 1.0;
  return detail::solve_consistent(stacked(M, alpha), rhs, "reeb_field");
}

}  // namespace

Eigen::MatrixXd exterior_derivative(const CoordOneForm& alpha, const StatePoint& p) {
  return d_from_jacobian(alpha.jacobian_at(p));
}

double contact_condition(const CoordOneForm& alpha, const StatePoint& p) {
  const Eigen::MatrixXd A = stacked(exterior_derivative(alpha, p), alpha.at(p));
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return 0.0;
  return s[s.size() - 1] / s[0];
}

Eigen::VectorXd reeb_field(const CoordOneForm& eta, const StatePoint& p) {
  return reeb_from(exterior_derivative(eta, p), eta.at(p));
}

Eigen::VectorXd reeb_field(const ContactHamiltonianSystem& sys, const StatePoint& p) {
  return reeb_field(sys.eta(), p);
}

Eigen::VectorXd hamiltonian_field(const ContactHamiltonianSystem& sys, const StatePoint& p) {
  const Eigen::MatrixXd M = exterior_derivative(sys.eta(), p);
  const Eigen::VectorXd eta = sys.eta().at(p);
  const Eigen::VectorXd R = reeb_from(M, eta);
  const Eigen::VectorXd dH = sys.hamiltonian_gradient_at(p);
  const double H = sys.hamiltonian_at(p);
  const auto m = M.rows();

  Eigen::VectorXd rhs(m + 1);
  rhs.head(m) = dH - R.dot(dH) * eta;
  rhs[m] = -H;
  Eigen::VectorXd X = detail::solve_consistent(stacked(M, eta), rhs, "hamiltonian_field");
  if (!(std::abs(eta.dot(X) + H) <= 1e-10 * (1.0 + std::abs(H))))
    throw SingularSystem("hamiltonian_field: eta(X) = -H violated");
  return X;
}

ConformalProbe::ConformalProbe(CoordOneForm alpha, CoordVectorField X)
    : alpha_(std::move(alpha)), X_(std::move(X)), params_(ParamSet::merged(alpha_.params(), X_.params())) {
  if (alpha_.dim() != X_.dim()) throw Error("ConformalProbe: dimension mismatch");
  Expr contraction = ops::constant(0.0);
  for (int a = 0; a < 2 * alpha_.dim() + 1; ++a)
    contraction = ops::add(contraction, ops::mul(alpha_.component(a), X_.component(a)));
  contraction_gradient_ = gradient(contraction, alpha_.dim());
}

double ConformalProbe::residual(const StatePoint& p, double g) const {
  return (lie_derivative(p) - g * alpha_.at(p)).lpNorm<Eigen::Infinity>();
}

Eigen::VectorXd ConformalProbe::lie_derivative(const StatePoint& p) const {
  const Eigen::MatrixXd M = exterior_derivative(alpha_, p);
  const Eigen::VectorXd x = X_.at(p);
  Eigen::VectorXd out = M.transpose() * x;
  for (std::size_t b = 0; b < contraction_gradient_.size(); ++b)
    out[b] += eval(contraction_gradient_[b], p, params_);
  return out;
}

ConformalFactor ConformalProbe::factor(const StatePoint& p) const {
  const Eigen::VectorXd alpha = alpha_.at(p);
  const double norm2 = alpha.squaredNorm();
  if (norm2 == 0.0) throw Error("conformal_factor: the form vanishes at this point");
  const Eigen::VectorXd lie = lie_derivative(p);
  ConformalFactor cf;
  cf.g = lie.dot(alpha) / norm2;
  cf.residual = (lie - cf.g * alpha).lpNorm<Eigen::Infinity>();
  return cf;
}

Eigen::VectorXd lie_derivative(const CoordOneForm& alpha, const CoordVectorField& X, const StatePoint& p) {
  return ConformalProbe(alpha, X).lie_derivative(p);
}

ConformalFactor conformal_factor(const CoordOneForm& alpha, const CoordVectorField& X, const StatePoint& p) {
  return ConformalProbe(alpha, X).factor(p);
}

}  // namespace herglotz
