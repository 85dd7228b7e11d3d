#include "herglotz/lagrangian.hpp"

#include <cmath>
#include <sstream>

namespace herglotz {

using namespace ops;

ContactLagrangianSystem::ContactLagrangianSystem(int n, Expr lagrangian, ParamSet params)
    : n_(n), L_(std::move(lagrangian)), params_(std::move(params)) {
  if (n < 1) throw Error("ContactLagrangianSystem: dimension must be positive");
  if (max_index(L_) > n) throw Error("ContactLagrangianSystem: Lagrangian references a coordinate beyond dimension");
  Lz_ = differentiate(L_, CoordId::z());
  for (int i = 0; i < n; ++i) {
    Lq_.push_back(differentiate(L_, CoordId::q(i)));
    Lv_.push_back(differentiate(L_, CoordId::v(i)));
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) W_.push_back(differentiate(Lv_[i], CoordId::v(j)));
  for (int i = 0; i < n; ++i) {
    Expr r = add(Lq_[i], mul(Lz_, Lv_[i]));
    for (int j = 0; j < n; ++j) r = sub(r, mul(v(j), differentiate(Lv_[i], CoordId::q(j))));
    r = sub(r, mul(L_, differentiate(Lv_[i], CoordId::z())));
    rhs_.push_back(r);
  }
}

Eigen::MatrixXd ContactLagrangianSystem::velocity_hessian_at(const StatePoint& p) const {
  Eigen::MatrixXd W(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) W(i, j) = eval(W_[i * n_ + j], p, params_);
  return W;
}

Eigen::VectorXd ContactLagrangianSystem::acceleration_rhs_at(const StatePoint& p) const {
  Eigen::VectorXd r(n_);
  for (int i = 0; i < n_; ++i) r[i] = eval(rhs_[i], p, params_);
  return r;
}

CoordOneForm lagrangian_form(const ContactLagrangianSystem& sys) {
  const int n = sys.dim();
  std::vector<Expr> c;
  for (int i = 0; i < n; ++i) c.push_back(neg(sys.dv(i)));
  for (int i = 0; i < n; ++i) c.push_back(constant(0.0));
  c.push_back(constant(1.0));
  return CoordOneForm(n, std::move(c), sys.params());
}

Expr energy(const ContactLagrangianSystem& sys) {
  Expr e = constant(0.0);
  for (int i = 0; i < sys.dim(); ++i) e = add(e, mul(v(i), sys.dv(i)));
  return sub(e, sys.lagrangian());
}

Regularity regularity(const ContactLagrangianSystem& sys, const StatePoint& p, double det_tol) {
  Regularity r;
  r.det = sys.velocity_hessian_at(p).determinant();
  r.ok = std::abs(r.det) > det_tol;
  return r;
}

Expr symbolic_determinant(const std::vector<Expr>& m, int n) {
  if (n == 1) return m[0];
  if (n == 2) return sub(mul(m[0], m[3]), mul(m[1], m[2]));
  Expr det = constant(0.0);
  for (int col = 0; col < n; ++col) {
    if (m[col].is_constant(0.0)) continue;
    std::vector<Expr> minor;
    minor.reserve((n - 1) * (n - 1));
    for (int r = 1; r < n; ++r)
      for (int c = 0; c < n; ++c)
        if (c != col) minor.push_back(m[r * n + c]);
    Expr term = mul(m[col], symbolic_determinant(minor, n - 1));
    det = col % 2 == 0 ? add(det, term) : sub(det, term);
  }
  return det;
}

std::vector<Expr> symbolic_solve(const std::vector<Expr>& m, const std::vector<Expr>& b, int n) {
  const Expr det = symbolic_determinant(m, n);
  std::vector<Expr> x;
  x.reserve(n);
  for (int i = 0; i < n; ++i) {
    std::vector<Expr> mi = m;
    for (int r = 0; r < n; ++r) mi[r * n + i] = b[r];
    x.push_back(div(symbolic_determinant(mi, n), det));
  }
  return x;
}

CoordVectorField herglotz_field(const ContactLagrangianSystem& sys) {
  const int n = sys.dim();
  std::vector<Expr> W, rhs;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) W.push_back(sys.velocity_hessian(i, j));
  for (int i = 0; i < n; ++i) rhs.push_back(sys.acceleration_rhs(i));
  const std::vector<Expr> a = symbolic_solve(W, rhs, n);

  std::vector<Expr> c;
  for (int i = 0; i < n; ++i) c.push_back(v(i));
  for (int i = 0; i < n; ++i) c.push_back(a[i]);
  c.push_back(sys.lagrangian());
  return CoordVectorField(n, std::move(c), sys.params());
}

Eigen::VectorXd herglotz_accelerations_at(const ContactLagrangianSystem& sys, const StatePoint& p, double det_tol) {
  const Eigen::MatrixXd W = sys.velocity_hessian_at(p);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(W);
  const double det = lu.determinant();
  if (!(std::abs(det) > det_tol)) {
    std::ostringstream os;
    os << "velocity Hessian is singular (det = " << det << ")";
    throw RegularityError(os.str());
  }
  return lu.solve(sys.acceleration_rhs_at(p));
}

Eigen::VectorXd herglotz_rate_at(const ContactLagrangianSystem& sys, const StatePoint& p, double det_tol) {
  const int n = sys.dim();
  Eigen::VectorXd x(2 * n + 1);
  for (int i = 0; i < n; ++i) x[i] = p.v[i];
  x.segment(n, n) = herglotz_accelerations_at(sys, p, det_tol);
  x[2 * n] = eval(sys.lagrangian(), p, sys.params());
  return x;
}

Eigen::VectorXd herglotz_residual(const ContactLagrangianSystem& sys, const StatePoint& p, const Eigen::VectorXd& a) {
  const int n = sys.dim();
  if (a.size() != n) throw Error("herglotz_residual: acceleration has wrong length");
  // d/dt(L_vi) along (v, a, L) minus the rest equals W a - rhs.
  return sys.velocity_hessian_at(p) * a - sys.acceleration_rhs_at(p);
}

ContractProbe::ContractProbe(CoordOneForm eta, Expr energy, Expr factor, CoordVectorField field, ParamSet params)
    : probe_(std::move(eta), std::move(field)),
      energy_(std::move(energy)),
      factor_(std::move(factor)),
      params_(std::move(params)) {}

ContractResiduals ContractProbe::at(const StatePoint& p) const {
  const Eigen::VectorXd eta = probe_.form().at(p);
  const Eigen::VectorXd X = probe_.field().at(p);
  ContractResiduals r;
  r.contraction = std::abs(eta.dot(X) + eval(energy_, p, params_));
  r.lie = probe_.residual(p, eval(factor_, p, params_));
  return r;
}

ContractProbe herglotz_contract(const ContactLagrangianSystem& sys, const CoordVectorField& field) {
  return ContractProbe(lagrangian_form(sys), energy(sys), sys.dz(), field, sys.params());
}

}  // namespace herglotz
