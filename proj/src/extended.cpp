#include "herglotz/extended.hpp"

#include <cmath>
#include <sstream>

namespace herglotz {

using namespace ops;

ActionFunction::ActionFunction(int n, Expr zeta, ParamSet params)
    : n_(n), zeta_(std::move(zeta)), params_(std::move(params)) {
  if (n < 1) throw Error("ActionFunction: dimension must be positive");
  if (max_index(zeta_) > n) throw Error("ActionFunction: expression references a coordinate beyond dimension");
  if (depends_on_param(zeta_, kZetaSymbol)) throw Error("ActionFunction: expression may not reference 'zeta'");
  grad_ = gradient(zeta_, n);
}

ActionFunction ActionFunction::identity(int n) { return ActionFunction(n, z()); }

double ActionFunction::at(const StatePoint& p) const { return eval(zeta_, p, params_); }

double ActionFunction::dz_at(const StatePoint& p) const { return eval(dz(), p, params_); }

bool ActionFunction::depends_on_velocity() const {
  for (int i = 0; i < n_; ++i)
    if (depends_on(zeta_, CoordId::v(i))) return true;
  return false;
}

Expr zeta_partial(const Expr& f, const ActionFunction& zeta, CoordId var) {
  const Expr fz = differentiate(f, CoordId::z());
  if (var.kind == CoordKind::z) return div(fz, zeta.dz());
  const Expr fx = differentiate(f, var);
  if (fz.is_constant(0.0) || zeta.d(var).is_constant(0.0)) return fx;
  return sub(fx, div(mul(zeta.d(var), fz), zeta.dz()));
}

Eigen::MatrixXd zeta_frame(const ActionFunction& zeta, const StatePoint& p) {
  const int n = zeta.dim();
  const int m = 2 * n + 1;
  const double zz = zeta.dz_at(p);
  if (!(std::abs(zz) > kFrameTol)) throw FrameSingularity("zeta_frame: dzeta/dz vanishes");
  Eigen::MatrixXd F = Eigen::MatrixXd::Identity(m, m);
  for (int a = 0; a < 2 * n; ++a) F(2 * n, a) = -eval(zeta.d(CoordId::from_flat(a, n)), p, zeta.params()) / zz;
  F(2 * n, 2 * n) = 1.0 / zz;
  return F;
}

Expr pull_back(const Expr& in_zeta_chart, const ActionFunction& zeta) {
  return substitute(in_zeta_chart, kZetaSymbol, zeta.expr());
}

ExtendedLagrangianSystem::ExtendedLagrangianSystem(int n, Expr lagrangian, ActionFunction zeta, ParamSet params)
    : n_(n),
      L_(std::move(lagrangian)),
      zeta_(std::move(zeta)),
      params_(ParamSet::merged(zeta_.params(), params)) {
  if (zeta_.dim() != n) throw Error("ExtendedLagrangianSystem: action function dimension mismatch");
  if (max_index(L_) > n) throw Error("ExtendedLagrangianSystem: Lagrangian references a coordinate beyond dimension");
  if (depends_on_param(L_, kZetaSymbol))
    throw Error("ExtendedLagrangianSystem: Lagrangian still references 'zeta'; pull it back first");
  for (int i = 0; i < n; ++i) {
    p_.push_back(zeta_partial(L_, zeta_, CoordId::v(i)));
    Lq_.push_back(zeta_partial(L_, zeta_, CoordId::q(i)));
  }
  Lzeta_ = zeta_partial(L_, zeta_, CoordId::z());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) W_.push_back(zeta_partial(p_[i], zeta_, CoordId::v(j)));
}

Eigen::MatrixXd ExtendedLagrangianSystem::hessian_at(const StatePoint& p) const {
  Eigen::MatrixXd W(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) W(i, j) = eval(W_[i * n_ + j], p, params_);
  return W;
}

Eigen::VectorXd ExtendedLagrangianSystem::momentum_at(const StatePoint& p) const {
  Eigen::VectorXd out(n_);
  for (int i = 0; i < n_; ++i) out[i] = eval(p_[i], p, params_);
  return out;
}

CheckReport extended_sode_check(const CoordVectorField& X, const SamplePlan& plan, const Tolerances& tol) {
  CheckReport r;
  r.task = "extended-sode";
  r.tolerances = tol;
  r.plan = plan;
  const int n = X.dim();
  if (plan.dim() != n) {
    r.error("sample plan dimension does not match the field");
    r.finalize();
    return r;
  }
  for (const auto& p : sample_points(plan)) {
    const Eigen::VectorXd x = X.at(p);
    double mx = 0.0;
    for (int i = 0; i < n; ++i) mx = std::max(mx, std::abs(x[i] - p.v[i]));
    r.records.push_back({p, {}, {{"q_rate_minus_v", mx}}, {}});
  }
  r.finalize();
  return r;
}

CoordOneForm extended_lagrangian_form(const ExtendedLagrangianSystem& sys) {
  const int n = sys.dim();
  const ActionFunction& z = sys.zeta();
  std::vector<Expr> c;
  for (int i = 0; i < n; ++i) c.push_back(sub(z.d(CoordId::q(i)), sys.momentum(i)));
  for (int i = 0; i < n; ++i) c.push_back(z.d(CoordId::v(i)));
  c.push_back(z.dz());
  return CoordOneForm(n, std::move(c), sys.params());
}

Regularity zeta_regularity(const ExtendedLagrangianSystem& sys, const StatePoint& p, double det_tol) {
  if (!(std::abs(sys.zeta().dz_at(p)) > kFrameTol)) throw FrameSingularity("zeta_regularity: dzeta/dz vanishes");
  Regularity r;
  r.det = sys.hessian_at(p).determinant();
  r.ok = std::abs(r.det) > det_tol;
  return r;
}

Expr zeta_energy(const ExtendedLagrangianSystem& sys) {
  Expr e = constant(0.0);
  for (int i = 0; i < sys.dim(); ++i) e = add(e, mul(v(i), sys.momentum(i)));
  return sub(e, sys.lagrangian());
}

CoordVectorField zeta_herglotz_field(const ExtendedLagrangianSystem& sys) {
  const int n = sys.dim();
  const ActionFunction& zeta = sys.zeta();
  const Expr& L = sys.lagrangian();

  // z-rate before the velocity-direction correction: (L - v.zeta_q) / zeta_z.
  Expr drift = L;
  for (int j = 0; j < n; ++j) drift = sub(drift, mul(v(j), zeta.d(CoordId::q(j))));
  const Expr base_rate = div(drift, zeta.dz());

  std::vector<Expr> W, rhs;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) W.push_back(sys.hessian(i, j));
  for (int i = 0; i < n; ++i) {
    const Expr& p = sys.momentum(i);
    Expr r = add(sys.chart_dq(i), mul(p, sys.chart_dzeta()));
    for (int j = 0; j < n; ++j) r = sub(r, mul(v(j), differentiate(p, CoordId::q(j))));
    r = sub(r, mul(base_rate, differentiate(p, CoordId::z())));
    rhs.push_back(r);
  }
  const std::vector<Expr> a = symbolic_solve(W, rhs, n);

  Expr b = drift;
  for (int j = 0; j < n; ++j) b = sub(b, mul(a[j], zeta.d(CoordId::v(j))));
  b = div(b, zeta.dz());

  std::vector<Expr> c;
  for (int i = 0; i < n; ++i) c.push_back(v(i));
  for (int i = 0; i < n; ++i) c.push_back(a[i]);
  c.push_back(b);
  return CoordVectorField(n, std::move(c), sys.params());
}

Eigen::VectorXd zeta_herglotz_field_at(const ExtendedLagrangianSystem& sys, const StatePoint& p) {
  const ContactHamiltonianSystem h(extended_lagrangian_form(sys), zeta_energy(sys), sys.params());
  return hamiltonian_field(h, p);
}

ContractProbe zeta_herglotz_contract(const ExtendedLagrangianSystem& sys, const CoordVectorField& field) {
  return ContractProbe(extended_lagrangian_form(sys), zeta_energy(sys), sys.chart_dzeta(), field, sys.params());
}

LegendrePoint zeta_legendre(const ExtendedLagrangianSystem& sys, const StatePoint& p, double det_tol) {
  const Regularity reg = zeta_regularity(sys, p, det_tol);
  if (!reg.ok) {
    std::ostringstream os;
    os << "zeta-regularity violated (det W^zeta = " << reg.det << ")";
    throw RegularityError(os.str());
  }
  LegendrePoint out;
  out.q = p.q;
  const Eigen::VectorXd mom = sys.momentum_at(p);
  out.p.assign(mom.data(), mom.data() + mom.size());
  out.zeta = sys.zeta().at(p);
  return out;
}

double legendre_pullback_residual(const ExtendedLagrangianSystem& sys, const StatePoint& p) {
  const int n = sys.dim();
  const int m = 2 * n + 1;
  // F : R^m -> R^m, (q, v, z) -> (q, p, zeta); only the q and zeta rows enter
  // the pullback of dzeta~ - p_i dq^i.
  const auto F = [&](const Eigen::VectorXd& x) {
    const LegendrePoint lp = zeta_legendre(sys, StatePoint::from_flat(x, n));
    Eigen::VectorXd y(m);
    for (int i = 0; i < n; ++i) {
      y[i] = lp.q[i];
      y[n + i] = lp.p[i];
    }
    y[2 * n] = lp.zeta;
    return y;
  };
  const Eigen::VectorXd x0 = p.flat();
  const Eigen::VectorXd y0 = F(x0);
  Eigen::MatrixXd J(m, m);  // J(r, a) = dF_r / dx_a, fourth-order central differences
  for (int a = 0; a < m; ++a) {
    const double h = 1e-3 * std::max(1.0, std::abs(x0[a]));
    Eigen::VectorXd e = Eigen::VectorXd::Zero(m);
    e[a] = h;
    J.col(a) = (8.0 * (F(x0 + e) - F(x0 - e)) - (F(x0 + 2 * e) - F(x0 - 2 * e))) / (12.0 * h);
  }
  Eigen::VectorXd pulled = J.row(2 * n).transpose();
  for (int i = 0; i < n; ++i) pulled -= y0[n + i] * J.row(i).transpose();
  return (pulled - extended_lagrangian_form(sys).at(p)).lpNorm<Eigen::Infinity>();
}

}  // namespace herglotz
