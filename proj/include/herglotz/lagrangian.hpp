#pragma once

#include <vector>

#include <Eigen/Dense>

#include "herglotz/contact.hpp"
#include "herglotz/expr.hpp"

namespace herglotz {

/// The velocity Hessian is singular at the requested point.
class RegularityError : public Error {
 public:
  using Error::Error;
};

struct Regularity {
  double det = 0.0;
  bool ok = false;
};

inline constexpr double kDetTol = 1e-10;

/// A contact Lagrangian L(q, v, z) in the trivial chart.
///
/// The Herglotz equations d/dt(L_v) - L_q = L_v L_z, z' = L are expanded along
/// a second order field into W a = rhs with W = L_vv and
///   rhs_i = L_qi + L_z L_vi - sum_j v_j L_{qj vi} - L L_{z vi}.
class ContactLagrangianSystem {
 public:
  ContactLagrangianSystem(int n, Expr lagrangian, ParamSet params = {});

  int dim() const { return n_; }
  const Expr& lagrangian() const { return L_; }
  const ParamSet& params() const { return params_; }

  const Expr& dq(int i) const { return Lq_[i]; }
  const Expr& dv(int i) const { return Lv_[i]; }
  const Expr& dz() const { return Lz_; }
  /// W(i, j) = d^2 L / dv_i dv_j.
  const Expr& velocity_hessian(int i, int j) const { return W_[i * n_ + j]; }
  /// rhs_i of the acceleration system.
  const Expr& acceleration_rhs(int i) const { return rhs_[i]; }

  Eigen::MatrixXd velocity_hessian_at(const StatePoint& p) const;
  Eigen::VectorXd acceleration_rhs_at(const StatePoint& p) const;

 private:
  int n_;
  Expr L_;
  ParamSet params_;
  std::vector<Expr> Lq_, Lv_, W_, rhs_;
  Expr Lz_;
};

/// eta_L = dz - (dL/dv_i) dq^i.
CoordOneForm lagrangian_form(const ContactLagrangianSystem& sys);

/// E_L = v_i dL/dv_i - L.
Expr energy(const ContactLagrangianSystem& sys);

Regularity regularity(const ContactLagrangianSystem& sys, const StatePoint& p, double det_tol = kDetTol);

/// xi_L = v d/dq + a d/dv + L d/dz with a given symbolically by Cramer's rule.
CoordVectorField herglotz_field(const ContactLagrangianSystem& sys);

/// Pointwise accelerations by LU with partial pivoting.
/// Throws RegularityError when |det W| <= det_tol.
Eigen::VectorXd herglotz_accelerations_at(const ContactLagrangianSystem& sys, const StatePoint& p,
                                          double det_tol = kDetTol);

/// Full state derivative (v, a, L) at p through the pointwise route.
Eigen::VectorXd herglotz_rate_at(const ContactLagrangianSystem& sys, const StatePoint& p, double det_tol = kDetTol);

/// r_i = d/dt(dL/dv_i)|_a - dL/dq_i - (dL/dz)(dL/dv_i).
Eigen::VectorXd herglotz_residual(const ContactLagrangianSystem& sys, const StatePoint& p, const Eigen::VectorXd& a);

/// Residuals of the intrinsic contract eta(X) = -E and L_X eta = g eta for a
/// prescribed conformal factor g.
struct ContractResiduals {
  double contraction = 0.0;
  double lie = 0.0;
};

class ContractProbe {
 public:
  ContractProbe(CoordOneForm eta, Expr energy, Expr factor, CoordVectorField field, ParamSet params);
  ContractResiduals at(const StatePoint& p) const;

 private:
  ConformalProbe probe_;
  Expr energy_;
  Expr factor_;
  ParamSet params_;
};

/// Contract probe for (eta_L, E_L, dL/dz) and the given field.
ContractProbe herglotz_contract(const ContactLagrangianSystem& sys, const CoordVectorField& field);

/// Symbolic determinant by cofactor expansion of a row-major n x n matrix.
Expr symbolic_determinant(const std::vector<Expr>& m, int n);

/// Symbolic solution of M x = b by Cramer's rule.
std::vector<Expr> symbolic_solve(const std::vector<Expr>& m, const std::vector<Expr>& b, int n);

}  // namespace herglotz
