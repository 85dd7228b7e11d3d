#pragma once

// Extended contact systems: a Lagrangian L(q, v, z) together with an action
// function zeta(q, v, z), dzeta/dz != 0. Every zeta-chart object is expressed
// in the base chart through the frame
//
//   (d/dq_i)_zeta = d/dq_i - (zeta_qi / zeta_z) d/dz
//   (d/dv_i)_zeta = d/dv_i - (zeta_vi / zeta_z) d/dz
//   d/dzeta       = (1 / zeta_z) d/dz
//
// so z is never solved for in terms of zeta.

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "herglotz/contact.hpp"
#include "herglotz/expr.hpp"
#include "herglotz/lagrangian.hpp"
#include "herglotz/report.hpp"

namespace herglotz {

/// Parameter name standing for the action coordinate in Lagrangians written
/// in a zeta-chart.
inline constexpr const char* kZetaSymbol = "zeta";

/// dzeta/dz vanishes at the requested point.
class FrameSingularity : public Error {
 public:
  using Error::Error;
};

inline constexpr double kFrameTol = 1e-10;

class ActionFunction {
 public:
  ActionFunction(int n, Expr zeta, ParamSet params = {});

  /// zeta = z.
  static ActionFunction identity(int n);

  int dim() const { return n_; }
  const Expr& expr() const { return zeta_; }
  const ParamSet& params() const { return params_; }
  const Expr& d(CoordId c) const { return grad_[c.flat(n_)]; }
  const Expr& dz() const { return grad_[2 * n_]; }

  double at(const StatePoint& p) const;
  double dz_at(const StatePoint& p) const;
  /// True when zeta depends on some velocity symbolically.
  bool depends_on_velocity() const;

 private:
  int n_;
  Expr zeta_;
  ParamSet params_;
  std::vector<Expr> grad_;
};

/// Chart derivative of f: var = q_i or v_i gives (df/dx)_zeta, var = z gives
/// df/dzeta.
Expr zeta_partial(const Expr& f, const ActionFunction& zeta, CoordId var);

/// Columns are the frame vectors in (q, v, z) order, expressed in the base
/// chart. Throws FrameSingularity when |zeta_z| <= kFrameTol.
Eigen::MatrixXd zeta_frame(const ActionFunction& zeta, const StatePoint& p);

/// Replaces the zeta symbol in a zeta-chart expression by zeta(q, v, z).
Expr pull_back(const Expr& in_zeta_chart, const ActionFunction& zeta);

class ExtendedLagrangianSystem {
 public:
  ExtendedLagrangianSystem(int n, Expr lagrangian, ActionFunction zeta, ParamSet params = {});

  int dim() const { return n_; }
  const Expr& lagrangian() const { return L_; }
  const ActionFunction& zeta() const { return zeta_; }
  const ParamSet& params() const { return params_; }

  /// p_i = (dL/dv_i)_zeta.
  const Expr& momentum(int i) const { return p_[i]; }
  /// (dL/dq_i)_zeta.
  const Expr& chart_dq(int i) const { return Lq_[i]; }
  /// dL/dzeta.
  const Expr& chart_dzeta() const { return Lzeta_; }
  /// W(i, j) = (d p_i / dv_j)_zeta.
  const Expr& hessian(int i, int j) const { return W_[i * n_ + j]; }

  Eigen::MatrixXd hessian_at(const StatePoint& p) const;
  Eigen::VectorXd momentum_at(const StatePoint& p) const;

 private:
  int n_;
  Expr L_;
  ActionFunction zeta_;
  ParamSet params_;
  std::vector<Expr> p_, Lq_, W_;
  Expr Lzeta_;
};

/// Max over points and i of |X_qi - v_i|.
CheckReport extended_sode_check(const CoordVectorField& X, const SamplePlan& plan, const Tolerances& tol = {});

/// eta^zeta_L = dzeta - p_i dq^i in the base chart.
CoordOneForm extended_lagrangian_form(const ExtendedLagrangianSystem& sys);

/// det of W^zeta and whether it exceeds det_tol in magnitude.
Regularity zeta_regularity(const ExtendedLagrangianSystem& sys, const StatePoint& p, double det_tol = kDetTol);

/// E^zeta_L = v_i p_i - L.
Expr zeta_energy(const ExtendedLagrangianSystem& sys);

/// Symbolic zeta-Herglotz field (v, a, b):
///   W^zeta a = (dL/dq)_zeta + p dL/dzeta - v_j dp/dq_j - ((L - v.zeta_q) / zeta_z) dp/dz
///   b        = (L - v.zeta_q - a.zeta_v) / zeta_z
/// so that xi(zeta) = L and xi(p) = (dL/dq)_zeta + p dL/dzeta.
CoordVectorField zeta_herglotz_field(const ExtendedLagrangianSystem& sys);

/// The same field evaluated by the contact solver on (eta^zeta_L, E^zeta_L).
Eigen::VectorXd zeta_herglotz_field_at(const ExtendedLagrangianSystem& sys, const StatePoint& p);

/// Contract probe for (eta^zeta_L, E^zeta_L, dL/dzeta) and the given field.
ContractProbe zeta_herglotz_contract(const ExtendedLagrangianSystem& sys, const CoordVectorField& field);

struct LegendrePoint {
  std::vector<double> q;
  std::vector<double> p;
  double zeta = 0.0;
};

/// (q, v, z) -> (q, p^zeta, zeta). Throws RegularityError when W^zeta is
/// singular at the point.
LegendrePoint zeta_legendre(const ExtendedLagrangianSystem& sys, const StatePoint& p, double det_tol = kDetTol);

/// Max-norm of F^*(dzeta~ - p_i dq^i) - eta^zeta_L at p, with the pullback
/// formed from a finite-difference Jacobian of the Legendre map F.
double legendre_pullback_residual(const ExtendedLagrangianSystem& sys, const StatePoint& p);

}  // namespace herglotz
