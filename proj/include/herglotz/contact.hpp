#pragma once

// Pointwise contact geometry in the global chart (q, v, z).
//
// Forms and fields are lists of 2n+1 symbolic components ordered
// (dq1..dqn, dv1..dvn, dz) resp. (d/dq1..d/dqn, d/dv1..d/dvn, d/dz). The Reeb
// and Hamiltonian vector fields are obtained from the defining linear systems
//
//   i_R deta = 0,                    eta(R) = 1,
//   i_X deta = dH - R(H) eta,        eta(X) = -H,
//
// solved pointwise by SVD. In Darboux coordinates the solution is
// X = H_p d/dq - (H_q + p H_z) d/dp + (p H_p - H) d/dz.

#include <vector>

#include <Eigen/Dense>

#include "herglotz/expr.hpp"

namespace herglotz {

/// The stacked linear system has no unique solution: the form is not a
/// contact form at the point (or the right-hand side is inconsistent).
class SingularSystem : public Error {
 public:
  using Error::Error;
};

class CoordOneForm {
 public:
  CoordOneForm(int n, std::vector<Expr> components, ParamSet params = {});

  int dim() const { return n_; }
  const std::vector<Expr>& components() const { return components_; }
  const Expr& component(int a) const { return components_[a]; }
  const ParamSet& params() const { return params_; }

  Eigen::VectorXd at(const StatePoint& p) const;
  /// J(a, b) = d(alpha_b)/d(x^a).
  Eigen::MatrixXd jacobian_at(const StatePoint& p) const;

  CoordOneForm scaled(const Expr& f, const ParamSet& f_params = {}) const;

  /// dz - sum_i v_i dq^i, the Darboux form with v playing p.
  static CoordOneForm darboux(int n);

 private:
  int n_;
  std::vector<Expr> components_;
  ParamSet params_;
  std::vector<Expr> gradients_;  // gradients_[b * m + a] = d(alpha_b)/d(x^a)
};

class CoordVectorField {
 public:
  CoordVectorField(int n, std::vector<Expr> components, ParamSet params = {});

  int dim() const { return n_; }
  const std::vector<Expr>& components() const { return components_; }
  const Expr& component(int a) const { return components_[a]; }
  const ParamSet& params() const { return params_; }

  Eigen::VectorXd at(const StatePoint& p) const;

  /// X(f) as an expression: sum_a X^a df/dx^a.
  Expr apply(const Expr& f) const;

 private:
  int n_;
  std::vector<Expr> components_;
  ParamSet params_;
};

class ContactHamiltonianSystem {
 public:
  ContactHamiltonianSystem(CoordOneForm eta, Expr hamiltonian, ParamSet params = {});

  int dim() const { return eta_.dim(); }
  const CoordOneForm& eta() const { return eta_; }
  const Expr& hamiltonian() const { return hamiltonian_; }
  const ParamSet& params() const { return params_; }

  double hamiltonian_at(const StatePoint& p) const;
  Eigen::VectorXd hamiltonian_gradient_at(const StatePoint& p) const;

 private:
  CoordOneForm eta_;
  Expr hamiltonian_;
  ParamSet params_;
  std::vector<Expr> h_gradient_;
};

/// M(a, b) = d(alpha_b)/dx^a - d(alpha_a)/dx^b, antisymmetric by construction.
Eigen::MatrixXd exterior_derivative(const CoordOneForm& alpha, const StatePoint& p);

/// Ratio of smallest to largest singular value of the stacked matrix
/// [ (d alpha)^T ; alpha ]; the form is contact at p when this exceeds 1e-10.
double contact_condition(const CoordOneForm& alpha, const StatePoint& p);

Eigen::VectorXd reeb_field(const CoordOneForm& eta, const StatePoint& p);
Eigen::VectorXd reeb_field(const ContactHamiltonianSystem& sys, const StatePoint& p);

Eigen::VectorXd hamiltonian_field(const ContactHamiltonianSystem& sys, const StatePoint& p);

/// L_X alpha at p, via Cartan's formula i_X d alpha + d(alpha(X)).
Eigen::VectorXd lie_derivative(const CoordOneForm& alpha, const CoordVectorField& X, const StatePoint& p);

struct ConformalFactor {
  double g = 0.0;
  double residual = 0.0;  // max-norm of L_X alpha - g alpha
};

/// Least-squares fit of L_X alpha = g alpha at p.
ConformalFactor conformal_factor(const CoordOneForm& alpha, const CoordVectorField& X, const StatePoint& p);

/// Reusable form of conformal_factor for repeated evaluation of one pair.
class ConformalProbe {
 public:
  ConformalProbe(CoordOneForm alpha, CoordVectorField X);
  Eigen::VectorXd lie_derivative(const StatePoint& p) const;
  ConformalFactor factor(const StatePoint& p) const;
  /// max-norm of L_X alpha - g alpha for a prescribed factor g.
  double residual(const StatePoint& p, double g) const;
  const CoordOneForm& form() const { return alpha_; }
  const CoordVectorField& field() const { return X_; }

 private:
  CoordOneForm alpha_;
  CoordVectorField X_;
  ParamSet params_;
  std::vector<Expr> contraction_gradient_;  // d(alpha(X))
};

}  // namespace herglotz
