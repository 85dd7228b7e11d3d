#pragma once

#include <optional>
#include <vector>

#include "herglotz/contact.hpp"
#include "herglotz/extended.hpp"
#include "herglotz/report.hpp"

namespace herglotz {

/// xi = v_i d/dq_i + a_i d/dv_i + b d/dz.
class SODESystem {
 public:
  SODESystem(int n, std::vector<Expr> accelerations, Expr z_rate, ParamSet params = {});
  /// Reads (a, b) off a field whose q-components are taken to be v.
  static SODESystem from_field(const CoordVectorField& xi);

  int dim() const { return n_; }
  const std::vector<Expr>& accelerations() const { return a_; }
  const Expr& acceleration(int i) const { return a_[i]; }
  const Expr& z_rate() const { return b_; }
  const ParamSet& params() const { return params_; }

  CoordVectorField field() const;
  /// The same system with `offset` added to acceleration i.
  SODESystem perturbed(int i, double offset) const;

 private:
  int n_;
  std::vector<Expr> a_;
  Expr b_;
  ParamSet params_;
};

struct InverseResult {
  CheckReport report;
  /// Candidate Lagrangian in the base chart, set when the check passes.
  std::optional<Expr> lagrangian;
  /// Recovered y_i; extended check only.
  std::vector<Expr> momenta;
  /// Recovered conformal factor g; extended check only.
  std::optional<Expr> factor;
};

/// Residuals xi(b_vi) - b_qi - b_z b_vi, with L = b. Fails when the velocity
/// Hessian of b is singular at a sampled point.
InverseResult naive_inverse_check(const SODESystem& sode, const SamplePlan& plan, const Tolerances& tol = {});

/// Candidate action function zeta(q, z). With Lambda = xi(zeta) the residuals are
///   (Lambda_qi - xi(Lambda_vi)) zeta_z - (zeta_qi - Lambda_vi) Lambda_z
/// and the recovered data y_i = Lambda_vi, g = Lambda_z / zeta_z. Errors when
/// zeta depends on a velocity.
InverseResult extended_inverse_check(const SODESystem& sode, const ActionFunction& zeta, const SamplePlan& plan,
                                     const Tolerances& tol = {});

/// Necessary conditions for representability with a velocity-independent
/// action function, with r the z-rate and a the accelerations:
///   D_i = a_j r_{vi vj} + v_j r_{vi qj} - r_qi,   E_i = r_vi r_z - r r_{vi z}.
/// Residuals: zero-set mismatch indicator (min(|D|,|E|) <= 1e-8 < 1e-6 < max),
/// spread of D_i/E_i across i, and max |d(D_i/E_i)/dv_k|; ratio terms only
/// where |E_i| > 1e-6.
CheckReport di_ei_diagnostics(const SODESystem& sode, const SamplePlan& plan, const Tolerances& tol = {});

}  // namespace herglotz
