#pragma once

#include <optional>

#include "herglotz/contact.hpp"
#include "herglotz/extended.hpp"
#include "herglotz/lagrangian.hpp"
#include "herglotz/report.hpp"

namespace herglotz {

/// Residuals |eta_B - f eta_A| and |H_B - f H_A|. Without f, it is estimated
/// pointwise as H_B/H_A where |H_A| > 1e-8, otherwise by least squares on the
/// forms. Fails if f vanishes at a sampled point.
CheckReport conformal_similarity_check(const ContactHamiltonianSystem& a, const ContactHamiltonianSystem& b,
                                       const std::optional<Expr>& f, const SamplePlan& plan,
                                       const Tolerances& tol = {}, const ParamSet& f_params = {});

/// Residual max |X_A - X_B| per point.
CheckReport dynamical_equivalence_check(const ContactHamiltonianSystem& a, const ContactHamiltonianSystem& b,
                                        const SamplePlan& plan, const Tolerances& tol = {});

/// Per point mismatch indicator (0 or 1). A point mismatches when exactly one
/// of |H_A|, |H_B| is at most zero_tol, or when sign(H_A H_B) differs from the
/// sign that holds at the majority of points where both are nonzero (a
/// nonvanishing continuous factor keeps that sign fixed). Passes iff no point
/// mismatches.
CheckReport zero_set_diagnostic(const ContactHamiltonianSystem& a, const ContactHamiltonianSystem& b,
                                const SamplePlan& plan, const Tolerances& tol = {}, double zero_tol = 1e-8);

/// Residuals a_i(x) - abar_i(q, v, zeta(x)) and xi(zeta)(x) - bbar(q, v, zeta(x)).
CheckReport horizontal_similarity_check(const CoordVectorField& xi, const CoordVectorField& xibar,
                                        const ActionFunction& zeta, const SamplePlan& plan,
                                        const Tolerances& tol = {});

/// Residual max |d a_i / dz|.
CheckReport projectability_check(const CoordVectorField& xi, const SamplePlan& plan, const Tolerances& tol = {});

/// Strong equivalence of L and Lbar (given in its zeta-chart): residuals
/// |zeta_v|, |zeta_z L + v.zeta_q - Lbar o phi| and the conformal relation
/// |eta^zeta_Lbar - zeta_z eta_L|.
CheckReport strong_equivalence_check(const ContactLagrangianSystem& L, const Expr& lbar_zeta_chart,
                                     const ActionFunction& zeta, const SamplePlan& plan,
                                     const Tolerances& tol = {}, const ParamSet& lbar_params = {});

/// General equivalence: residuals |Lbar o phi - xi_L(zeta)| and
/// |xi_L(p_i) - (dLbar/dq_i)_zeta - (dLbar/dzeta) p_i| with p_i the zeta-momenta
/// of Lbar. Regularity failure of either side gives verdict error. The info
/// value field_mismatch compares the two Herglotz fields; a mismatch above
/// fail_tol forces a fail.
CheckReport general_equivalence_check(const ContactLagrangianSystem& L, const Expr& lbar_zeta_chart,
                                      const ActionFunction& zeta, const SamplePlan& plan,
                                      const Tolerances& tol = {}, const ParamSet& lbar_params = {});

}  // namespace herglotz
