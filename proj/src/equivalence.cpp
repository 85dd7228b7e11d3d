#include "herglotz/equivalence.hpp"

#include <cmath>
#include <sstream>

namespace herglotz {

using namespace ops;

namespace {

constexpr double kEstimateTol = 1e-8;
constexpr double kVanishTol = 1e-12;

CheckReport start(const std::string& task, const SamplePlan& plan, const Tolerances& tol) {
  CheckReport r;
  r.task = task;
  r.plan = plan;
  r.tolerances = tol;
  return r;
}

std::string at_point(const StatePoint& p) {
  std::ostringstream os;
  os.precision(17);
  os << "(q=";
  for (std::size_t i = 0; i < p.q.size(); ++i) os << (i ? "," : "") << p.q[i];
  os << "; v=";
  for (std::size_t i = 0; i < p.v.size(); ++i) os << (i ? "," : "") << p.v[i];
  os << "; z=" << p.z << ")";
  return os.str();
}

bool require_dim(CheckReport& r, int plan_dim, int n) {
  if (plan_dim == n) return true;
  r.error("sample plan dimension " + std::to_string(plan_dim) + " does not match system dimension " +
          std::to_string(n));
  r.finalize();
  return false;
}

// Evaluates f at (q, v, zeta(x)).
double at_zeta(const Expr& f, const ActionFunction& zeta, const StatePoint& x, const ParamSet& params) {
  StatePoint y = x;
  y.z = zeta.at(x);
  return eval(f, y, params);
}

std::vector<StatePoint> frame_points(const SamplePlan& plan, const ActionFunction& zeta) {
  return sample_points(plan, [&](const StatePoint& p) { return std::abs(zeta.dz_at(p)) > kEstimateTol; });
}

}  // namespace

CheckReport conformal_similarity_check(const ContactHamiltonianSystem& a, const ContactHamiltonianSystem& b,
                                       const std::optional<Expr>& f, const SamplePlan& plan, const Tolerances& tol,
                                       const ParamSet& f_params) {
  CheckReport r = start("check-conformal", plan, tol);
  if (a.dim() != b.dim()) {
    r.error("systems have different dimensions");
    r.finalize();
    return r;
  }
  if (!require_dim(r, plan.dim(), a.dim())) return r;
  const ParamSet fp = ParamSet::merged(ParamSet::merged(a.params(), b.params()), f_params);

  bool estimable = f.has_value();
  bool vanished = false;
  for (const auto& p : sample_points(plan)) {
    const Eigen::VectorXd ea = a.eta().at(p), eb = b.eta().at(p);
    const double ha = a.hamiltonian_at(p), hb = b.hamiltonian_at(p);
    double fv;
    if (f) {
      fv = eval(*f, p, fp);
    } else if (std::abs(ha) > kEstimateTol) {
      fv = hb / ha;
      estimable = true;
    } else {
      fv = ea.dot(eb) / ea.squaredNorm();
    }
    if (!vanished && std::abs(fv) <= kVanishTol) {
      vanished = true;
      r.fail("conformal factor vanishes at " + at_point(p));
    }
    r.records.push_back({p,
                         {},
                         {{"eta", (eb - fv * ea).lpNorm<Eigen::Infinity>()}, {"hamiltonian", std::abs(hb - fv * ha)}},
                         {{"f", fv}}});
  }
  if (!estimable) r.error("conformal factor inestimable: |H| <= 1e-8 at every sampled point");
  r.finalize();
  return r;
}

CheckReport dynamical_equivalence_check(const ContactHamiltonianSystem& a, const ContactHamiltonianSystem& b,
                                        const SamplePlan& plan, const Tolerances& tol) {
  CheckReport r = start("check-dynamical", plan, tol);
  if (a.dim() != b.dim()) {
    r.error("systems have different dimensions");
    r.finalize();
    return r;
  }
  if (!require_dim(r, plan.dim(), a.dim())) return r;
  for (const auto& p : sample_points(plan)) {
    try {
      const Eigen::VectorXd xa = hamiltonian_field(a, p);
      const Eigen::VectorXd xb = hamiltonian_field(b, p);
      r.records.push_back({p, {}, {{"field", (xa - xb).lpNorm<Eigen::Infinity>()}}, {}});
    } catch (const SingularSystem& e) {
      r.error(std::string(e.what()) + " at " + at_point(p));
      break;
    }
  }
  r.finalize();
  return r;
}

CheckReport zero_set_diagnostic(const ContactHamiltonianSystem& a, const ContactHamiltonianSystem& b,
                                const SamplePlan& plan, const Tolerances& tol, double zero_tol) {
  CheckReport r = start("check-zero-set", plan, tol);
  if (a.dim() != b.dim()) {
    r.error("systems have different dimensions");
    r.finalize();
    return r;
  }
  if (!require_dim(r, plan.dim(), a.dim())) return r;
  const std::vector<StatePoint> pts = sample_points(plan);
  std::vector<double> ha(pts.size()), hb(pts.size());
  long positive = 0, negative = 0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    ha[k] = a.hamiltonian_at(pts[k]);
    hb[k] = b.hamiltonian_at(pts[k]);
    if (std::abs(ha[k]) > zero_tol && std::abs(hb[k]) > zero_tol) (ha[k] * hb[k] > 0 ? positive : negative)++;
  }
  const double majority = positive >= negative ? 1.0 : -1.0;
  long mismatches = 0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const bool za = std::abs(ha[k]) <= zero_tol, zb = std::abs(hb[k]) <= zero_tol;
    bool mismatch = za != zb;
    if (!za && !zb) mismatch = std::copysign(1.0, ha[k] * hb[k]) != majority;
    mismatches += mismatch;
    r.records.push_back({pts[k], {}, {{"mismatch", mismatch ? 1.0 : 0.0}}, {{"H_a", ha[k]}, {"H_b", hb[k]}}});
  }
  r.diagnostics.push_back("zero-set mismatches: " + std::to_string(mismatches) + " of " +
                          std::to_string(pts.size()) + " points");
  r.finalize();
  return r;
}

CheckReport horizontal_similarity_check(const CoordVectorField& xi, const CoordVectorField& xibar,
                                        const ActionFunction& zeta, const SamplePlan& plan, const Tolerances& tol) {
  CheckReport r = start("check-horizontal", plan, tol);
  const int n = xi.dim();
  if (xibar.dim() != n || zeta.dim() != n) {
    r.error("fields and action function have different dimensions");
    r.finalize();
    return r;
  }
  if (!require_dim(r, plan.dim(), n)) return r;
  for (const auto* f : {&xi, &xibar}) {
    const CheckReport s = extended_sode_check(*f, plan, tol);
    if (s.verdict != Verdict::pass) {
      r.error("non-SODE input: q-components differ from v by " + std::to_string(s.max_residual));
      r.finalize();
      return r;
    }
  }
  const ParamSet params = ParamSet::merged(ParamSet::merged(xi.params(), xibar.params()), zeta.params());
  const Expr xi_zeta = xi.apply(zeta.expr());
  for (const auto& p : frame_points(plan, zeta)) {
    double da = 0.0;
    for (int i = 0; i < n; ++i)
      da = std::max(da, std::abs(eval(xi.component(n + i), p, params) -
                                 at_zeta(xibar.component(n + i), zeta, p, params)));
    const double db = std::abs(eval(xi_zeta, p, params) - at_zeta(xibar.component(2 * n), zeta, p, params));
    r.records.push_back({p, {}, {{"acceleration", da}, {"action_rate", db}}, {{"zeta_z", zeta.dz_at(p)}}});
  }
  r.finalize();
  return r;
}

CheckReport projectability_check(const CoordVectorField& xi, const SamplePlan& plan, const Tolerances& tol) {
  CheckReport r = start("check-projectable", plan, tol);
  const int n = xi.dim();
  if (!require_dim(r, plan.dim(), n)) return r;
  std::vector<Expr> daz;
  for (int i = 0; i < n; ++i) daz.push_back(differentiate(xi.component(n + i), CoordId::z()));
  for (const auto& p : sample_points(plan)) {
    double mx = 0.0;
    for (const auto& e : daz) mx = std::max(mx, std::abs(eval(e, p, xi.params())));
    r.records.push_back({p, {}, {{"da_dz", mx}}, {}});
  }
  r.finalize();
  return r;
}

namespace {

struct Pair {
  ContactLagrangianSystem L;
  ExtendedLagrangianSystem Lbar;
};

// Checks both regularity conditions; records an error and returns false on
// the first violation.
bool regular_at(CheckReport& r, const Pair& s, const StatePoint& p, const Tolerances& tol) {
  const Regularity rl = regularity(s.L, p, tol.det_tol);
  if (!rl.ok) {
    std::ostringstream os;
    os << "z-regularity violated at " << at_point(p) << " (det W = " << rl.det << ")";
    r.error(os.str());
    return false;
  }
  const Regularity rb = zeta_regularity(s.Lbar, p, tol.det_tol);
  if (!rb.ok) {
    std::ostringstream os;
    os << "zeta-regularity violated at " << at_point(p) << " (det W^zeta = " << rb.det << ")";
    r.error(os.str());
    return false;
  }
  return true;
}

std::optional<Pair> make_systems(CheckReport& r, const ContactLagrangianSystem& L, const Expr& lbar,
                              const ActionFunction& zeta, const ParamSet& lbar_params) {
  if (zeta.dim() != L.dim()) {
    r.error("action function dimension does not match the Lagrangian");
    return std::nullopt;
  }
  try {
    ExtendedLagrangianSystem bar(L.dim(), pull_back(lbar, zeta), zeta, ParamSet::merged(L.params(), lbar_params));
    return Pair{L, std::move(bar)};
  } catch (const Error& e) {
    r.error(e.what());
    return std::nullopt;
  }
}

}  // namespace

CheckReport strong_equivalence_check(const ContactLagrangianSystem& L, const Expr& lbar_zeta_chart,
                                     const ActionFunction& zeta, const SamplePlan& plan, const Tolerances& tol,
                                     const ParamSet& lbar_params) {
  CheckReport r = start("check-strong-eq", plan, tol);
  const int n = L.dim();
  if (!require_dim(r, plan.dim(), n)) return r;
  const auto s = make_systems(r, L, lbar_zeta_chart, zeta, lbar_params);
  if (!s) {
    r.finalize();
    return r;
  }
  const ParamSet& params = s->Lbar.params();

  Expr lift = mul(zeta.dz(), L.lagrangian());
  for (int i = 0; i < n; ++i) lift = add(lift, mul(v(i), zeta.d(CoordId::q(i))));
  const Expr defect = sub(lift, s->Lbar.lagrangian());
  const CoordOneForm eta_bar = extended_lagrangian_form(s->Lbar);
  const CoordOneForm eta_l = lagrangian_form(L);

  for (const auto& p : frame_points(plan, zeta)) {
    if (!regular_at(r, *s, p, tol)) break;
    double zv = 0.0;
    for (int i = 0; i < n; ++i) zv = std::max(zv, std::abs(eval(zeta.d(CoordId::v(i)), p, params)));
    const double lag = std::abs(eval(defect, p, params));
    const double conformal = (eta_bar.at(p) - zeta.dz_at(p) * eta_l.at(p)).lpNorm<Eigen::Infinity>();
    r.records.push_back({p, {}, {{"zeta_v", zv}, {"lagrangian", lag}, {"conformal", conformal}}, {}});
  }
  r.finalize();
  return r;
}

CheckReport general_equivalence_check(const ContactLagrangianSystem& L, const Expr& lbar_zeta_chart,
                                      const ActionFunction& zeta, const SamplePlan& plan, const Tolerances& tol,
                                      const ParamSet& lbar_params) {
  CheckReport r = start("check-eq", plan, tol);
  const int n = L.dim();
  if (!require_dim(r, plan.dim(), n)) return r;
  const auto s = make_systems(r, L, lbar_zeta_chart, zeta, lbar_params);
  if (!s) {
    r.finalize();
    return r;
  }
  const ParamSet& params = s->Lbar.params();
  const CoordVectorField xi = herglotz_field(L);
  const CoordVectorField xibar = zeta_herglotz_field(s->Lbar);

  const Expr l_condition = sub(s->Lbar.lagrangian(), xi.apply(zeta.expr()));
  std::vector<Expr> p_condition;
  for (int i = 0; i < n; ++i) {
    const Expr& pi = s->Lbar.momentum(i);
    p_condition.push_back(sub(sub(xi.apply(pi), s->Lbar.chart_dq(i)), mul(s->Lbar.chart_dzeta(), pi)));
  }

  double worst_field = 0.0;
  for (const auto& p : frame_points(plan, zeta)) {
    if (!regular_at(r, *s, p, tol)) break;
    const double lc = std::abs(eval(l_condition, p, params));
    double pc = 0.0;
    for (const auto& e : p_condition) pc = std::max(pc, std::abs(eval(e, p, params)));
    const double mismatch = (xi.at(p) - xibar.at(p)).lpNorm<Eigen::Infinity>();
    worst_field = std::max(worst_field, mismatch);
    r.records.push_back({p, {}, {{"l_condition", lc}, {"p_condition", pc}}, {{"field_mismatch", mismatch}}});
  }
  if (!r.forced() && worst_field > tol.fail_tol)
    r.fail("Herglotz fields differ by " + std::to_string(worst_field));
  r.finalize();
  return r;
}

}  // namespace herglotz
