#include "herglotz/inverse.hpp"

#include <cmath>
#include <sstream>

namespace herglotz {

using namespace ops;

namespace {

constexpr double kZeroD = 1e-8;
constexpr double kNonzeroE = 1e-6;

CheckReport start(const std::string& task, const SamplePlan& plan, const Tolerances& tol) {
  CheckReport r;
  r.task = task;
  r.plan = plan;
  r.tolerances = tol;
  return r;
}

bool require_dim(CheckReport& r, const SamplePlan& plan, int n) {
  if (plan.dim() == n) return true;
  r.error("sample plan dimension does not match the SODE dimension");
  r.finalize();
  return false;
}

}  // namespace

SODESystem::SODESystem(int n, std::vector<Expr> accelerations, Expr z_rate, ParamSet params)
    : n_(n), a_(std::move(accelerations)), b_(std::move(z_rate)), params_(std::move(params)) {
  if (n < 1 || static_cast<int>(a_.size()) != n) throw Error("SODESystem: need n accelerations");
  for (const auto& e : a_)
    if (max_index(e) > n) throw Error("SODESystem: acceleration references a coordinate beyond dimension");
  if (max_index(b_) > n) throw Error("SODESystem: z-rate references a coordinate beyond dimension");
}

SODESystem SODESystem::from_field(const CoordVectorField& xi) {
  const int n = xi.dim();
  std::vector<Expr> a(xi.components().begin() + n, xi.components().begin() + 2 * n);
  return SODESystem(n, std::move(a), xi.component(2 * n), xi.params());
}

CoordVectorField SODESystem::field() const {
  std::vector<Expr> c;
  for (int i = 0; i < n_; ++i) c.push_back(v(i));
  for (const auto& e : a_) c.push_back(e);
  c.push_back(b_);
  return CoordVectorField(n_, std::move(c), params_);
}

SODESystem SODESystem::perturbed(int i, double offset) const {
  std::vector<Expr> a = a_;
  a.at(i) = add(a[i], constant(offset));
  return SODESystem(n_, std::move(a), b_, params_);
}

InverseResult naive_inverse_check(const SODESystem& sode, const SamplePlan& plan, const Tolerances& tol) {
  InverseResult out{start("check-inverse", plan, tol), std::nullopt, {}, std::nullopt};
  CheckReport& r = out.report;
  const int n = sode.dim();
  if (!require_dim(r, plan, n)) return out;

  const CoordVectorField xi = sode.field();
  const Expr& b = sode.z_rate();
  const Expr bz = differentiate(b, CoordId::z());
  std::vector<Expr> residual, hess;
  for (int i = 0; i < n; ++i) {
    const Expr bv = differentiate(b, CoordId::v(i));
    residual.push_back(sub(sub(xi.apply(bv), differentiate(b, CoordId::q(i))), mul(bz, bv)));
    for (int j = 0; j < n; ++j) hess.push_back(differentiate(bv, CoordId::v(j)));
  }

  bool singular = false;
  for (const auto& p : sample_points(plan)) {
    double mx = 0.0;
    for (const auto& e : residual) mx = std::max(mx, std::abs(eval(e, p, sode.params())));
    Eigen::MatrixXd W(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) W(i, j) = eval(hess[i * n + j], p, sode.params());
    const double det = W.determinant();
    if (!singular && !(std::abs(det) > tol.det_tol)) {
      singular = true;
      std::ostringstream os;
      os << "z-rate is not regular: det d2b/dv2 = " << det;
      r.fail(os.str());
    }
    r.records.push_back({p, {}, {{"herglotz", mx}}, {{"det_b_vv", det}}});
  }
  r.finalize();
  if (r.verdict == Verdict::pass) out.lagrangian = b;
  return out;
}

InverseResult extended_inverse_check(const SODESystem& sode, const ActionFunction& zeta, const SamplePlan& plan,
                                     const Tolerances& tol) {
  InverseResult out{start("check-inverse-ext", plan, tol), std::nullopt, {}, std::nullopt};
  CheckReport& r = out.report;
  const int n = sode.dim();
  if (zeta.dim() != n) {
    r.error("action function dimension does not match the SODE");
    r.finalize();
    return out;
  }
  if (!require_dim(r, plan, n)) return out;
  if (zeta.depends_on_velocity()) {
    r.error("action function depends on a velocity; only zeta(q, z) is supported");
    r.finalize();
    return out;
  }

  const CoordVectorField xi = sode.field();
  const ParamSet params = ParamSet::merged(sode.params(), zeta.params());
  const Expr lambda = xi.apply(zeta.expr());
  const Expr lambda_z = differentiate(lambda, CoordId::z());
  std::vector<Expr> residual;
  for (int i = 0; i < n; ++i) {
    const Expr lv = differentiate(lambda, CoordId::v(i));
    out.momenta.push_back(lv);
    const Expr lhs = mul(sub(differentiate(lambda, CoordId::q(i)), xi.apply(lv)), zeta.dz());
    const Expr rhs = mul(sub(zeta.d(CoordId::q(i)), lv), lambda_z);
    residual.push_back(sub(lhs, rhs));
  }
  const Expr g = div(lambda_z, zeta.dz());

  const auto pts = sample_points(plan, [&](const StatePoint& p) { return std::abs(zeta.dz_at(p)) > 1e-8; });
  for (const auto& p : pts) {
    double mx = 0.0;
    for (const auto& e : residual) mx = std::max(mx, std::abs(eval(e, p, params)));
    r.records.push_back({p, {}, {{"inverse_pde", mx}}, {{"g", eval(g, p, params)}}});
  }
  r.finalize();
  if (r.verdict == Verdict::pass) {
    out.lagrangian = lambda;
    out.factor = g;
  }
  return out;
}

CheckReport di_ei_diagnostics(const SODESystem& sode, const SamplePlan& plan, const Tolerances& tol) {
  CheckReport r = start("check-di-ei", plan, tol);
  const int n = sode.dim();
  if (!require_dim(r, plan, n)) return r;

  const Expr& rate = sode.z_rate();
  const Expr rz = differentiate(rate, CoordId::z());
  std::vector<Expr> D, E, ratio_dv;
  for (int i = 0; i < n; ++i) {
    const Expr rv = differentiate(rate, CoordId::v(i));
    Expr d = neg(differentiate(rate, CoordId::q(i)));
    for (int j = 0; j < n; ++j) {
      d = add(d, mul(sode.acceleration(j), differentiate(rv, CoordId::v(j))));
      d = add(d, mul(v(j), differentiate(rv, CoordId::q(j))));
    }
    const Expr e = sub(mul(rv, rz), mul(rate, differentiate(rv, CoordId::z())));
    const Expr ratio = div(d, e);
    for (int k = 0; k < n; ++k) ratio_dv.push_back(differentiate(ratio, CoordId::v(k)));
    D.push_back(d);
    E.push_back(e);
  }

  long mismatches = 0, excluded = 0;
  for (const auto& p : sample_points(plan)) {
    std::vector<double> dv(n), ev(n);
    bool mismatch = false;
    for (int i = 0; i < n; ++i) {
      dv[i] = eval(D[i], p, sode.params());
      ev[i] = eval(E[i], p, sode.params());
      const double lo = std::min(std::abs(dv[i]), std::abs(ev[i]));
      const double hi = std::max(std::abs(dv[i]), std::abs(ev[i]));
      if (lo <= kZeroD && hi > kNonzeroE) mismatch = true;
    }
    mismatches += mismatch;

    double spread = 0.0, slope = 0.0;
    std::vector<double> ratios;
    for (int i = 0; i < n; ++i) {
      if (!(std::abs(ev[i]) > kNonzeroE)) {
        ++excluded;
        continue;
      }
      ratios.push_back(dv[i] / ev[i]);
      for (int k = 0; k < n; ++k) slope = std::max(slope, std::abs(eval(ratio_dv[i * n + k], p, sode.params())));
    }
    for (std::size_t i = 0; i < ratios.size(); ++i)
      for (std::size_t j = i + 1; j < ratios.size(); ++j) spread = std::max(spread, std::abs(ratios[i] - ratios[j]));

    NamedValues info;
    for (int i = 0; i < n; ++i) {
      info.emplace_back("D" + std::to_string(i + 1), dv[i]);
      info.emplace_back("E" + std::to_string(i + 1), ev[i]);
    }
    r.records.push_back(
        {p, {}, {{"zero_set_mismatch", mismatch ? 1.0 : 0.0}, {"ratio_spread", spread}, {"ratio_dv", slope}}, info});
  }
  r.diagnostics.push_back("D/E zero-set mismatches: " + std::to_string(mismatches));
  r.diagnostics.push_back("ratio terms excluded for |E_i| <= 1e-6: " + std::to_string(excluded));
  if (mismatches > 0) r.fail("D_i and E_i vanish at different points");
  r.finalize();
  return r;
}

}  // namespace herglotz
