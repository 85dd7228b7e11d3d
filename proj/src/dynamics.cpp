#include "herglotz/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>

namespace herglotz {

Trajectory integrate(const RateFunction& rate, const StatePoint& p0, double t_end, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error("integrate: dt must be positive");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw Error("integrate: t_end must be non-negative");
  const int n = p0.dim();
  const long steps = static_cast<long>(std::ceil(t_end / dt - 1e-9));

  Trajectory traj;
  traj.times.push_back(0.0);
  traj.states.push_back(p0);
  Eigen::VectorXd x = p0.flat();
  double t = 0.0;
  const auto f = [&](const Eigen::VectorXd& y) {
    Eigen::VectorXd k = rate(StatePoint::from_flat(y, n));
    if (!k.allFinite()) throw DomainError("non-finite rate");
    return k;
  };
  for (long s = 1; s <= steps; ++s) {
    const double t_next = s == steps ? t_end : static_cast<double>(s) * dt;
    const double h = t_next - t;
    try {
      const Eigen::VectorXd k1 = f(x);
      const Eigen::VectorXd k2 = f(x + 0.5 * h * k1);
      const Eigen::VectorXd k3 = f(x + 0.5 * h * k2);
      const Eigen::VectorXd k4 = f(x + h * k3);
      x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    } catch (const Error& e) {
      throw IntegrationError("integration failed after t = " + std::to_string(t) + ": " + e.what(), traj);
    }
    t = t_next;
    traj.times.push_back(t);
    traj.states.push_back(StatePoint::from_flat(x, n));
  }
  return traj;
}

Trajectory integrate(const CoordVectorField& field, const StatePoint& p0, double t_end, double dt) {
  if (field.dim() != p0.dim()) throw Error("integrate: field and initial state dimensions differ");
  return integrate([&](const StatePoint& p) { return field.at(p); }, p0, t_end, dt);
}

void SampledCurve::validate() const {
  if (times.size() < 2) throw Error("curve: need at least two samples");
  if (positions.size() != times.size()) throw Error("curve: positions and times differ in length");
  if (velocities && velocities->size() != times.size()) throw Error("curve: velocities and times differ in length");
  if (accelerations && !velocities) throw Error("curve: accelerations need velocities");
  if (accelerations && accelerations->size() != times.size())
    throw Error("curve: accelerations and times differ in length");
  if (times.front() != 0.0 || times.back() != 1.0) throw Error("curve: times must run from 0 to 1");
  for (std::size_t k = 1; k < times.size(); ++k)
    if (!(times[k] > times[k - 1])) throw Error("curve: times must be strictly increasing");
  const auto n = positions.front().size();
  for (const auto& p : positions)
    if (p.size() != n) throw Error("curve: positions have inconsistent dimension");
}

std::vector<Eigen::VectorXd> SampledCurve::velocity_samples() const {
  if (velocities) return *velocities;
  const std::size_t m = times.size();
  std::vector<Eigen::VectorXd> out(m);
  out[0] = (positions[1] - positions[0]) / (times[1] - times[0]);
  out[m - 1] = (positions[m - 1] - positions[m - 2]) / (times[m - 1] - times[m - 2]);
  for (std::size_t k = 1; k + 1 < m; ++k)
    out[k] = (positions[k + 1] - positions[k - 1]) / (times[k + 1] - times[k - 1]);
  return out;
}

namespace {

// Second-order three-point derivative on a possibly non-uniform grid.
std::vector<Eigen::VectorXd> derivative_samples(const std::vector<double>& t, const std::vector<Eigen::VectorXd>& y) {
  const std::size_t m = t.size();
  std::vector<Eigen::VectorXd> out(m);
  if (m < 3) {
    const Eigen::VectorXd d = (y[m - 1] - y[0]) / (t[m - 1] - t[0]);
    out.assign(m, d);
    return out;
  }
  const auto three_point = [&](std::size_t i, std::size_t c) {
    const double x0 = t[i], x1 = t[i + 1], x2 = t[i + 2], x = t[c];
    return ((2 * x - x1 - x2) / ((x0 - x1) * (x0 - x2))) * y[i] + ((2 * x - x0 - x2) / ((x1 - x0) * (x1 - x2))) * y[i + 1] +
           ((2 * x - x0 - x1) / ((x2 - x0) * (x2 - x1))) * y[i + 2];
  };
  out[0] = three_point(0, 0);
  for (std::size_t k = 1; k + 1 < m; ++k) out[k] = three_point(k - 1, k);
  out[m - 1] = three_point(m - 3, m - 1);
  return out;
}

}  // namespace

SampledCurve SampledCurve::from_trajectory(const Trajectory& traj) {
  SampledCurve c;
  c.times = traj.times;
  std::vector<Eigen::VectorXd> vel;
  for (const auto& s : traj.states) {
    c.positions.push_back(Eigen::Map<const Eigen::VectorXd>(s.q.data(), s.dim()));
    vel.push_back(Eigen::Map<const Eigen::VectorXd>(s.v.data(), s.dim()));
  }
  c.accelerations = derivative_samples(c.times, vel);
  c.velocities = std::move(vel);
  c.validate();
  return c;
}

namespace {

StatePoint state(const Eigen::VectorXd& q, const Eigen::VectorXd& v, double z) {
  return StatePoint(std::vector<double>(q.data(), q.data() + q.size()),
                    std::vector<double>(v.data(), v.data() + v.size()), z);
}

std::vector<double> z_sequence(const Expr& L, const ParamSet& params, const std::vector<double>& t,
                               const std::vector<Eigen::VectorXd>& q, const std::vector<Eigen::VectorXd>& v,
                               const std::vector<Eigen::VectorXd>* a, double z0, bool hermite_q) {
  std::vector<double> Z(t.size());
  Z[0] = z0;
  for (std::size_t k = 0; k + 1 < t.size(); ++k) {
    const double h = t[k + 1] - t[k];
    // Linear midpoints are O(h^2); the Hermite corrections restore RK4's O(h^4).
    Eigen::VectorXd qm = 0.5 * (q[k] + q[k + 1]);
    if (hermite_q) qm += (h / 8.0) * (v[k] - v[k + 1]);
    Eigen::VectorXd vm = 0.5 * (v[k] + v[k + 1]);
    if (a) vm += (h / 8.0) * ((*a)[k] - (*a)[k + 1]);
    const double z = Z[k];
    const double k1 = eval(L, state(q[k], v[k], z), params);
    const double k2 = eval(L, state(qm, vm, z + 0.5 * h * k1), params);
    const double k3 = eval(L, state(qm, vm, z + 0.5 * h * k2), params);
    const double k4 = eval(L, state(q[k + 1], v[k + 1], z + h * k3), params);
    Z[k + 1] = z + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return Z;
}

}  // namespace

std::vector<double> z_operator(const Expr& L, const ParamSet& params, const SampledCurve& curve, double z0) {
  curve.validate();
  return z_sequence(L, params, curve.times, curve.positions, curve.velocity_samples(),
                    curve.accelerations ? &*curve.accelerations : nullptr, z0, curve.velocities.has_value());
}

double action(const Expr& L, const ParamSet& params, const SampledCurve& curve, double z0) {
  return z_operator(L, params, curve, z0).back() - z0;
}

CheckReport stationarity_test(const Expr& L, const ParamSet& params, const SampledCurve& curve, double z0,
                              int n_perturbations, double amplitude, double stat_tol) {
  curve.validate();
  if (n_perturbations < 1) throw Error("stationarity_test: need at least one perturbation");
  if (!(amplitude > 0.0)) throw Error("stationarity_test: amplitude must be positive");

  const int n = curve.dim();
  const std::vector<Eigen::VectorXd> vel = curve.velocity_samples();
  const double A = action(L, params, curve, z0);

  CheckReport r;
  r.task = "stationarity";
  r.tolerances.pass_tol = stat_tol * (1.0 + std::abs(A));
  r.tolerances.fail_tol = r.tolerances.pass_tol;

  const auto perturbed_action = [&](int k, int j, double eps) {
    SampledCurve c;
    c.times = curve.times;
    c.positions = curve.positions;
    std::vector<Eigen::VectorXd> v = vel;
    const double w = j * std::numbers::pi;
    for (std::size_t s = 0; s < c.times.size(); ++s) {
      const double t = c.times[s];
      c.positions[s][k] += eps * std::sin(w * t);
      if (curve.velocities) v[s][k] += eps * w * std::cos(w * t);
    }
    if (curve.velocities) c.velocities = std::move(v);
    return action(L, params, c, z0);
  };

  for (int k = 0; k < n; ++k) {
    for (int j = 1; j <= n_perturbations; ++j) {
      const double D = (perturbed_action(k, j, amplitude) - perturbed_action(k, j, -amplitude)) / (2.0 * amplitude);
      ResidualRecord rec;
      rec.label = "q" + std::to_string(k + 1) + ":sin(" + std::to_string(j) + "*pi*t)";
      rec.residuals = {{"directional_derivative", D}};
      r.records.push_back(std::move(rec));
    }
  }
  r.diagnostics.push_back("action = " + std::to_string(A));
  r.finalize();
  return r;
}

void write_csv(std::ostream& os, const Trajectory& traj,
               const std::vector<std::pair<std::string, std::vector<double>>>& extra) {
  const int n = traj.dim();
  os << "t";
  for (int i = 0; i < n; ++i) os << ",q" << i + 1;
  for (int i = 0; i < n; ++i) os << ",v" << i + 1;
  os << ",z";
  for (const auto& [name, col] : extra) {
    if (col.size() != traj.times.size()) throw Error("write_csv: column '" + name + "' has wrong length");
    os << ',' << name;
  }
  os << '\n';
  const auto old_precision = os.precision(17);
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const auto& s = traj.states[k];
    os << traj.times[k];
    for (double x : s.q) os << ',' << x;
    for (double x : s.v) os << ',' << x;
    os << ',' << s.z;
    for (const auto& col : extra) os << ',' << col.second[k];
    os << '\n';
  }
  os.precision(old_precision);
}

}  // namespace herglotz
