#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "herglotz/contact.hpp"
#include "herglotz/report.hpp"

namespace herglotz {

struct Trajectory {
  std::vector<double> times;
  std::vector<StatePoint> states;

  int dim() const { return states.empty() ? 0 : states.front().dim(); }
};

/// Integration stopped because the field could not be evaluated. The partial
/// trajectory ends at the last good state.
class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, Trajectory partial) : Error(what), partial_(std::move(partial)) {}
  const Trajectory& partial() const { return partial_; }

 private:
  Trajectory partial_;
};

/// State derivative in flat (q, v, z) order.
using RateFunction = std::function<Eigen::VectorXd(const StatePoint&)>;

/// Classical fixed-step RK4 with states at t = k dt; the final step is
/// shortened to land on t_end.
Trajectory integrate(const RateFunction& rate, const StatePoint& p0, double t_end, double dt);
Trajectory integrate(const CoordVectorField& field, const StatePoint& p0, double t_end, double dt);

/// A curve t -> q(t) on [0, 1] sampled on a strictly increasing grid.
struct SampledCurve {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> positions;
  std::optional<std::vector<Eigen::VectorXd>> velocities;
  /// Second derivatives; only meaningful alongside velocities.
  std::optional<std::vector<Eigen::VectorXd>> accelerations;

  int dim() const { return positions.empty() ? 0 : static_cast<int>(positions.front().size()); }
  void validate() const;
  /// Supplied velocities, else centered differences (one-sided at the ends).
  std::vector<Eigen::VectorXd> velocity_samples() const;

  /// Projection of a trajectory defined on [0, 1] to (q, v), with
  /// accelerations from second-order differences of the velocities.
  static SampledCurve from_trajectory(const Trajectory& traj);
};

/// Solves Z' = L(q(t), v(t), Z), Z(0) = z0 by RK4 on the curve's grid and
/// returns Z at the curve times. Step midpoints are linear interpolants
/// unless derivatives are supplied: velocities make q cubic Hermite and
/// accelerations do the same for v, giving a fourth-order scheme. A
/// Lagrangian written in a zeta-chart gives zeta along the lifted curve.
std::vector<double> z_operator(const Expr& L, const ParamSet& params, const SampledCurve& curve, double z0);

/// Z(1) - z0.
double action(const Expr& L, const ParamSet& params, const SampledCurve& curve, double z0);

/// Central differences D = (A(c + eps d) - A(c - eps d)) / (2 eps) along
/// d = sin(j pi t) e_k for j = 1..n_perturbations and every coordinate k.
/// Passes iff max |D| <= stat_tol (1 + |A(c)|).
CheckReport stationarity_test(const Expr& L, const ParamSet& params, const SampledCurve& curve, double z0,
                              int n_perturbations, double amplitude, double stat_tol = 1e-3);

/// CSV with header t,q1..qn,v1..vn,z followed by the extra columns; numbers
/// use 17 significant digits.
void write_csv(std::ostream& os, const Trajectory& traj,
               const std::vector<std::pair<std::string, std::vector<double>>>& extra = {});

}  // namespace herglotz
