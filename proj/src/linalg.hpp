#pragma once

#include <string>

#include <Eigen/Dense>

#include "herglotz/contact.hpp"

namespace herglotz::detail {

inline constexpr double kContactRatio = 1e-10;
inline constexpr double kSolveResidual = 1e-10;

/// Solves the full-column-rank overdetermined system A x = b in the least
/// squares sense and requires the residual to vanish.
inline Eigen::VectorXd solve_consistent(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const std::string& what) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const double smax = s.size() ? s[0] : 0.0;
  const double smin = s.size() ? s[s.size() - 1] : 0.0;
  if (!(smax > 0.0) || smin <= kContactRatio * smax)
    throw SingularSystem(what + ": stacked system is singular (not a contact form at this point)");
  Eigen::VectorXd x = svd.solve(b);
  const double res = (A * x - b).lpNorm<Eigen::Infinity>();
  if (!(res <= kSolveResidual * (1.0 + b.lpNorm<Eigen::Infinity>())))
    throw SingularSystem(what + ": inconsistent stacked system, residual " + std::to_string(res));
  return x;
}

}  // namespace herglotz::detail
