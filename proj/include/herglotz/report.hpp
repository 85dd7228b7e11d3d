#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "herglotz/expr.hpp"

namespace herglotz {

enum class Verdict { pass, fail, inconclusive, error };

std::string to_string(Verdict v);
/// 0 pass, 1 fail, 2 error or inconclusive.
int exit_code(Verdict v);

struct Tolerances {
  double pass_tol = 1e-8;
  double fail_tol = 1e-4;
  double det_tol = 1e-10;

  void validate() const;
};

struct Interval {
  double lo = -1.0;
  double hi = 1.0;
};

/// Where a check evaluates its pointwise residuals.
///
/// random: `count` points drawn uniformly from the box with a 64-bit Mersenne
/// twister seeded by `seed`. grid: `count` equally spaced values per axis,
/// endpoints included, in lexicographic order (last coordinate fastest).
/// points: an explicit list.
struct SamplePlan {
  enum class Mode { random, grid, points };

  Mode mode = Mode::random;
  std::vector<Interval> bounds;  // 2n+1 entries in (q, v, z) order
  int count = 200;
  std::uint64_t seed = 0;
  std::vector<StatePoint> points;

  static SamplePlan box(int n, double lo, double hi, int count, std::uint64_t seed);
  static SamplePlan explicit_points(std::vector<StatePoint> pts);

  int dim() const;
  void validate() const;
};

std::string to_string(SamplePlan::Mode m);

/// Points of the plan accepted by `accept`. Random plans redraw rejected
/// points, giving up after 10 * count draws; grid and explicit plans drop them.
/// Throws Error when the plan cannot supply a single point, or a random plan
/// runs out of draws.
std::vector<StatePoint> sample_points(const SamplePlan& plan,
                                      const std::function<bool(const StatePoint&)>& accept = {});

using NamedValues = std::vector<std::pair<std::string, double>>;

struct ResidualRecord {
  std::optional<StatePoint> point;
  std::string label;
  NamedValues residuals;  // contribute to max_residual
  NamedValues info;       // reported only
};

struct CheckReport {
  std::string task;
  Verdict verdict = Verdict::error;
  double max_residual = 0.0;
  Tolerances tolerances;
  std::optional<SamplePlan> plan;
  std::vector<ResidualRecord> records;
  std::vector<std::string> diagnostics;

  /// Recomputes max_residual and the verdict from the records unless a
  /// verdict was forced by fail() or error().
  void finalize();
  void fail(const std::string& why);
  void error(const std::string& why);
  bool forced() const { return forced_; }

  double max_of(const std::string& name) const;

 private:
  bool forced_ = false;
};

/// Report as JSON. The metadata object (timestamp) is the only part that
/// differs between identical runs and is omitted when `with_metadata` is false.
nlohmann::ordered_json to_json(const CheckReport& r, bool with_metadata = true);
nlohmann::ordered_json to_json(const SamplePlan& plan);
nlohmann::ordered_json to_json(const StatePoint& p);

}  // namespace herglotz
