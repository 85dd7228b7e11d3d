#include "herglotz/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <limits>
#include <random>

namespace herglotz {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "pass";
    case Verdict::fail:
      return "fail";
    case Verdict::inconclusive:
      return "inconclusive";
    case Verdict::error:
      return "error";
  }
  return "error";
}

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return 0;
    case Verdict::fail:
      return 1;
    default:
      return 2;
  }
}

void Tolerances::validate() const {
  if (!(pass_tol > 0.0) || !(fail_tol > 0.0) || !(det_tol > 0.0))
    throw Error("tolerances must be positive");
  if (!(pass_tol < fail_tol)) throw Error("pass_tol must be smaller than fail_tol");
}

SamplePlan SamplePlan::box(int n, double lo, double hi, int count, std::uint64_t seed) {
  SamplePlan p;
  p.mode = Mode::random;
  p.bounds.assign(2 * n + 1, Interval{lo, hi});
  p.count = count;
  p.seed = seed;
  return p;
}

SamplePlan SamplePlan::explicit_points(std::vector<StatePoint> pts) {
  SamplePlan p;
  p.mode = Mode::points;
  p.count = static_cast<int>(pts.size());
  p.points = std::move(pts);
  if (!p.points.empty()) p.bounds.assign(2 * p.points.front().dim() + 1, Interval{});
  return p;
}

int SamplePlan::dim() const {
  if (mode == Mode::points && !points.empty()) return points.front().dim();
  return (static_cast<int>(bounds.size()) - 1) / 2;
}

void SamplePlan::validate() const {
  if (mode == Mode::points) {
    if (points.empty()) throw Error("sample plan: explicit point list is empty");
    const int n = points.front().dim();
    for (const auto& p : points)
      if (p.dim() != n) throw Error("sample plan: explicit points have inconsistent dimension");
    return;
  }
  if (count < 1) throw Error("sample plan: count must be at least 1");
  if (bounds.size() < 3 || bounds.size() % 2 == 0) throw Error("sample plan: bounds must have 2n+1 entries");
  for (const auto& b : bounds)
    if (!std::isfinite(b.lo) || !std::isfinite(b.hi) || b.lo > b.hi)
      throw Error("sample plan: bounds must be finite with lo <= hi");
}

std::string to_string(SamplePlan::Mode m) {
  switch (m) {
    case SamplePlan::Mode::random:
      return "seeded-random";
    case SamplePlan::Mode::grid:
      return "grid";
    case SamplePlan::Mode::points:
      return "points";
  }
  return "seeded-random";
}

namespace {

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

StatePoint point_from(const std::vector<double>& x, int n) {
  std::vector<double> q(x.begin(), x.begin() + n);
  std::vector<double> v(x.begin() + n, x.begin() + 2 * n);
  return StatePoint(std::move(q), std::move(v), x[2 * n]);
}

}  // namespace

std::vector<StatePoint> sample_points(const SamplePlan& plan, const std::function<bool(const StatePoint&)>& accept) {
  plan.validate();
  const auto ok = [&](const StatePoint& p) { return !accept || accept(p); };
  std::vector<StatePoint> out;

  switch (plan.mode) {
    case SamplePlan::Mode::points:
      for (const auto& p : plan.points)
        if (ok(p)) out.push_back(p);
      break;

    case SamplePlan::Mode::random: {
      const int n = plan.dim();
      const int m = 2 * n + 1;
      std::mt19937_64 rng(plan.seed);
      const long max_draws = 10L * plan.count;
      long draws = 0;
      std::vector<double> x(m);
      while (static_cast<int>(out.size()) < plan.count) {
        if (draws >= max_draws)
          throw Error("sample plan: too many rejected points (" + std::to_string(draws - static_cast<long>(out.size())) +
                      " of " + std::to_string(draws) + " draws)");
        for (int a = 0; a < m; ++a) x[a] = plan.bounds[a].lo + (plan.bounds[a].hi - plan.bounds[a].lo) * unit(rng);
        ++draws;
        StatePoint p = point_from(x, n);
        if (ok(p)) out.push_back(std::move(p));
      }
      break;
    }

    case SamplePlan::Mode::grid: {
      const int n = plan.dim();
      const int m = 2 * n + 1;
      const double total = std::pow(static_cast<double>(plan.count), m);
      if (total > 2e6) throw Error("sample plan: grid too large");
      std::vector<int> idx(m, 0);
      std::vector<double> x(m);
      const auto coord = [&](int a) {
        if (plan.count == 1) return 0.5 * (plan.bounds[a].lo + plan.bounds[a].hi);
        const double t = static_cast<double>(idx[a]) / (plan.count - 1);
        return plan.bounds[a].lo + (plan.bounds[a].hi - plan.bounds[a].lo) * t;
      };
      for (;;) {
        for (int a = 0; a < m; ++a) x[a] = coord(a);
        StatePoint p = point_from(x, n);
        if (ok(p)) out.push_back(std::move(p));
        int a = m - 1;
        while (a >= 0 && ++idx[a] == plan.count) idx[a--] = 0;
        if (a < 0) break;
      }
      break;
    }
  }
  if (out.empty()) throw Error("sample plan: no admissible points");
  return out;
}

void CheckReport::finalize() {
  double mx = 0.0;
  bool nonfinite = false;
  for (const auto& rec : records)
    for (const auto& [name, value] : rec.residuals) {
      if (!std::isfinite(value)) {
        nonfinite = true;
        continue;
      }
      mx = std::max(mx, std::abs(value));
    }
  max_residual = nonfinite ? std::numeric_limits<double>::infinity() : mx;
  if (forced_) return;
  if (nonfinite) {
    verdict = Verdict::fail;
    diagnostics.push_back("non-finite residual encountered");
  } else if (max_residual <= tolerances.pass_tol) {
    verdict = Verdict::pass;
  } else if (max_residual > tolerances.fail_tol) {
    verdict = Verdict::fail;
  } else {
    verdict = Verdict::inconclusive;
  }
}

void CheckReport::fail(const std::string& why) {
  if (!(forced_ && verdict == Verdict::error)) verdict = Verdict::fail;
  forced_ = true;
  diagnostics.push_back(why);
}

void CheckReport::error(const std::string& why) {
  verdict = Verdict::error;
  forced_ = true;
  diagnostics.push_back(why);
}

double CheckReport::max_of(const std::string& name) const {
  double mx = 0.0;
  for (const auto& rec : records) {
    for (const auto& [k, value] : rec.residuals)
      if (k == name) mx = std::max(mx, std::abs(value));
    for (const auto& [k, value] : rec.info)
      if (k == name) mx = std::max(mx, std::abs(value));
  }
  return mx;
}

namespace {

nlohmann::ordered_json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

nlohmann::ordered_json values(const NamedValues& vals) {
  nlohmann::ordered_json o = nlohmann::ordered_json::object();
  for (const auto& [k, x] : vals) o[k] = number(x);
  return o;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

nlohmann::ordered_json to_json(const StatePoint& p) {
  nlohmann::ordered_json o;
  o["q"] = p.q;
  o["v"] = p.v;
  o["z"] = p.z;
  return o;
}

nlohmann::ordered_json to_json(const SamplePlan& plan) {
  nlohmann::ordered_json o;
  o["mode"] = to_string(plan.mode);
  o["seed"] = plan.seed;
  nlohmann::ordered_json b = nlohmann::ordered_json::object();
  const int n = plan.dim();
  for (std::size_t a = 0; a < plan.bounds.size() && plan.mode != SamplePlan::Mode::points; ++a)
    b[CoordId::from_flat(static_cast<int>(a), n).name()] = {plan.bounds[a].lo, plan.bounds[a].hi};
  o["bounds"] = b;
  o["count"] = plan.count;
  return o;
}

nlohmann::ordered_json to_json(const CheckReport& r, bool with_metadata) {
  nlohmann::ordered_json o;
  o["task"] = r.task;
  o["verdict"] = to_string(r.verdict);
  o["max_residual"] = number(r.max_residual);
  o["tolerances"] = {{"pass_tol", r.tolerances.pass_tol},
                     {"fail_tol", r.tolerances.fail_tol},
                     {"det_tol", r.tolerances.det_tol}};
  o["sample_plan"] = r.plan ? to_json(*r.plan) : nlohmann::ordered_json(nullptr);
  nlohmann::ordered_json recs = nlohmann::ordered_json::array();
  for (const auto& rec : r.records) {
    nlohmann::ordered_json e;
    e["point"] = rec.point ? to_json(*rec.point) : nlohmann::ordered_json(nullptr);
    if (!rec.label.empty()) e["label"] = rec.label;
    e["values"] = values(rec.residuals);
    if (!rec.info.empty()) e["info"] = values(rec.info);
    recs.push_back(std::move(e));
  }
  o["residuals"] = std::move(recs);
  o["diagnostics"] = r.diagnostics;
  if (with_metadata) o["metadata"] = {{"timestamp", utc_timestamp()}};
  return o;
}

}  // namespace herglotz
