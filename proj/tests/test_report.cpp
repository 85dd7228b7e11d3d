#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "herglotz/report.hpp"

using namespace herglotz;

namespace {

CheckReport with_residual(double r) {
  CheckReport rep;
  rep.records.push_back({std::nullopt, "x", {{"r", r}}, {}});
  rep.finalize();
  return rep;
}

}  // namespace

TEST(Verdict, Thresholds) {
  EXPECT_EQ(with_residual(5e-9).verdict, Verdict::pass);
  EXPECT_EQ(with_residual(-5e-9).verdict, Verdict::pass);
  EXPECT_EQ(with_residual(1e-6).verdict, Verdict::inconclusive);
  EXPECT_EQ(with_residual(1e-4).verdict, Verdict::inconclusive);
  EXPECT_EQ(with_residual(2e-4).verdict, Verdict::fail);
  EXPECT_EQ(with_residual(std::numeric_limits<double>::quiet_NaN()).verdict, Verdict::fail);
  EXPECT_EQ(with_residual(-3.0).max_residual, 3.0);
}

TEST(Verdict, ForcedVerdictsSurviveFinalize) {
  CheckReport r = with_residual(0.0);
  r.error("boom");
  r.finalize();
  EXPECT_EQ(r.verdict, Verdict::error);
  CheckReport f = with_residual(0.0);
  f.fail("bad");
  f.finalize();
  EXPECT_EQ(f.verdict, Verdict::fail);
  EXPECT_EQ(f.diagnostics.back(), "bad");
}

TEST(Verdict, ExitCodes) {
  EXPECT_EQ(exit_code(Verdict::pass), 0);
  EXPECT_EQ(exit_code(Verdict::fail), 1);
  EXPECT_EQ(exit_code(Verdict::error), 2);
  EXPECT_EQ(exit_code(Verdict::inconclusive), 2);
  EXPECT_EQ(to_string(Verdict::inconclusive), "inconclusive");
}

TEST(Tolerances, Validation) {
  EXPECT_NO_THROW(Tolerances{}.validate());
  EXPECT_THROW((Tolerances{1e-4, 1e-8, 1e-10}.validate()), Error);
  EXPECT_THROW((Tolerances{-1.0, 1e-4, 1e-10}.validate()), Error);
  EXPECT_THROW((Tolerances{1e-8, 1e-4, 0.0}.validate()), Error);
}

TEST(Sampling, RandomIsSeededAndInBounds) {
  const SamplePlan plan = SamplePlan::box(2, -0.5, 2.0, 300, 42);
  const auto a = sample_points(plan), b = sample_points(plan);
  ASSERT_EQ(a.size(), 300u);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].flat(), b[k].flat());
    for (int i = 0; i < 5; ++i) {
      EXPECT_GE(a[k].flat()[i], -0.5);
      EXPECT_LT(a[k].flat()[i], 2.0);
    }
  }
  const auto c = sample_points(SamplePlan::box(2, -0.5, 2.0, 300, 43));
  EXPECT_NE(a[0].flat(), c[0].flat());
}

TEST(Sampling, RejectionRedrawsAndCaps) {
  const SamplePlan plan = SamplePlan::box(1, -1, 1, 50, 1);
  const auto pts = sample_points(plan, [](const StatePoint& p) { return p.z > 0; });
  EXPECT_EQ(pts.size(), 50u);
  for (const auto& p : pts) EXPECT_GT(p.z, 0);
  EXPECT_THROW(sample_points(plan, [](const StatePoint& p) { return p.z > 0.99; }), Error);
}

TEST(Sampling, GridIsLexicographicWithEndpoints) {
  SamplePlan plan = SamplePlan::box(1, -1, 1, 3, 0);
  plan.mode = SamplePlan::Mode::grid;
  const auto pts = sample_points(plan);
  ASSERT_EQ(pts.size(), 27u);
  EXPECT_EQ(pts[0].flat(), Eigen::Vector3d(-1, -1, -1));
  EXPECT_EQ(pts[1].flat(), Eigen::Vector3d(-1, -1, 0));
  EXPECT_EQ(pts[3].flat(), Eigen::Vector3d(-1, 0, -1));
  EXPECT_EQ(pts[26].flat(), Eigen::Vector3d(1, 1, 1));
}

TEST(Sampling, ExplicitPointsAndValidation) {
  const auto plan = SamplePlan::explicit_points({StatePoint({1}, {1}, -1), StatePoint({0}, {0}, 0)});
  EXPECT_EQ(plan.dim(), 1);
  const auto pts = sample_points(plan, [](const StatePoint& p) { return p.z < 0; });
  ASSERT_EQ(pts.size(), 1u);
  EXPECT_THROW(sample_points(SamplePlan::explicit_points({}), {}), Error);
  SamplePlan bad = SamplePlan::box(1, 1, -1, 10, 0);
  EXPECT_THROW(bad.validate(), Error);
}

TEST(ReportJson, SchemaAndMetadata) {
  CheckReport r;
  r.task = "demo";
  r.plan = SamplePlan::box(1, -1, 1, 2, 9);
  r.records.push_back({StatePoint({0.5}, {1}, 2), {}, {{"r", 1e-10}}, {{"f", 2}}});
  r.diagnostics.push_back("note");
  r.finalize();
  const auto j = to_json(r);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  const std::vector<std::string> expected = {"task",         "verdict",   "max_residual", "tolerances",
                                             "sample_plan",  "residuals", "diagnostics",  "metadata"};
  EXPECT_EQ(keys, expected);
  EXPECT_EQ(j["verdict"], "pass");
  EXPECT_EQ(j["sample_plan"]["seed"], 9);
  EXPECT_EQ(j["residuals"][0]["values"]["r"], 1e-10);
  EXPECT_FALSE(to_json(r, false).contains("metadata"));
  EXPECT_EQ(to_json(r, false).dump(), to_json(r, false).dump());
}
