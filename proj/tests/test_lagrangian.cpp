#include <gtest/gtest.h>

#include <random>

#include "herglotz/lagrangian.hpp"
#include "oracles.hpp"

using namespace herglotz;

namespace {

const ParamSet kGam{{"gam", 0.1}};
const ParamSet kParachute{{"m", 1}, {"gam", 1}, {"g", 9.8}};
const char* kParachuteL = "0.5*v1^2 - m*g/(2*gam)*(exp(2*gam*q1) - 1) + 2*gam*v1*z";

ContactLagrangianSystem damped() { return ContactLagrangianSystem(1, parse("0.5*v1^2 - gam*z", 1), kGam); }

// r_i = d/dt(L_vi) - L_qi - L_z L_vi along (v, a, L), all derivatives by
// finite differences.
Eigen::VectorXd fd_residual(const Expr& L, const ParamSet& params, const StatePoint& p, const Eigen::VectorXd& a) {
  const int n = p.dim();
  const Eigen::VectorXd g = oracle::fd_gradient(L, p, params);
  const Eigen::MatrixXd H = oracle::fd_hessian(L, p, params);
  const double Lval = eval(L, p, params);
  Eigen::VectorXd r(n);
  for (int i = 0; i < n; ++i) {
    double ddt = H(n + i, 2 * n) * Lval;
    for (int j = 0; j < n; ++j) ddt += H(n + i, j) * p.v[j] + H(n + i, n + j) * a[j];
    r[i] = ddt - g[i] - g[2 * n] * g[n + i];
  }
  return r;
}

}  // namespace

TEST(LagrangianForm, Examples) {
  const StatePoint p({0.4}, {1.5}, -0.7);
  const CoordOneForm eta = lagrangian_form(damped());
  EXPECT_EQ(eta.at(p), Eigen::Vector3d(-1.5, 0, 1));
  const CoordOneForm free = lagrangian_form(ContactLagrangianSystem(1, parse("0.5*v1^2", 1)));
  EXPECT_EQ(free.at(p), Eigen::Vector3d(-1.5, 0, 1));
  const CoordOneForm para = lagrangian_form(ContactLagrangianSystem(1, parse(kParachuteL, 1), kParachute));
  EXPECT_NEAR(para.at(p)[0], -(1.5 + 2 * 1.0 * -0.7), 1e-15);
  EXPECT_EQ(para.at(p)[1], 0.0);
  EXPECT_EQ(para.at(p)[2], 1.0);
}

TEST(Energy, Examples) {
  const StatePoint p({0.4}, {1.5}, -0.7);
  EXPECT_NEAR(eval(energy(damped()), p, kGam), 0.5 * 1.5 * 1.5 + 0.1 * -0.7, 1e-15);
  EXPECT_EQ(eval(energy(ContactLagrangianSystem(1, parse("3.5", 1))), p, {}), -3.5);
  const ContactLagrangianSystem homog(1, parse("v1*sin(q1) + v1*z", 1));
  EXPECT_NEAR(eval(energy(homog), p, {}), 0.0, 1e-15);
}

TEST(Regularity, Examples) {
  const Regularity free = regularity(ContactLagrangianSystem(1, parse("0.5*v1^2", 1)), StatePoint({0}, {0}, 0));
  EXPECT_EQ(free.det, 1.0);
  EXPECT_TRUE(free.ok);
  const ContactLagrangianSystem quartic(1, parse("v1^4", 1));
  const Regularity r = regularity(quartic, StatePoint({0}, {0}, 0));
  EXPECT_EQ(r.det, 0.0);
  EXPECT_FALSE(r.ok);
  EXPECT_THROW(herglotz_accelerations_at(quartic, StatePoint({0}, {0}, 0)), RegularityError);
}

TEST(HerglotzField, DampedExample) {
  const Eigen::VectorXd x = herglotz_field(damped()).at(StatePoint({0}, {2}, 0));
  EXPECT_NEAR(x[0], 2.0, 1e-15);
  EXPECT_NEAR(x[1], -0.2, 1e-15);
  EXPECT_NEAR(x[2], 2.0, 1e-15);
}

TEST(HerglotzField, ParachuteAcceleration) {
  const ContactLagrangianSystem L(1, parse(kParachuteL, 1), kParachute);
  const CoordVectorField xi = herglotz_field(L);
  EXPECT_NEAR(xi.at(StatePoint({0}, {2}, 0))[1], -5.8, 1e-12);
  std::mt19937_64 rng(21);
  for (int k = 0; k < 100; ++k) {
    const StatePoint p = oracle::random_point(rng, 1);
    EXPECT_NEAR(xi.at(p)[1], p.v[0] * p.v[0] - 9.8, 1e-9);
    EXPECT_NEAR(herglotz_accelerations_at(L, p)[0], p.v[0] * p.v[0] - 9.8, 1e-9);
  }
}

TEST(HerglotzResidual, Examples) {
  const ContactLagrangianSystem L = damped();
  const StatePoint p({0}, {2}, 0);
  EXPECT_NEAR(herglotz_residual(L, p, Eigen::VectorXd::Constant(1, 0.0))[0], 0.2, 1e-15);
  EXPECT_NEAR(herglotz_residual(L, p, herglotz_accelerations_at(L, p))[0], 0.0, 1e-10);
  const ContactLagrangianSystem free(1, parse("0.5*v1^2", 1));
  EXPECT_EQ(herglotz_residual(free, p, Eigen::VectorXd::Constant(1, 1.0))[0], 1.0);
}

TEST(SymbolicAlgebra, DeterminantAndCramer) {
  const std::vector<Expr> m = {ops::constant(2), ops::constant(1), ops::constant(0), ops::constant(1),
                               ops::constant(3), ops::constant(1), ops::constant(0), ops::constant(1),
                               ops::constant(4)};
  EXPECT_DOUBLE_EQ(eval(symbolic_determinant(m, 3), StatePoint(), {}), 18.0);
  const std::vector<Expr> b = {ops::constant(3), ops::constant(5), ops::constant(5)};
  const auto x = symbolic_solve(m, b, 3);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(eval(x[i], StatePoint(), {}), 1.0, 1e-15);
}

class RandomLagrangian : public ::testing::TestWithParam<int> {};

TEST_P(RandomLagrangian, HerglotzFieldEqualsContactHamiltonianField) {
  std::mt19937_64 rng(500 + GetParam());
  const int n = 1 + GetParam() % 3;
  const ContactLagrangianSystem L(n, parse(oracle::random_lagrangian(rng, n), n));
  const CoordVectorField xi = herglotz_field(L);
  const ContactHamiltonianSystem H(lagrangian_form(L), energy(L));
  for (int k = 0; k < 100; ++k) {
    const StatePoint p = oracle::random_point(rng, n);
    ASSERT_TRUE(regularity(L, p).ok);
    const Eigen::VectorXd a = xi.at(p);
    EXPECT_LE((a - hamiltonian_field(H, p)).lpNorm<Eigen::Infinity>(), 1e-8) << to_string(L.lagrangian());
    EXPECT_EQ(a[2 * n], eval(L.lagrangian(), p, {}));
    for (int i = 0; i < n; ++i) EXPECT_EQ(a[i], p.v[i]);

    const Eigen::VectorXd acc = a.segment(n, n);
    const double scale = 1.0 + L.acceleration_rhs_at(p).lpNorm<Eigen::Infinity>();
    EXPECT_LE(herglotz_residual(L, p, acc).lpNorm<Eigen::Infinity>(), 1e-10 * scale);
    EXPECT_LE((herglotz_accelerations_at(L, p) - acc).lpNorm<Eigen::Infinity>(), 1e-10 * scale);
    EXPECT_LE(fd_residual(L.lagrangian(), {}, p, acc).lpNorm<Eigen::Infinity>(), 1e-4);
  }
}

TEST_P(RandomLagrangian, ContractResidualsVanish) {
  std::mt19937_64 rng(700 + GetParam());
  const int n = 1 + GetParam() % 3;
  const ContactLagrangianSystem L(n, parse(oracle::random_lagrangian(rng, n), n));
  const ContractProbe probe = herglotz_contract(L, herglotz_field(L));
  for (int k = 0; k < 100; ++k) {
    const ContractResiduals r = probe.at(oracle::random_point(rng, n));
    EXPECT_LE(r.contraction, 1e-8);
    EXPECT_LE(r.lie, 1e-8);
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomLagrangian, ::testing::Range(0, 12));

TEST(HerglotzResidual, MatchesFiniteDifferenceExpansion) {
  std::mt19937_64 rng(31);
  const ContactLagrangianSystem L(2, parse("0.5*v1^2 + 0.5*v2^2 + k*q1*q2 - gam*z*(1 + 0.1*v1^2)", 2),
                                  {{"k", 0.5}, {"gam", 0.1}});
  for (int k = 0; k < 20; ++k) {
    const StatePoint p = oracle::random_point(rng, 2);
    Eigen::VectorXd a(2);
    a << oracle::uniform(rng, -1, 1), oracle::uniform(rng, -1, 1);
    EXPECT_LE((herglotz_residual(L, p, a) - fd_residual(L.lagrangian(), L.params(), p, a)).lpNorm<Eigen::Infinity>(),
              1e-5);
  }
}
