#include <gtest/gtest.h>

#include <random>

#include "herglotz/contact.hpp"
#include "herglotz/lagrangian.hpp"
#include "oracles.hpp"

using namespace herglotz;

namespace {

CoordOneForm form1(const char* dq, const char* dv, const char* dz, ParamSet params = {}) {
  return CoordOneForm(1, {parse(dq, 1), parse(dv, 1), parse(dz, 1)}, std::move(params));
}

ContactHamiltonianSystem system1(const char* dq, const char* dv, const char* dz, const char* H) {
  return ContactHamiltonianSystem(form1(dq, dv, dz), parse(H, 1));
}

double maxabs(const Eigen::VectorXd& x) { return x.lpNorm<Eigen::Infinity>(); }

}  // namespace

TEST(ExteriorDerivative, DarbouxBlock) {
  const Eigen::MatrixXd M = exterior_derivative(CoordOneForm::darboux(1), StatePoint({0.4}, {-0.3}, 2.0));
  // d(dz - v dq) = dq ^ dv.
  EXPECT_EQ(M(0, 1), 1.0);
  EXPECT_EQ(M(1, 0), -1.0);
  EXPECT_EQ(M.row(2).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(M.col(2).cwiseAbs().maxCoeff(), 0.0);
}

TEST(ExteriorDerivative, ClosedForms) {
  const StatePoint p({0.7}, {0.1}, -0.2);
  EXPECT_TRUE(exterior_derivative(form1("0", "0", "1"), p).isZero(0.0));
  EXPECT_TRUE(exterior_derivative(form1("q1", "0", "0"), p).isZero(0.0));
}

TEST(ExteriorDerivative, AntisymmetricAndMatchesFiniteDifferences) {
  std::mt19937_64 rng(7);
  const CoordOneForm a(2,
                       {parse("sin(q2*v1)", 2), parse("z*q1", 2), parse("v2^2", 2), parse("exp(0.2*q1)*z", 2),
                        parse("q1*q2*v1", 2)});
  for (int k = 0; k < 10; ++k) {
    const StatePoint p = oracle::random_point(rng, 2);
    const Eigen::MatrixXd M = exterior_derivative(a, p);
    EXPECT_EQ((M + M.transpose()).cwiseAbs().maxCoeff(), 0.0);
    for (int i = 0; i < 5; ++i) {
      const Eigen::VectorXd gi = oracle::fd_gradient(a.component(i), p, {});
      for (int j = 0; j < 5; ++j) {
        const Eigen::VectorXd gj = oracle::fd_gradient(a.component(j), p, {});
        EXPECT_NEAR(M(i, j), gj[i] - gi[j], 1e-8);
      }
    }
  }
}

TEST(Reeb, Examples) {
  const StatePoint p({0.3}, {-1.2}, 4.0);
  EXPECT_LE(maxabs(reeb_field(CoordOneForm::darboux(1), p) - Eigen::Vector3d(0, 0, 1)), 1e-15);
  EXPECT_LE(maxabs(reeb_field(form1("-v1", "0", "2"), p) - Eigen::Vector3d(0, 0, 0.5)), 1e-15);
  const ContactLagrangianSystem L(1, parse("0.5*v1^2 - gam*z", 1), {{"gam", 0.1}});
  EXPECT_LE(maxabs(reeb_field(lagrangian_form(L), p) - Eigen::Vector3d(0, 0, 1)), 1e-15);
}

TEST(Reeb, DefiningEquationsOnNonDarbouxForm) {
  std::mt19937_64 rng(11);
  // (1 + q^2 + z^2) times the Darboux form is contact everywhere.
  const CoordOneForm eta = CoordOneForm::darboux(2).scaled(parse("1 + q1^2 + z^2", 2));
  for (int k = 0; k < 20; ++k) {
    const StatePoint p = oracle::random_point(rng, 2);
    const Eigen::VectorXd R = reeb_field(eta, p);
    EXPECT_NEAR(eta.at(p).dot(R), 1.0, 1e-10);
    EXPECT_LE(maxabs(exterior_derivative(eta, p).transpose() * R), 1e-10);
  }
}

TEST(Reeb, NonContactFormThrows) {
  EXPECT_THROW(reeb_field(form1("0", "0", "1"), StatePoint({0}, {0}, 0)), SingularSystem);
  EXPECT_LT(contact_condition(form1("0", "0", "1"), StatePoint({0}, {0}, 0)), 1e-10);
  EXPECT_GT(contact_condition(CoordOneForm::darboux(1), StatePoint({0}, {0}, 0)), 1e-10);
}

TEST(HamiltonianField, ConstantHamiltonianGivesReeb) {
  const auto sys = system1("-v1", "0", "1", "-1");
  EXPECT_LE(maxabs(hamiltonian_field(sys, StatePoint({2}, {3}, -1)) - Eigen::Vector3d(0, 0, 1)), 1e-15);
}

TEST(HamiltonianField, DynamicallyEquivalentPair) {
  const StatePoint p({1}, {1}, 1);
  const auto a = system1("-v1", "0", "1", "v1*q1 + z");
  const auto b = system1("v1", "0", "1", "z - v1*q1");
  EXPECT_LE(maxabs(hamiltonian_field(a, p) - Eigen::Vector3d(1, -2, -1)), 1e-12);
  EXPECT_LE(maxabs(hamiltonian_field(b, p) - Eigen::Vector3d(1, -2, -1)), 1e-12);
}

TEST(HamiltonianField, DarbouxCoordinateFormula) {
  // X = H_p d/dq - (H_q + p H_z) d/dp + (p H_p - H) d/dz.
  std::mt19937_64 rng(5);
  const Expr H = parse("v1^2*q2 + sin(q1)*z + v2*z^2", 2);
  const ContactHamiltonianSystem sys(CoordOneForm::darboux(2), H);
  for (int k = 0; k < 20; ++k) {
    const StatePoint p = oracle::random_point(rng, 2);
    const Eigen::VectorXd g = oracle::fd_gradient(H, p, {});
    const double h = eval(H, p, {});
    Eigen::VectorXd expect(5);
    expect << g[2], g[3], -(g[0] + p.v[0] * g[4]), -(g[1] + p.v[1] * g[4]), p.v[0] * g[2] + p.v[1] * g[3] - h;
    EXPECT_LE(maxabs(hamiltonian_field(sys, p) - expect), 1e-8);
  }
}

TEST(HamiltonianField, IntrinsicContract) {
  std::mt19937_64 rng(9);
  const CoordOneForm eta = CoordOneForm::darboux(2).scaled(parse("2 + sin(q2*z)", 2));
  const Expr H = parse("v1*v2 - q1^2*z + tanh(v1)", 2);
  const ContactHamiltonianSystem sys(eta, H);
  for (int k = 0; k < 50; ++k) {
    const StatePoint p = oracle::random_point(rng, 2);
    const Eigen::VectorXd X = hamiltonian_field(sys, p);
    EXPECT_NEAR(eta.at(p).dot(X), -eval(H, p, {}), 1e-8);
    const double RH = reeb_field(eta, p).dot(sys.hamiltonian_gradient_at(p));
    // (L_X eta)_b = X^c d_c eta_b + eta_c d_b X^c, with d_b X from finite
    // differences of the solver output.
    const double h = 1e-5;
    const Eigen::VectorXd x = p.flat(), ep = eta.at(p);
    for (int b = 0; b < 5; ++b) {
      Eigen::VectorXd xp = x, xm = x;
      xp[b] += h;
      xm[b] -= h;
      const Eigen::VectorXd dX =
          (hamiltonian_field(sys, StatePoint::from_flat(xp, 2)) - hamiltonian_field(sys, StatePoint::from_flat(xm, 2))) /
          (2 * h);
      const double lie = X.dot(oracle::fd_gradient(eta.component(b), p, {})) + ep.dot(dX);
      EXPECT_NEAR(lie, -RH * ep[b], 1e-6);
    }
  }
}

TEST(HamiltonianField, ConformalRescalingInvariance) {
  std::mt19937_64 rng(13);
  const Expr H = parse("v1*q1 + z + 0.3*v1^2", 1);
  const Expr f = parse("2 + cos(q1*v1) + z^2", 1);
  const ContactHamiltonianSystem a(CoordOneForm::darboux(1), H);
  const ContactHamiltonianSystem b(CoordOneForm::darboux(1).scaled(f), ops::mul(f, H));
  const ContactHamiltonianSystem c(CoordOneForm::darboux(1).scaled(ops::neg(f)), ops::neg(ops::mul(f, H)));
  for (int k = 0; k < 50; ++k) {
    const StatePoint p = oracle::random_point(rng, 1);
    EXPECT_LE(maxabs(hamiltonian_field(a, p) - hamiltonian_field(b, p)), 1e-8);
    EXPECT_LE(maxabs(hamiltonian_field(a, p) - hamiltonian_field(c, p)), 1e-8);
  }
}

TEST(ConformalFactor, HerglotzFieldOfDampedLagrangian) {
  const ContactLagrangianSystem L(1, parse("0.5*v1^2 - gam*z", 1), {{"gam", 0.1}});
  const CoordVectorField xi = herglotz_field(L);
  std::mt19937_64 rng(3);
  for (int k = 0; k < 20; ++k) {
    const StatePoint p = oracle::random_point(rng, 1);
    const ConformalFactor cf = conformal_factor(lagrangian_form(L), xi, p);
    EXPECT_NEAR(cf.g, -0.1, 1e-12);
    EXPECT_LE(cf.residual, 1e-10);
  }
}

TEST(ConformalFactor, ReebAndTranslation) {
  const StatePoint p({0.2}, {0.9}, -0.4);
  const CoordVectorField reeb(1, {ops::constant(0), ops::constant(0), ops::constant(1)});
  const ConformalFactor r = conformal_factor(CoordOneForm::darboux(1), reeb, p);
  EXPECT_EQ(r.g, 0.0);
  EXPECT_EQ(r.residual, 0.0);
  const CoordVectorField dq(1, {ops::constant(1), ops::constant(0), ops::constant(0)});
  const ConformalProbe probe(CoordOneForm::darboux(1), dq);
  EXPECT_TRUE(probe.lie_derivative(p).isZero(0.0));
  EXPECT_EQ(probe.factor(p).g, 0.0);
}

TEST(ConformalFactor, LieDerivativeAgainstFiniteDifferences) {
  // (L_X a)_b = X^c d_c a_b + a_c d_b X^c, evaluated with finite differences.
  std::mt19937_64 rng(17);
  const CoordOneForm a(1, {parse("-v1*z", 1), parse("q1^2", 1), parse("1 + v1^2", 1)});
  const CoordVectorField X(1, {parse("v1", 1), parse("sin(q1) - z", 1), parse("q1*v1", 1)});
  for (int k = 0; k < 10; ++k) {
    const StatePoint p = oracle::random_point(rng, 1);
    const Eigen::VectorXd lie = lie_derivative(a, X, p);
    const Eigen::VectorXd Xp = X.at(p), ap = a.at(p);
    for (int b = 0; b < 3; ++b) {
      double expect = 0.0;
      for (int c = 0; c < 3; ++c) {
        expect += Xp[c] * oracle::fd_gradient(a.component(b), p, {})[c];
        expect += ap[c] * oracle::fd_gradient(X.component(c), p, {})[b];
      }
      EXPECT_NEAR(lie[b], expect, 1e-8);
    }
  }
}
