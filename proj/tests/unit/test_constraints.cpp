#include "pwsgd/constraints.hpp"
#include "pwsgd/error.hpp"
#include "pwsgd/linalg.hpp"

#include <gtest/gtest.h>

using namespace pwsgd;

namespace {

// Weighted l1-ball projection by bisection on the multiplier tau.
Vector weighted_projection_bisection(const Vector& z, const Vector& h, double radius) {
  if (z.lpNorm<1>() <= radius) return z;
  auto at = [&](double tau) {
    Vector x(z.size());
    for (Index j = 0; j < z.size(); ++j) {
      const double m = std::max(std::abs(z(j)) - tau / h(j), 0.0);
      x(j) = z(j) >= 0 ? m : -m;
    }
    return x;
  };
  double lo = 0.0, hi = (h.array() * z.array().abs()).maxCoeff();
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (at(mid).lpNorm<1>() > radius ? lo : hi) = mid;
  }
  return at(hi);
}

// Projected gradient with a fixed 1/L step, run long.
Vector qp_projected_gradient(const DenseMatrix& q, const Vector& c, double radius, double lip) {
  Vector x = Vector::Zero(c.size());
  for (int it = 0; it < 200000; ++it) {
    const Vector z = x - (q * x + c) / lip;
    x = weighted_projection_bisection(z, Vector::Ones(c.size()), radius);
  }
  return x;
}

}  // namespace

TEST(L1Projection, Example) {
  Vector z(2);
  z << 0.8, 0.8;
  const Vector x = project_l1_ball(z, 1.0);
  EXPECT_NEAR(x(0), 0.5, 1e-15);
  EXPECT_NEAR(x(1), 0.5, 1e-15);
}

TEST(L1Projection, InsideIsUnchanged) {
  Vector z(3);
  z << 0.1, -0.2, 0.3;
  EXPECT_EQ(project_l1_ball(z, 1.0), z);
}

TEST(L1Projection, MatchesBisectionOracle) {
  Rng rng(1);
  for (int k = 0; k < 50; ++k) {
    const Vector z = gaussian_matrix(8, 1, rng).col(0) * 3.0;
    const Vector x = project_l1_ball(z, 1.5);
    EXPECT_NEAR(x.lpNorm<1>(), 1.5, 1e-10);
    EXPECT_LE((x - weighted_projection_bisection(z, Vector::Ones(8), 1.5)).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(L1Projection, WeightedMatchesBisectionOracle) {
  Rng rng(2);
  for (int k = 0; k < 50; ++k) {
    const Vector z = gaussian_matrix(6, 1, rng).col(0) * 2.0;
    const Vector h = gaussian_matrix(6, 1, rng).col(0).cwiseAbs().array() + 0.1;
    const Vector x = project_l1_ball_weighted(z, h, 1.0);
    EXPECT_LE((x - weighted_projection_bisection(z, h, 1.0)).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(L1Projection, InvalidArguments) {
  EXPECT_THROW(project_l1_ball(Vector::Ones(2), -1.0), InvalidArgument);
  EXPECT_THROW(project_l1_ball_weighted(Vector::Ones(2), -Vector::Ones(2), 1.0), InvalidArgument);
  EXPECT_THROW(Constraint::l1_ball(-0.5), InvalidArgument);
  EXPECT_EQ(project_l1_ball(Vector::Ones(2), 0.0), Vector::Zero(2));
}

TEST(L1BallQp, DiagonalQMatchesWeightedProjection) {
  Vector h(3), z(3);
  h << 1, 4, 9;
  z << 2, -1, 0.5;
  const Vector c = -(h.array() * z.array()).matrix();
  const auto q_apply = [&](const Vector& v) { return Vector(h.array() * v.array()); };
  const QpResult res = l1_ball_qp(q_apply, c, 1.0, 9.0, Vector::Zero(3));
  EXPECT_LE((res.x - project_l1_ball_weighted(z, h, 1.0)).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LE(res.gap, 1e-10 * std::max(1.0, 1.0 * (h.array() * z.array()).abs().maxCoeff()));
}

TEST(L1BallQp, DenseQMatchesProjectedGradient) {
  Rng rng(7);
  const DenseMatrix m = gaussian_matrix(4, 3, rng);
  const DenseMatrix q = m.transpose() * m + 0.1 * DenseMatrix::Identity(3, 3);
  const Vector c = gaussian_matrix(3, 1, rng).col(0) * 5.0;
  const double lip = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(q).eigenvalues().maxCoeff();
  const auto q_apply = [&](const Vector& v) { return Vector(q * v); };
  const QpResult res = l1_ball_qp(q_apply, c, 0.7, lip, Vector::Zero(3));
  const Vector ref = qp_projected_gradient(q, c, 0.7, lip);
  EXPECT_LE((res.x - ref).cwiseAbs().maxCoeff(), 1e-7);
  EXPECT_LE(res.x.lpNorm<1>(), 0.7 + 1e-12);
}

TEST(L1BallQp, NonConvergenceSignalled) {
  Rng rng(8);
  const DenseMatrix m = gaussian_matrix(5, 5, rng);
  const DenseMatrix q = m.transpose() * m;
  const Vector c = gaussian_matrix(5, 1, rng).col(0) * 5.0;
  const auto q_apply = [&](const Vector& v) { return Vector(q * v); };
  EXPECT_THROW(l1_ball_qp(q_apply, c, 1.0, 1e6, Vector::Zero(5), 1e-14, 3), ConvergenceError);
}
