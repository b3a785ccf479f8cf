#pragma once

#include "pwsgd/linalg.hpp"

#include <functional>
#include <string>

namespace pwsgd {

struct Constraint {
  enum class Kind { unconstrained, l1_ball };
  Kind kind = Kind::unconstrained;
  double radius = 0.0;

  static Constraint none() { return {}; }
  static Constraint l1_ball(double radius);
  bool active() const { return kind == Kind::l1_ball; }
  bool contains(const Vector& x, double slack = 1e-12) const;
};

/// Euclidean projection onto {x : ||x||_1 <= radius}.
Vector project_l1_ball(const Vector& z, double radius);

/// argmin_x 1/2 sum_j h_j (x_j - z_j)^2 s.t. ||x||_1 <= radius, with h_j > 0.
Vector project_l1_ball_weighted(const Vector& z, const Vector& h, double radius);

struct QpResult {
  Vector x;
  Index iterations = 0;
  double gap = 0.0;
};

/// argmin over the l1 ball of q(x) = c^T x + 1/2 x^T Q x, Q given as an operator, by
/// FISTA with adaptive restart. Stops when the Frank-Wolfe gap
///   grad^T x + radius * ||grad||_inf
/// drops below tol * max(1, radius * ||grad||_inf). `lipschitz` bounds lambda_max(Q).
QpResult l1_ball_qp(const std::function<Vector(const Vector&)>& q_apply, const Vector& c, double radius,
                    double lipschitz, const Vector& x0, double tol = 1e-10, Index max_iters = 10000);

}  // namespace pwsgd
