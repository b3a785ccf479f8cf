#include "pwsgd/constraints.hpp"

#include "pwsgd/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace pwsgd {

Constraint Constraint::l1_ball(double radius) {
  if (!(radius >= 0.0) || !std::isfinite(radius)) throw InvalidArgument("l1_ball: radius must be finite and >= 0");
  Constraint c;
  c.kind = Kind::l1_ball;
  c.radius = radius;
  return c;
}

bool Constraint::contains(const Vector& x, double slack) const {
  if (kind == Kind::unconstrained) return true;
  return x.lpNorm<1>() <= radius * (1.0 + slack) + slack;
}

Vector project_l1_ball(const Vector& z, double radius) {
  if (!(radius >= 0.0)) throw InvalidArgument("l1 projection: radius must be >= 0");
  if (z.lpNorm<1>() <= radius) return z;
  if (radius == 0.0) return Vector::Zero(z.size());
  // Sort-based threshold search (Duchi et al. style).
  std::vector<double> u(static_cast<std::size_t>(z.size()));
  for (Index j = 0; j < z.size(); ++j) u[j] = std::abs(z(j));
  std::sort(u.begin(), u.end(), std::greater<>());
  double cum = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    cum += u[k];
    const double t = (cum - radius) / static_cast<double>(k + 1);
    if (u[k] > t) theta = t;
  }
  Vector x(z.size());
  for (Index j = 0; j < z.size(); ++j) {
    const double m = std::max(std::abs(z(j)) - theta, 0.0);
    x(j) = std::copysign(m, z(j));
  }
  return x;
}

Vector project_l1_ball_weighted(const Vector& z, const Vector& h, double radius) {
  if (z.size() != h.size()) throw InvalidArgument("weighted projection: size mismatch");
  if ((h.array() <= 0.0).any()) throw InvalidArgument("weighted projection: weights must be positive");
  if (!(radius >= 0.0)) throw InvalidArgument("weighted projection: radius must be >= 0");
  if (z.lpNorm<1>() <= radius) return z;
  if (radius == 0.0) return Vector::Zero(z.size());
  // x_j = sign(z_j) max(|z_j| - tau / h_j, 0); phi(tau) = sum_j max(|z_j| - tau/h_j, 0) is
  // piecewise linear and decreasing with breakpoints tau_j = h_j |z_j|.
  const Index d = z.size();
  std::vector<Index> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(),
            [&](Index a, Index b) { return h(a) * std::abs(z(a)) > h(b) * std::abs(z(b)); });
  // Walk breakpoints from largest tau down; keep active sums sum|z_j| and sum 1/h_j.
  double sum_z = 0.0;
  double sum_inv_h = 0.0;
  double tau = 0.0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const Index j = order[k];
    sum_z += std::abs(z(j));
    sum_inv_h += 1.0 / h(j);
    const double candidate = (sum_z - radius) / sum_inv_h;
    const double next_break = k + 1 < order.size() ? h(order[k + 1]) * std::abs(z(order[k + 1])) : 0.0;
    if (candidate >= next_break) {
      tau = candidate;
      break;
    }
    tau = candidate;
  }
  Vector x(d);
  for (Index j = 0; j < d; ++j) {
    const double m = std::max(std::abs(z(j)) - tau / h(j), 0.0);
    x(j) = std::copysign(m, z(j));
  }
  return x;
}

QpResult l1_ball_qp(const std::function<Vector(const Vector&)>& q_apply, const Vector& c, double radius,
                    double lipschitz, const Vector& x0, double tol, Index max_iters) {
  if (!(lipschitz > 0.0)) throw InvalidArgument("l1_ball_qp: lipschitz constant must be positive");
  auto gap_of = [&](const Vector& x, const Vector& grad) {
    const double ginf = grad.lpNorm<Eigen::Infinity>();
    return std::pair{grad.dot(x) + radius * ginf, tol * std::max(1.0, radius * ginf)};
  };
  auto objective = [&](const Vector& x, const Vector& qx) { return c.dot(x) + 0.5 * x.dot(qx); };

  QpResult res;
  Vector x = project_l1_ball(x0, radius);
  Vector qx = q_apply(x);
  Vector grad = c + qx;
  {
    auto [gap, thresh] = gap_of(x, grad);
    res.gap = gap;
    if (gap <= thresh) {
      res.x = std::move(x);
      return res;
    }
  }
  const double step = 1.0 / lipschitz;
  Vector y = x;
  Vector qy = qx;
  double t = 1.0;
  double fx = objective(x, qx);
  for (Index it = 1; it <= max_iters; ++it) {
    const Vector grad_y = c + qy;
    Vector x_new = project_l1_ball(y - step * grad_y, radius);
    Vector qx_new = q_apply(x_new);
    const double f_new = objective(x_new, qx_new);
    const Vector grad_new = c + qx_new;
    auto [gap, thresh] = gap_of(x_new, grad_new);
    res.iterations = it;
    res.gap = gap;
    if (gap <= thresh) {
      res.x = std::move(x_new);
      return res;
    }
    if (f_new > fx && t > 1.0) {
      // Restart momentum when the objective goes up; a plain step from y = x is always accepted.
      t = 1.0;
      y = x;
      qy = qx;
      continue;
    }
    const double t_new = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    const double beta = (t - 1.0) / t_new;
    y = x_new + beta * (x_new - x);
    qy = qx_new + beta * (qx_new - qx);
    x = std::move(x_new);
    qx = std::move(qx_new);
    fx = f_new;
    t = t_new;
  }
  throw ConvergenceError("l1_ball_qp: duality gap " + std::to_string(res.gap) + " after " +
                         std::to_string(max_iters) + " iterations");
}

}  // namespace pwsgd
