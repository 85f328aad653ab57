// Test-only oracles, independent of the library implementation paths they
// cross-check.
#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

namespace oracles {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Nearest point of { x : member(x) } to y by dense grid search over
// [lo, hi]^2 with `steps` points per axis (2-D only).
inline Vector grid_projection(const std::function<bool(const Vector&)>& member,
                              const Vector& y, double lo, double hi, int steps) {
  double best = std::numeric_limits<double>::infinity();
  Vector arg(2), best_arg(2);
  for (int i = 0; i <= steps; ++i) {
    for (int j = 0; j <= steps; ++j) {
      arg[0] = lo + (hi - lo) * i / steps;
      arg[1] = lo + (hi - lo) * j / steps;
      if (!member(arg)) continue;
      double d = (arg - y).squaredNorm();
      if (d < best) {
        best = d;
        best_arg = arg;
      }
    }
  }
  return best_arg;
}

// Solve ((1-delta)/(1+delta))^e = delta for e > 0 by bisection.
inline double bisect_epsilon(double delta, int iters = 200) {
  double ratio = (1.0 - delta) / (1.0 + delta);
  auto f = [&](double e) { return std::pow(ratio, e) - delta; };
  double lo = 0.0, hi = 1.0;
  while (f(hi) > 0.0) hi *= 2.0;  // f(0) = 1 - delta > 0, f decreasing
  for (int i = 0; i < iters; ++i) {
    double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Largest observed ||T(x)-T(y)|| / ||x-y|| over random pairs.
inline double sampled_lipschitz(const std::function<Vector(const Vector&)>& T,
                                Eigen::Index dim, int pairs, std::uint64_t seed,
                                double radius = 10.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-radius, radius);
  double worst = 0.0;
  for (int k = 0; k < pairs; ++k) {
    Vector x(dim), y(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      x[i] = unif(rng);
      y[i] = unif(rng);
    }
    double dn = (x - y).norm();
    if (dn < 1e-12) continue;
    worst = std::max(worst, (T(x) - T(y)).norm() / dn);
  }
  return worst;
}

// Projected gradient descent for min f over C (gradient oracle + projector).
inline Vector projected_gradient(const std::function<Vector(const Vector&)>& grad,
                                 const std::function<Vector(const Vector&)>& proj,
                                 Vector x, double step, long iters,
                                 double stop = 1e-15) {
  for (long k = 0; k < iters; ++k) {
    Vector next = proj(x - step * grad(x));
    if ((next - x).norm() <= stop) return next;
    x = std::move(next);
  }
  return x;
}

// Proximal gradient descent for min f + g (gradient + prox oracles).
inline Vector proximal_gradient(
    const std::function<Vector(const Vector&)>& grad,
    const std::function<Vector(double, const Vector&)>& prox_g, Vector x,
    double step, long iters, double stop = 1e-15) {
  for (long k = 0; k < iters; ++k) {
    Vector next = prox_g(step, x - step * grad(x));
    if ((next - x).norm() <= stop) return next;
    x = std::move(next);
  }
  return x;
}

// Minimizer of ||x - T(x)|| over a dense 2-D grid.
inline Vector grid_fixed_point(const std::function<Vector(const Vector&)>& T,
                               double lo, double hi, int steps) {
  double best = std::numeric_limits<double>::infinity();
  Vector arg(2), best_arg(2);
  for (int i = 0; i <= steps; ++i) {
    for (int j = 0; j <= steps; ++j) {
      arg[0] = lo + (hi - lo) * i / steps;
      arg[1] = lo + (hi - lo) * j / steps;
      double d = (arg - T(arg)).norm();
      if (d < best) {
        best = d;
        best_arg = arg;
      }
    }
  }
  return best_arg;
}

}  // namespace oracles
