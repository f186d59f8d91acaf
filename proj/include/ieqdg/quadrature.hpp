// Gauss-Legendre quadrature rules on [-1,1], with 2D tensorization handled by Space.

#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "ieqdg/errors.hpp"

namespace ieqdg {

/// One-dimensional Gauss-Legendre rule: G nodes in [-1,1], weights summing to 2.
struct QuadratureRule {
  int order = 0;            ///< number of nodes G
  Eigen::VectorXd nodes;    ///< ascending
  Eigen::VectorXd weights;  ///< positive
};

namespace detail {

/// Legendre P_n(x) and its derivative by the three-term recurrence.
inline void legendre_with_derivative(int n, double x, double& p, double& dp) {
  double p0 = 1.0, p1 = x;
  if (n == 0) {
    p = 1.0;
    dp = 0.0;
    return;
  }
  for (int j = 1; j < n; ++j) {
    const double p2 = ((2.0 * j + 1.0) * x * p1 - j * p0) / (j + 1.0);
    p0 = p1;
    p1 = p2;
  }
  p = p1;
  dp = n * (x * p1 - p0) / (x * x - 1.0);
}

}  // namespace detail

/// Build the G-point Gauss-Legendre rule by Newton iteration on P_G.
inline QuadratureRule gauss_rule(int order) {
  if (order < 1 || order > 16) {
    throw ConfigError("gauss_rule: order must be in [1,16], got " + std::to_string(order));
  }
  QuadratureRule rule;
  rule.order = order;
  rule.nodes.resize(order);
  rule.weights.resize(order);

  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Standard initial guess for the i-th root (descending order).
    double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    double p = 0.0, dp = 1.0;
    for (int it = 0; it < 64; ++it) {
      detail::legendre_with_derivative(order, x, p, dp);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    detail::legendre_with_derivative(order, x, p, dp);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // Store ascending and enforce exact symmetry of the rule.
    rule.nodes[i] = -x;
    rule.nodes[order - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
  return rule;
}

}  // namespace ieqdg
