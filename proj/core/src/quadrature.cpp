#include "nsfemdg/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "nsfemdg/common.hpp"

namespace nsfemdg {

void gauss_legendre_unit(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw InvalidArgument("gauss_legendre_unit: need at least one node");
  nodes.assign(static_cast<std::size_t>(n), 0.0);
  weights.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    // Newton on P_n starting from the Chebyshev-like guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pn = n == 1 ? x : p1;
      const double pnm1 = n == 1 ? 1.0 : p0;
      dp = n * (x * pn - pnm1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[static_cast<std::size_t>(i)] = 0.5 * (1.0 - x);
    weights[static_cast<std::size_t>(i)] = 0.5 * w;
  }
}

TetRule tet_rule(int degree) {
  TetRule rule;
  rule.degree = degree;
  if (degree <= 1) {
    rule.points.push_back(TetRule::Point::Constant(0.25));
    rule.weights.push_back(1.0);
    return rule;
  }
  if (degree == 2) {
    const double a = 0.5854101966249685;
    const double b = 0.1381966011250105;
    for (int i = 0; i < 4; ++i) {
      TetRule::Point p = TetRule::Point::Constant(b);
      p[i] = a;
      rule.points.push_back(p);
      rule.weights.push_back(0.25);
    }
    return rule;
  }
  // x = s, y = (1-s) t, z = (1-s)(1-t) w with Jacobian (1-s)^2 (1-t); the
  // mapped integrand has degree <= degree + 2 in each variable.
  const int n = (degree + 4) / 2;
  std::vector<double> g;
  std::vector<double> w;
  gauss_legendre_unit(n, g, w);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        const double s = g[i];
        const double t = g[j];
        const double r = g[k];
        const double x = s;
        const double y = (1.0 - s) * t;
        const double z = (1.0 - s) * (1.0 - t) * r;
        TetRule::Point p;
        p << 1.0 - x - y - z, x, y, z;
        rule.points.push_back(p);
        // Reference volume 1/6, so normalised weight carries a factor 6.
        rule.weights.push_back(6.0 * w[i] * w[j] * w[k] * (1.0 - s) * (1.0 - s) * (1.0 - t));
      }
    }
  }
  return rule;
}

TriangleRule triangle_rule(int degree) {
  TriangleRule rule;
  rule.degree = degree;
  if (degree <= 1) {
    rule.points.push_back(TriangleRule::Point::Constant(1.0 / 3.0));
    rule.weights.push_back(1.0);
    return rule;
  }
  if (degree == 2) {
    for (int i = 0; i < 3; ++i) {
      TriangleRule::Point p = TriangleRule::Point::Constant(0.5);
      p[i] = 0.0;
      rule.points.push_back(p);
      rule.weights.push_back(1.0 / 3.0);
    }
    return rule;
  }
  const int n = (degree + 3) / 2;
  std::vector<double> g;
  std::vector<double> w;
  gauss_legendre_unit(n, g, w);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double x = g[i];
      const double y = (1.0 - g[i]) * g[j];
      TriangleRule::Point p;
      p << 1.0 - x - y, x, y;
      rule.points.push_back(p);
      rule.weights.push_back(2.0 * w[i] * w[j] * (1.0 - g[i]));
    }
  }
  return rule;
}

}  // namespace nsfemdg
