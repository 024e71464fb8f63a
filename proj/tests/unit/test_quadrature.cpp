#include <gtest/gtest.h>

#include <cmath>

#include "nsfemdg/quadrature.hpp"

namespace nsfemdg {
namespace {

double factorial(int k) { return std::tgamma(k + 1.0); }

// Mean over the reference simplex of prod lambda_i^{e_i}:
// dim! prod e_i! / (dim + sum e_i)!.
double simplex_mean(const std::vector<int>& e, int dim) {
  int total = 0;
  double num = factorial(dim);
  for (int k : e) {
    total += k;
    num *= factorial(k);
  }
  return num / factorial(dim + total);
}

TEST(Quadrature, TetRulesExact) {
  for (int degree = 0; degree <= 8; ++degree) {
    const TetRule r = tet_rule(degree);
    double w = 0.0;
    for (std::size_t q = 0; q < r.size(); ++q) {
      w += r.weights[q];
      EXPECT_NEAR(r.points[q].sum(), 1.0, 1e-14);
      EXPECT_GE(r.points[q].minCoeff(), 0.0);
    }
    EXPECT_NEAR(w, 1.0, 1e-14) << degree;
    for (int a = 0; a <= degree; ++a) {
      for (int b = 0; a + b <= degree; ++b) {
        for (int c = 0; a + b + c <= degree; ++c) {
          double s = 0.0;
          for (std::size_t q = 0; q < r.size(); ++q) {
            const auto& p = r.points[q];
            s += r.weights[q] * std::pow(p[1], a) * std::pow(p[2], b) * std::pow(p[3], c);
          }
          EXPECT_NEAR(s, simplex_mean({a, b, c}, 3), 1e-14) << degree << ": " << a << b << c;
        }
      }
    }
  }
}

TEST(Quadrature, TriangleRulesExact) {
  for (int degree = 0; degree <= 8; ++degree) {
    const TriangleRule r = triangle_rule(degree);
    double w = 0.0;
    for (std::size_t q = 0; q < r.size(); ++q) w += r.weights[q];
    EXPECT_NEAR(w, 1.0, 1e-14);
    for (int a = 0; a <= degree; ++a) {
      for (int b = 0; a + b <= degree; ++b) {
        double s = 0.0;
        for (std::size_t q = 0; q < r.size(); ++q) {
          s += r.weights[q] * std::pow(r.points[q][1], a) * std::pow(r.points[q][2], b);
        }
        EXPECT_NEAR(s, simplex_mean({a, b}, 2), 1e-14) << degree << ": " << a << b;
      }
    }
  }
}

TEST(Quadrature, DefaultRulesHaveDocumentedShape) {
  EXPECT_EQ(tet_rule(1).size(), 1u);
  EXPECT_EQ(tet_rule(2).size(), 4u);
  EXPECT_EQ(triangle_rule(1).size(), 1u);
  const TriangleRule e = triangle_rule(2);
  ASSERT_EQ(e.size(), 3u);
  for (std::size_t q = 0; q < 3; ++q) {
    // Edge midpoints: two coordinates 1/2, one 0.
    EXPECT_NEAR(e.points[q].minCoeff(), 0.0, 1e-15);
    EXPECT_NEAR(e.points[q].maxCoeff(), 0.5, 1e-15);
  }
}

TEST(Quadrature, GaussLegendre) {
  for (int n = 1; n <= 8; ++n) {
    std::vector<double> x;
    std::vector<double> w;
    gauss_legendre_unit(n, x, w);
    ASSERT_EQ(x.size(), static_cast<std::size_t>(n));
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += w[i] * std::pow(x[i], k);
      EXPECT_NEAR(s, 1.0 / (k + 1), 1e-14) << n << " " << k;
    }
  }
}

}  // namespace
}  // namespace nsfemdg
