#pragma once

#include <vector>

#include <Eigen/Core>

namespace nsfemdg {

/// Quadrature on a simplex in barycentric coordinates. Weights sum to 1, so
/// an integral is `measure * sum_q weight_q * f(x_q)`.
template <int NumBary>
struct SimplexRule {
  using Point = Eigen::Matrix<double, NumBary, 1>;
  std::vector<Point> points;
  std::vector<double> weights;
  int degree = 0;

  std::size_t size() const { return weights.size(); }
};

using TetRule = SimplexRule<4>;
using TriangleRule = SimplexRule<3>;

/// Rule exact for polynomials of total degree `degree` on tetrahedra.
/// degree <= 1: centroid; degree 2: the symmetric 4-point rule; higher:
/// collapsed (Duffy) Gauss-Legendre product rules.
TetRule tet_rule(int degree);

/// degree <= 1: centroid; degree 2: edge-midpoint rule; higher: collapsed
/// Gauss-Legendre product rules.
TriangleRule triangle_rule(int degree);

/// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre_unit(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace nsfemdg
