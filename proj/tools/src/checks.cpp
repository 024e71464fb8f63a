#include "nsfemdg/cli/checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "nsfemdg/cli/fields.hpp"
#include "nsfemdg/cli/oracles.hpp"
#include "nsfemdg/diagnostics.hpp"
#include "nsfemdg/quadrature.hpp"

namespace nsfemdg::cli {

namespace {

CheckOutcome outcome(std::string name, double value, double threshold) {
  return {std::move(name), value, threshold, value <= threshold};
}

double gradient_l2(const SmoothVectorField& v, const Mesh& mesh) {
  const TetRule rule = tet_rule(4);
  double s = 0.0;
  for (Index e = 0; e < mesh.num_elements(); ++e) {
    double acc = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      acc += rule.weights[q] * v.jacobian(mesh.point(e, rule.points[q])).squaredNorm();
    }
    s += mesh.element(e).volume * acc;
  }
  return std::sqrt(s);
}

}  // namespace

CheckOutcome check_commuting(const Mesh& mesh, std::mt19937_64& rng, int count) {
  double worst = 0.0;
  for (int i = 0; i < count; ++i) {
    const CommutingResidual r = commuting_residual(random_polynomial_field(rng, 2), mesh, 2);
    worst = std::max({worst, r.div_v, r.curl_v, r.div_n});
  }
  return outcome("commuting diagram", worst, 1e-12);
}

CheckOutcome check_orthogonality(const Mesh& mesh, std::mt19937_64& rng, int count) {
  double worst = 0.0;
  for (int i = 0; i < count; ++i) {
    const State s = random_state(mesh, rng);
    VelocityCRField u = s.u;
    // Include boundary dofs: the identity holds on the full CR space.
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (Index f = 0; f < mesh.num_faces(); ++f) {
      if (mesh.face(f).is_boundary()) u[f] = Vec3(d(rng), d(rng), d(rng));
    }
    const SmoothVectorField v = random_polynomial_field(rng, 2);
    const double scale = broken_h1_seminorm(u, mesh) * gradient_l2(v, mesh);
    const double r = std::abs(cr_orthogonality_residual(u, v, mesh, 2));
    worst = std::max(worst, scale > 0.0 ? r / scale : r);
  }
  return outcome("CR orthogonality", worst, 1e-10);
}

CheckOutcome check_transport(const State& s, const Discretization& disc, std::mt19937_64& rng) {
  double worst = 0.0;
  for (int degree = 0; degree <= 2; ++degree) {
    worst = std::max(worst, transport_identity_continuity(s, random_polynomial(rng, degree), disc).relative_residual);
    worst = std::max(worst,
                     transport_identity_momentum(s, random_polynomial_field(rng, degree), disc).relative_residual);
  }
  return outcome("transport identities", worst, 1e-10);
}

std::vector<CheckOutcome> check_fv_oracle(const State& prev, const State& guess, const Discretization& disc) {
  const ResidualVector r = residual(prev, guess, disc);
  const Eigen::VectorXd c = continuity_oracle(prev, guess, disc.mesh(), disc.params());
  const Eigen::VectorXd m = momentum_oracle(prev, guess, disc.mesh(), disc.params());
  double dc = 0.0;
  double dm = 0.0;
  if (c.size() == r.continuity().size() && m.size() == r.momentum().size()) {
    dc = c.size() ? (r.continuity() - c).cwiseAbs().maxCoeff() : 0.0;
    dm = m.size() ? (r.momentum() - m).cwiseAbs().maxCoeff() : 0.0;
  } else {
    dc = dm = std::numeric_limits<double>::infinity();
  }
  return {outcome("continuity vs element-stencil oracle", dc, 1e-13),
          outcome("momentum vs face-loop oracle", dm, 1e-12)};
}

CheckOutcome check_jacobian(const State& prev, const State& guess, const Discretization& disc) {
  const Eigen::VectorXd x = disc.pack(guess);
  const Eigen::MatrixXd j = Eigen::MatrixXd(jacobian(prev, x, disc));
  double err = 0.0;
  for (Index c = 0; c < x.size(); ++c) {
    const double h = 1e-6 * std::max(1.0, std::abs(x[c]));
    Eigen::VectorXd a = x;
    Eigen::VectorXd b = x;
    a[c] += h;
    b[c] -= h;
    const Eigen::VectorXd fd = (residual(prev, a, disc).values - residual(prev, b, disc).values) / (2.0 * h);
    err = std::max(err, (fd - j.col(c)).cwiseAbs().maxCoeff());
  }
  const double scale = j.size() ? j.cwiseAbs().maxCoeff() : 1.0;
  return outcome("Jacobian vs central differences", err / scale, 1e-5);
}

}  // namespace nsfemdg::cli
