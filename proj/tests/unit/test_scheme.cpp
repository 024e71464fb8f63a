#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "nsfemdg/cli/checks.hpp"
#include "nsfemdg/cli/fields.hpp"
#include "nsfemdg/cli/oracles.hpp"
#include "nsfemdg/scheme.hpp"
#include "test_support.hpp"

namespace nsfemdg {
namespace {

TEST(Pressure, Values) {
  SchemeParams p;
  p.gamma = 4.0;
  p.a = 1.0;
  EXPECT_DOUBLE_EQ(pressure(2.0, p), 16.0);
  EXPECT_DOUBLE_EQ(pressure_derivative(2.0, p), 32.0);
  EXPECT_EQ(pressure(0.0, p), 0.0);
  for (double g : {1.5, 3.5, 7.0}) {
    p.gamma = g;
    EXPECT_DOUBLE_EQ(pressure(1.0, p), 1.0);
  }
  EXPECT_THROW(pressure(-1e-3, p), DomainError);
  EXPECT_THROW(pressure_derivative(-1e-3, p), DomainError);
}

TEST(SchemeParams, Validation) {
  SchemeParams p;
  EXPECT_TRUE(p.validate().empty());
  EXPECT_EQ(p.gamma, 3.5);
  EXPECT_EQ(p.epsilon, 0.2);
  EXPECT_EQ(p.c, 0.5);

  auto rejects = [](auto mutate) {
    SchemeParams q;
    mutate(q);
    EXPECT_THROW(q.validate(), InvalidArgument);
  };
  rejects([](SchemeParams& q) { q.epsilon = 0.1; });
  rejects([](SchemeParams& q) { q.epsilon = 1.0 / 6.0; });
  rejects([](SchemeParams& q) { q.gamma = 1.0; });
  rejects([](SchemeParams& q) { q.a = 0.0; });
  rejects([](SchemeParams& q) { q.kappa = 0.0; });
  rejects([](SchemeParams& q) { q.c = -1.0; });
  rejects([](SchemeParams& q) { q.newton_max_iter = 0; });
  rejects([](SchemeParams& q) { q.homotopy_steps = 0; });

  p.gamma = 2.0;
  EXPECT_EQ(p.validate().size(), 1u);
}

TEST(InitialState, FloorAndProjection) {
  SchemeParams p;
  p.kappa = 0.01;
  // A single Kuhn cell of side s has h = sqrt(3) s.
  const double side = 0.5 / std::sqrt(3.0);
  const Mesh m = build_box_mesh(1, Box{Vec3::Zero(), Vec3::Constant(side)});
  ASSERT_NEAR(m.h(), 0.5, 1e-15);
  const State s = initial_state([](const Vec3&) { return 1.0; }, [](const Vec3&) { return Vec3::Zero(); }, m, p);
  for (Index e = 0; e < m.num_elements(); ++e) EXPECT_NEAR(s.rho[e], 1.005, 1e-15);
  EXPECT_EQ(testing::max_abs(s.u), 0.0);

  const Mesh m2 = build_box_mesh(2);
  const State vac = initial_state([](const Vec3&) { return 0.0; }, [](const Vec3&) { return Vec3::Zero(); }, m2, p);
  for (Index e = 0; e < m2.num_elements(); ++e) EXPECT_NEAR(vac.rho[e], p.kappa * m2.h(), 1e-16);

  EXPECT_THROW(initial_state([](const Vec3&) { return -1.0; }, [](const Vec3&) { return Vec3::Zero(); }, m2, p),
               InvalidData);

  const State shear = testing::preset_state("shear", m2, p);
  EXPECT_GT(shear.rho.values.minCoeff(), 0.0);
  EXPECT_TRUE(satisfies_no_slip(shear.u, m2));
  EXPECT_GT(testing::max_abs(shear.u), 0.0);
}

TEST(Discretization, LayoutAndPackRoundTrip) {
  const Mesh m = build_box_mesh(2);
  const SchemeParams p;
  const Discretization d(m, p);
  EXPECT_NEAR(d.dt(), p.c * m.h(), 1e-16);
  EXPECT_NEAR(d.stab_coeff(), std::pow(m.h(), 1.0 - p.epsilon), 1e-15);
  EXPECT_EQ(d.num_unknowns(), m.num_elements() + 3 * mesh_metrics(m).num_interior_faces);
  EXPECT_EQ(static_cast<Index>(d.unknown_positions().size()), d.num_unknowns());

  std::mt19937_64 rng(1);
  const State s = cli::random_state(m, rng);
  const Eigen::VectorXd x = d.pack(s);
  const State t = d.unpack(x, 3, 0.75);
  EXPECT_EQ(t.step, 3);
  EXPECT_EQ(t.time, 0.75);
  EXPECT_EQ(t.rho.values, s.rho.values);
  EXPECT_EQ(t.u.dofs, s.u.dofs);
  for (Index f = 0; f < m.num_faces(); ++f) {
    if (m.face(f).is_boundary()) {
      EXPECT_EQ(d.velocity_slot(f), -1);
    } else {
      EXPECT_EQ(x[d.u_col(f, 1)], s.u[f][1]);
    }
  }
}

TEST(Residual, StationaryStateIsExactSolution) {
  const Mesh m = build_box_mesh(2);
  const SchemeParams p;
  const Discretization d(m, p);
  State s;
  s.rho = project_Q([](const Vec3&) { return 1.7; }, m);
  s.u = zero_cr_field(m);
  EXPECT_EQ(residual(s, s, d).norm_inf(), 0.0);
}

TEST(Residual, ContinuityRowsTelescope) {
  for (int n : {1, 2, 3}) {
    const Mesh m = build_box_mesh(n);
    const Discretization d(m, SchemeParams{});
    std::mt19937_64 rng(100 + n);
    const State prev = cli::random_state(m, rng);
    const State guess = cli::random_state(m, rng);
    const ResidualVector r = residual(prev, guess, d);
    const double expect = (total_mass(guess, m) - total_mass(prev, m)) / d.dt();
    EXPECT_NEAR(r.continuity().sum(), expect, 1e-13 * (1.0 + r.continuity().cwiseAbs().sum()));
  }
}

TEST(Residual, MatchesOracles) {
  for (int n : {1, 2}) {
    const Mesh m = build_box_mesh(n);
    const Discretization d(m, SchemeParams{});
    std::mt19937_64 rng(200 + n);
    for (int trial = 0; trial < 3; ++trial) {
      const State prev = cli::random_state(m, rng);
      const State guess = cli::random_state(m, rng);
      for (double alpha : {0.0, 0.3, 1.0}) {
        const ResidualVector r = residual(prev, guess, d, alpha);
        const Eigen::VectorXd c = cli::continuity_oracle(prev, guess, m, d.params(), alpha);
        const Eigen::VectorXd mo = cli::momentum_oracle(prev, guess, m, d.params(), alpha);
        EXPECT_LE((r.continuity() - c).cwiseAbs().maxCoeff(), 1e-13);
        EXPECT_LE((r.momentum() - mo).cwiseAbs().maxCoeff(), 1e-12);
      }
    }
  }
}

TEST(Residual, AlphaLinearityAndEndpoint) {
  const Mesh m = build_box_mesh(2);
  const Discretization d(m, SchemeParams{});
  std::mt19937_64 rng(31);
  const State prev = cli::random_state(m, rng);
  const State guess = cli::random_state(m, rng);
  const Eigen::VectorXd r0 = residual(prev, guess, d, 0.0).values;
  const Eigen::VectorXd r1 = residual(prev, guess, d, 1.0).values;
  const double scale = 1.0 + r0.cwiseAbs().maxCoeff() + r1.cwiseAbs().maxCoeff();
  for (double a : {0.1, 0.25, 0.5, 0.9}) {
    const Eigen::VectorXd ra = residual(prev, guess, d, a).values;
    EXPECT_LE((ra - (r0 + a * (r1 - r0))).cwiseAbs().maxCoeff(), 1e-13 * scale);
  }
  EXPECT_EQ(residual(prev, guess, d).values, r1);
  EXPECT_EQ(residual(prev, d.pack(guess), d, 1.0).values, r1);
}

TEST(Residual, RejectsNonPositiveDensity) {
  const Mesh m = build_box_mesh(1);
  const Discretization d(m, SchemeParams{});
  std::mt19937_64 rng(3);
  const State prev = cli::random_state(m, rng);
  State guess = prev;
  guess.rho[2] = 0.0;
  EXPECT_THROW(residual(prev, guess, d), DomainError);
}

TEST(Residual, MutationHookChangesContinuity) {
  const Mesh m = build_box_mesh(1);
  Discretization d(m, SchemeParams{});
  std::mt19937_64 rng(4);
  const State prev = cli::random_state(m, rng);
  State guess = cli::random_state(m, rng);
  cli::separate_fluxes(guess, m, 0.05);
  const ResidualVector good = residual(prev, guess, d);
  d.set_mutation(Discretization::Mutation::kFlipFluxSign);
  const ResidualVector bad = residual(prev, guess, d);
  EXPECT_GT((good.continuity() - bad.continuity()).cwiseAbs().maxCoeff(), 1e-3);
  const Eigen::VectorXd oracle = cli::continuity_oracle(prev, guess, m, d.params());
  EXPECT_GT((bad.continuity() - oracle).cwiseAbs().maxCoeff(), 1e-3);
}

TEST(Jacobian, MatchesCentralDifferences) {
  const Mesh m = build_box_mesh(1);
  const Discretization d(m, SchemeParams{});
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 3; ++trial) {
    const State prev = cli::random_state(m, rng);
    State guess = cli::random_state(m, rng);
    cli::separate_fluxes(guess, m, 0.01);
    const FaceFluxField fl = normal_flux(guess.u, m);
    for (Index f : d.interior_faces()) ASSERT_GE(std::abs(fl[f]), 0.01);
    const cli::CheckOutcome o = cli::check_jacobian(prev, guess, d);
    EXPECT_LE(o.value, 1e-5);
    EXPECT_TRUE(o.pass);
  }
}

TEST(Jacobian, DiffusionBlockSymmetricAndStateIndependent) {
  // At alpha = 0 the velocity block is rho |E| / (16 dt) on face pairs plus
  // the CR stiffness; after removing the mass part what remains must be the
  // same for every state.
  const Mesh m = build_box_mesh(2);
  const Discretization d(m, SchemeParams{});
  std::mt19937_64 rng(43);
  const State prev = cli::random_state(m, rng);
  const Index nr = d.num_density();
  const Index nu = d.num_unknowns() - nr;

  auto mass = [&](const State& g) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(nu, nu);
    for (Index e = 0; e < m.num_elements(); ++e) {
      const Element& el = m.element(e);
      for (Index fa : el.faces) {
        for (Index fb : el.faces) {
          if (d.velocity_slot(fa) < 0 || d.velocity_slot(fb) < 0) continue;
          for (int c = 0; c < 3; ++c) {
            out(d.u_col(fa, c) - nr, d.u_col(fb, c) - nr) += g.rho[e] * el.volume / 16.0 / d.dt();
          }
        }
      }
    }
    return out;
  };
  Eigen::MatrixXd stiff = Eigen::MatrixXd::Zero(nu, nu);
  for (Index e = 0; e < m.num_elements(); ++e) {
    const Element& el = m.element(e);
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        if (d.velocity_slot(el.faces[a]) < 0 || d.velocity_slot(el.faces[b]) < 0) continue;
        for (int c = 0; c < 3; ++c) {
          stiff(d.u_col(el.faces[a], c) - nr, d.u_col(el.faces[b], c) - nr) +=
              9.0 * el.volume * el.grad_lambda[a].dot(el.grad_lambda[b]);
        }
      }
    }
  }
  const double scale = stiff.cwiseAbs().maxCoeff();
  for (int trial = 0; trial < 2; ++trial) {
    const State g = cli::random_state(m, rng);
    const Eigen::MatrixXd j = Eigen::MatrixXd(jacobian(prev, g, d, 0.0));
    const Eigen::MatrixXd k = j.bottomRightCorner(nu, nu) - mass(g);
    EXPECT_LE((k - stiff).cwiseAbs().maxCoeff(), 1e-12 * scale);
    EXPECT_LE((k - k.transpose()).cwiseAbs().maxCoeff(), 1e-12 * scale);
  }
  EXPECT_GT(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(stiff).eigenvalues().minCoeff(), 0.0);
}

TEST(Jacobian, PressureColumn) {
  // At u = 0 only the pressure term of a momentum row depends on rho_E:
  // d/d rho_E of -int p div_h v = -a gamma rho^(gamma-1) |E| div_h v_E.
  const Mesh m = build_box_mesh(2);
  const SchemeParams p;
  const Discretization d(m, p);
  std::mt19937_64 rng(47);
  State prev = cli::random_state(m, rng);
  State guess = cli::random_state(m, rng);
  guess.u = zero_cr_field(m);
  const Eigen::MatrixXd j = Eigen::MatrixXd(jacobian(prev, guess, d));
  for (Index e = 0; e < m.num_elements(); ++e) {
    const Element& el = m.element(e);
    const double dp = p.a * p.gamma * std::pow(guess.rho[e], p.gamma - 1.0);
    for (int l = 0; l < 4; ++l) {
      if (d.velocity_slot(el.faces[l]) < 0) continue;
      const Vec3 grad_basis = -3.0 * el.grad_lambda[l];  // basis 1 - 3 lambda_l
      for (int c = 0; c < 3; ++c) {
        EXPECT_NEAR(j(d.u_col(el.faces[l], c), d.rho_col(e)), -dp * el.volume * grad_basis[c], 1e-12);
      }
    }
  }
}

TEST(TotalMass, SumOfCellMasses) {
  const Mesh m = build_box_mesh(2, Box{Vec3::Zero(), Vec3(2.0, 1.0, 1.0)});
  State s;
  s.rho = project_Q([](const Vec3& x) { return 1.0 + x[0]; }, m);
  s.u = zero_cr_field(m);
  // int_0^2 (1 + x) dx = 4 over a unit cross-section.
  EXPECT_NEAR(total_mass(s, m), 4.0, 1e-14);
}

}  // namespace
}  // namespace nsfemdg
