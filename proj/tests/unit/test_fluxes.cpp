#include <gtest/gtest.h>

#include <random>

#include "nsfemdg/fluxes.hpp"

namespace nsfemdg::fluxes {
namespace {

TEST(UpwindScalar, HandValues) {
  EXPECT_DOUBLE_EQ(upwind_scalar(2.0, 1.0, 0.5), 1.0);
  EXPECT_DOUBLE_EQ(upwind_scalar(1.0, 3.0, -2.0), -6.0);
  EXPECT_EQ(upwind_scalar(7.0, 11.0, 0.0), 0.0);
}

TEST(UpwindScalar, AntisymmetricUnderSideSwap) {
  // Swapping minus/plus reverses the normal: the flux into the other side is
  // the exact negative.
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  for (int i = 0; i < 100; ++i) {
    const double a = 1.0 + d(rng) * 0.4;
    const double b = 1.0 + d(rng) * 0.4;
    const double f = d(rng);
    EXPECT_EQ(upwind_scalar(a, b, f), -upwind_scalar(b, a, -f));
  }
}

TEST(UpwindMomentum, HandValues) {
  const Vec3 um(1, 0, 0);
  const Vec3 up(0, 2, 0);
  EXPECT_EQ(upwind_momentum(1.5, um, up), Vec3(1.5, 0, 0));
  EXPECT_EQ(upwind_momentum(0.0, um, up), Vec3::Zero());
  EXPECT_EQ(upwind_momentum(-1.0, um, up), Vec3(0, -2, 0));
  EXPECT_EQ(upwind_momentum(0.7, um, up), -upwind_momentum(-0.7, up, um));
}

TEST(Stabilization, Continuity) {
  EXPECT_EQ(stab_continuity(0.0, 0.3, 0.5), 0.0);
  EXPECT_NEAR(stab_continuity(1.0, 0.3, 0.5), 0.15, 1e-16);
  // Orientation flip negates both jumps; the bilinear value is unchanged.
  const double jr = 0.37;
  const double jq = -1.3;
  EXPECT_EQ(stab_continuity(jr, 0.3, 0.5) * jq, stab_continuity(-jr, 0.3, 0.5) * -jq);
}

TEST(Stabilization, Momentum) {
  const Vec3 z = Vec3::Zero();
  EXPECT_EQ(stab_momentum(0.0, Vec3(1, 2, 3), Vec3(3, 2, 1), Vec3(1, 1, 1), 0.1, 1.0), 0.0);
  EXPECT_EQ(stab_momentum(2.0, z, z, Vec3(1, 1, 1), 0.1, 1.0), 0.0);
  EXPECT_NEAR(stab_momentum(2.0, Vec3(0.5, 0, 0), Vec3(1.5, 0, 0), Vec3(3, 0, 0), 0.1, 1.0), 0.6, 1e-15);

  // With vhat = uhat the face term is h^{1-eps} |face| [rho] [|uhat|^2] / 2.
  const Vec3 a(0.3, -0.2, 0.9);
  const Vec3 b(-0.4, 0.1, 0.5);
  const double v = stab_momentum(0.8, a, b, b - a, 0.25, 0.6);
  EXPECT_NEAR(v, 0.25 * 0.6 * 0.8 * 0.5 * (b.squaredNorm() - a.squaredNorm()), 1e-15);
}

TEST(Parts, SplitIdentity) {
  for (double x : {-3.0, -0.0, 0.0, 1e-300, 2.5}) {
    EXPECT_EQ(positive_part(x) + negative_part(x), x);
    EXPECT_GE(positive_part(x), 0.0);
    EXPECT_LE(negative_part(x), 0.0);
  }
}

}  // namespace
}  // namespace nsfemdg::fluxes
