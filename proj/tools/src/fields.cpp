#include "nsfemdg/cli/fields.hpp"

#include <cmath>
#include <memory>

namespace nsfemdg::cli {

SmoothScalarField random_polynomial(std::mt19937_64& rng, int degree) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  struct Coef {
    double c = 0.0;
    Vec3 b = Vec3::Zero();
    Mat3 a = Mat3::Zero();
  };
  auto k = std::make_shared<Coef>();
  k->c = u(rng);
  if (degree >= 1) {
    for (int i = 0; i < 3; ++i) k->b[i] = u(rng);
  }
  if (degree >= 2) {
    for (int i = 0; i < 3; ++i) {
      for (int j = i; j < 3; ++j) k->a(i, j) = k->a(j, i) = u(rng);
    }
  }
  SmoothScalarField f;
  f.value = [k](const Vec3& x) { return k->c + k->b.dot(x) + x.dot(k->a * x); };
  f.gradient = [k](const Vec3& x) { return Vec3(k->b + 2.0 * k->a * x); };
  return f;
}

SmoothVectorField random_polynomial_field(std::mt19937_64& rng, int degree) {
  const SmoothScalarField c0 = random_polynomial(rng, degree);
  const SmoothScalarField c1 = random_polynomial(rng, degree);
  const SmoothScalarField c2 = random_polynomial(rng, degree);
  SmoothVectorField v;
  v.value = [=](const Vec3& x) { return Vec3(c0.value(x), c1.value(x), c2.value(x)); };
  v.jacobian = [=](const Vec3& x) {
    Mat3 j;
    j.row(0) = c0.gradient(x).transpose();
    j.row(1) = c1.gradient(x).transpose();
    j.row(2) = c2.gradient(x).transpose();
    return j;
  };
  return v;
}

State random_state(const Mesh& mesh, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> r(0.5, 1.5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  State s;
  s.rho = zero_q_field(mesh);
  for (Index e = 0; e < mesh.num_elements(); ++e) s.rho[e] = r(rng);
  s.u = zero_cr_field(mesh);
  for (Index f = 0; f < mesh.num_faces(); ++f) {
    const double a = u(rng);
    const double b = u(rng);
    const double c = u(rng);
    s.u[f] = Vec3(a, b, c);
  }
  apply_no_slip(s.u, mesh);
  return s;
}

void separate_fluxes(State& s, const Mesh& mesh, double min_flux) {
  for (Index f = 0; f < mesh.num_faces(); ++f) {
    const Face& face = mesh.face(f);
    if (face.is_boundary()) continue;
    const double flux = s.u[f].dot(face.normal);
    if (std::abs(flux) < min_flux) s.u[f] += (flux >= 0.0 ? 1.0 : -1.0) * (2.0 * min_flux) * face.normal;
  }
}

}  // namespace nsfemdg::cli
