#include "nsfemdg/spaces.hpp"

#include <algorithm>
#include <cmath>

#include "nsfemdg/quadrature.hpp"

namespace nsfemdg {

namespace {

Vec3 face_point(const Mesh& mesh, const Face& f, const TriangleRule::Point& bary) {
  return bary[0] * mesh.vertex(f.vertices[0]) + bary[1] * mesh.vertex(f.vertices[1]) +
         bary[2] * mesh.vertex(f.vertices[2]);
}

template <class Fn>
auto face_mean(const Mesh& mesh, const Face& f, const TriangleRule& rule, Fn&& fn) {
  using R = std::decay_t<decltype(fn(Vec3{}))>;
  R acc = fn(face_point(mesh, f, rule.points[0])) * rule.weights[0];
  for (std::size_t q = 1; q < rule.size(); ++q) acc += fn(face_point(mesh, f, rule.points[q])) * rule.weights[q];
  return acc;
}

template <class Fn>
auto element_mean(const Mesh& mesh, Index e, const TetRule& rule, Fn&& fn) {
  using R = std::decay_t<decltype(fn(Vec3{}, Eigen::Vector4d{}))>;
  Eigen::Vector4d b0 = rule.points[0];
  R acc = fn(mesh.point(e, b0), b0) * rule.weights[0];
  for (std::size_t q = 1; q < rule.size(); ++q) {
    const Eigen::Vector4d b = rule.points[q];
    acc += fn(mesh.point(e, b), b) * rule.weights[q];
  }
  return acc;
}

Vec3 curl_of(const Mat3& j) {
  return {j(2, 1) - j(1, 2), j(0, 2) - j(2, 0), j(1, 0) - j(0, 1)};
}

}  // namespace

ScalarQField zero_q_field(const Mesh& mesh) { return {Eigen::VectorXd::Zero(mesh.num_elements())}; }

VelocityCRField zero_cr_field(const Mesh& mesh) {
  return {std::vector<Vec3>(static_cast<std::size_t>(mesh.num_faces()), Vec3::Zero())};
}

ScalarQField project_Q(const ScalarFunction& f, const Mesh& mesh, int quad_degree) {
  const TetRule rule = tet_rule(quad_degree);
  ScalarQField q = zero_q_field(mesh);
  for (Index e = 0; e < mesh.num_elements(); ++e) {
    q[e] = element_mean(mesh, e, rule, [&](const Vec3& x, const Eigen::Vector4d&) { return f(x); });
  }
  return q;
}

std::vector<Vec3> project_Q(const VectorFunction& f, const Mesh& mesh, int quad_degree) {
  const TetRule rule = tet_rule(quad_degree);
  std::vector<Vec3> out(static_cast<std::size_t>(mesh.num_elements()));
  for (Index e = 0; e < mesh.num_elements(); ++e) {
    out[static_cast<std::size_t>(e)] =
        element_mean(mesh, e, rule, [&](const Vec3& x, const Eigen::Vector4d&) -> Vec3 { return f(x); });
  }
  return out;
}

VelocityCRField interpolate_V(const VectorFunction& v, const Mesh& mesh, int quad_degree) {
  const TriangleRule rule = triangle_rule(quad_degree);
  VelocityCRField u = zero_cr_field(mesh);
  for (Index f = 0; f < mesh.num_faces(); ++f) {
    u[f] = face_mean(mesh, mesh.face(f), rule, [&](const Vec3& x) -> Vec3 { return v(x); });
  }
  return u;
}

void apply_no_slip(VelocityCRField& u, const Mesh& mesh) {
  for (Index f = 0; f < mesh.num_faces(); ++f) {
    if (mesh.face(f).is_boundary()) u[f].setZero();
  }
}

bool satisfies_no_slip(const VelocityCRField& u, const Mesh& mesh) {
  for (Index f = 0; f < mesh.num_faces(); ++f) {
    if (mesh.face(f).is_boundary() && !(u[f].array() == 0.0).all()) return false;
  }
  return true;
}

std::vector<Vec3> element_average(const VelocityCRField& u, const Mesh& mesh) {
  std::vector<Vec3> avg(static_cast<std::size_t>(mesh.num_elements()));
  for (Index e = 0; e < mesh.num_elements(); ++e) {
    const auto& fs = mesh.element(e).faces;
    avg[static_cast<std::size_t>(e)] = 0.25 * (u[fs[0]] + u[fs[1]] + u[fs[2]] + u[fs[3]]);
  }
  return avg;
}

FaceFluxField normal_flux(const VelocityCRField& u, const Mesh& mesh) {
  FaceFluxField flux(static_cast<std::size_t>(mesh.num_faces()));
  for (Index f = 0; f < mesh.num_faces(); ++f) flux[static_cast<std::size_t>(f)] = u[f].dot(mesh.face(f).normal);
  return flux;
}

Mat3 element_gradient(const VelocityCRField& u, const Mesh& mesh, Index e) {
  const Element& el = mesh.element(e);
  Mat3 g = Mat3::Zero();
  for (int l = 0; l < 4; ++l) g.noalias() -= 3.0 * u[el.faces[l]] * el.grad_lambda[l].transpose();
  return g;
}

std::vector<ElementDerivatives> broken_derivatives(const VelocityCRField& u, const Mesh& mesh) {
  std::vector<ElementDerivatives> out(static_cast<std::size_t>(mesh.num_elements()));
  for (Index e = 0; e < mesh.num_elements(); ++e) {
    if (!(mesh.element(e).volume > 0.0)) throw InvalidMesh("broken_derivatives: degenerate element");
    auto& d = out[static_cast<std::size_t>(e)];
    d.grad = element_gradient(u, mesh, e);
    d.div = d.grad.trace();
    d.curl = curl_of(d.grad);
  }
  return out;
}

Vec3 evaluate(const VelocityCRField& u, const Mesh& mesh, Index e, const Eigen::Vector4d& bary) {
  const Element& el = mesh.element(e);
  Vec3 v = Vec3::Zero();
  for (int l = 0; l < 4; ++l) v += (1.0 - 3.0 * bary[l]) * u[el.faces[l]];
  return v;
}

Vec3 rt0_value(const FaceFluxField& flux, const Mesh& mesh, Index e, const Vec3& x) {
  const Element& el = mesh.element(e);
  Vec3 v = Vec3::Zero();
  for (int l = 0; l < 4; ++l) {
    const Face& f = mesh.face(el.faces[l]);
    const double outward = el.orientation[l] * flux[static_cast<std::size_t>(el.faces[l])];
    v += (f.area * outward / (3.0 * el.volume)) * (x - mesh.vertex(el.vertices[l]));
  }
  return v;
}

Eigen::Matrix4d cr_local_stiffness(const Mesh& mesh, Index e) {
  const Element& el = mesh.element(e);
  Eigen::Matrix4d k;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) k(a, b) = 9.0 * el.volume * el.grad_lambda[a].dot(el.grad_lambda[b]);
  }
  return k;
}

CommutingResidual commuting_residual(const SmoothVectorField& v, const Mesh& mesh, int quad_degree) {
  const TetRule cell = tet_rule(quad_degree);
  const TriangleRule face = triangle_rule(quad_degree);
  const VelocityCRField pv = interpolate_V(v.value, mesh, quad_degree);

  CommutingResidual r;
  for (Index e = 0; e < mesh.num_elements(); ++e) {
    const Element& el = mesh.element(e);
    const Mat3 grad = element_gradient(pv, mesh, e);
    const Mat3 mean_jac =
        element_mean(mesh, e, cell, [&](const Vec3& x, const Eigen::Vector4d&) -> Mat3 { return v.jacobian(x); });
    const double proj_div = mean_jac.trace();
    const Vec3 proj_curl = curl_of(mean_jac);

    double boundary_flux = 0.0;
    for (int l = 0; l < 4; ++l) {
      const Face& f = mesh.face(el.faces[l]);
      const Vec3 nu = el.orientation[l] * f.normal;
      boundary_flux += f.area * face_mean(mesh, f, face, [&](const Vec3& x) { return v.value(x).dot(nu); });
    }
    const double div_n = boundary_flux / el.volume;

    r.div_v = std::max(r.div_v, std::abs(grad.trace() - proj_div));
    r.curl_v = std::max(r.curl_v, (curl_of(grad) - proj_curl).cwiseAbs().maxCoeff());
    r.div_n = std::max(r.div_n, std::abs(div_n - proj_div));
  }
  return r;
}

double cr_orthogonality_residual(const VelocityCRField& u, const SmoothVectorField& v, const Mesh& mesh,
                                 int quad_degree) {
  const TetRule cell = tet_rule(quad_degree);
  const VelocityCRField pv = interpolate_V(v.value, mesh, quad_degree);
  double sum = 0.0;
  for (Index e = 0; e < mesh.num_elements(); ++e) {
    const Mat3 gu = element_gradient(u, mesh, e);
    const Mat3 gpv = element_gradient(pv, mesh, e);
    const Mat3 mean_jac =
        element_mean(mesh, e, cell, [&](const Vec3& x, const Eigen::Vector4d&) -> Mat3 { return v.jacobian(x); });
    sum += mesh.element(e).volume * gu.cwiseProduct(gpv - mean_jac).sum();
  }
  return sum;
}

double broken_h1_seminorm(const VelocityCRField& u, const Mesh& mesh) {
  double s = 0.0;
  for (Index e = 0; e < mesh.num_elements(); ++e) {
    s += mesh.element(e).volume * element_gradient(u, mesh, e).squaredNorm();
  }
  return std::sqrt(s);
}

InterpolationError interpolation_error(const SmoothVectorField& v, const Mesh& mesh, int quad_degree) {
  const TetRule cell = tet_rule(quad_degree);
  const VelocityCRField pv = interpolate_V(v.value, mesh, quad_degree);
  double l2 = 0.0;
  double h1 = 0.0;
  for (Index e = 0; e < mesh.num_elements(); ++e) {
    const Mat3 gpv = element_gradient(pv, mesh, e);
    const double vol = mesh.element(e).volume;
    l2 += vol * element_mean(mesh, e, cell, [&](const Vec3& x, const Eigen::Vector4d& b) {
      return (evaluate(pv, mesh, e, b) - v.value(x)).squaredNorm();
    });
    h1 += vol * element_mean(mesh, e, cell,
                             [&](const Vec3& x, const Eigen::Vector4d&) { return (gpv - v.jacobian(x)).squaredNorm(); });
  }
  return {std::sqrt(l2), std::sqrt(h1)};
}

double l2_norm(const ScalarQField& q, const Mesh& mesh) {
  double s = 0.0;
  for (Index e = 0; e < mesh.num_elements(); ++e) s += mesh.element(e).volume * q[e] * q[e];
  return std::sqrt(s);
}

double integral(const ScalarQField& q, const Mesh& mesh) {
  double s = 0.0;
  for (Index e = 0; e < mesh.num_elements(); ++e) s += mesh.element(e).volume * q[e];
  return s;
}

}  // namespace nsfemdg
