#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "nsfemdg/common.hpp"
#include "nsfemdg/mesh.hpp"

namespace nsfemdg {

using ScalarFunction = std::function<double(const Vec3&)>;
using VectorFunction = std::function<Vec3(const Vec3&)>;

/// A smooth vector field together with its Jacobian, J(i, j) = d v_i / d x_j.
struct SmoothVectorField {
  VectorFunction value;
  std::function<Mat3(const Vec3&)> jacobian;
};

/// A smooth scalar field with its gradient.
struct SmoothScalarField {
  ScalarFunction value;
  VectorFunction gradient;
};

/// Piecewise constant scalar: one value per element.
struct ScalarQField {
  Eigen::VectorXd values;

  Index size() const { return values.size(); }
  double operator[](Index e) const { return values[e]; }
  double& operator[](Index e) { return values[e]; }
};

/// Crouzeix-Raviart vector field: one 3-vector per face, equal to the face
/// average of the (elementwise linear) field.
struct VelocityCRField {
  std::vector<Vec3> dofs;

  Index size() const { return static_cast<Index>(dofs.size()); }
  const Vec3& operator[](Index f) const { return dofs[static_cast<std::size_t>(f)]; }
  Vec3& operator[](Index f) { return dofs[static_cast<std::size_t>(f)]; }
};

/// Per-face normal flux (1/|face|) * integral of u . nu.
using FaceFluxField = std::vector<double>;

/// Constant per-element derivatives of a CR field. grad(i, j) = d u_i / d x_j.
struct ElementDerivatives {
  Mat3 grad = Mat3::Zero();
  double div = 0.0;
  Vec3 curl = Vec3::Zero();
};

ScalarQField zero_q_field(const Mesh& mesh);
VelocityCRField zero_cr_field(const Mesh& mesh);

// Element means (the L2 projection onto piecewise constants).
ScalarQField project_Q(const ScalarFunction& f, const Mesh& mesh, int quad_degree = 2);
std::vector<Vec3> project_Q(const VectorFunction& f, const Mesh& mesh, int quad_degree = 2);

/// Face averages of `v`. Boundary dofs are left as computed; use
/// apply_no_slip to constrain them.
VelocityCRField interpolate_V(const VectorFunction& v, const Mesh& mesh, int quad_degree = 2);

void apply_no_slip(VelocityCRField& u, const Mesh& mesh);
bool satisfies_no_slip(const VelocityCRField& u, const Mesh& mesh);

/// Mean of the CR field over each element (average of its four face dofs).
std::vector<Vec3> element_average(const VelocityCRField& u, const Mesh& mesh);

FaceFluxField normal_flux(const VelocityCRField& u, const Mesh& mesh);

std::vector<ElementDerivatives> broken_derivatives(const VelocityCRField& u, const Mesh& mesh);
Mat3 element_gradient(const VelocityCRField& u, const Mesh& mesh, Index e);

/// Value of the elementwise-linear CR field at a point of element `e` given
/// in barycentric coordinates: sum_l dof_l * (1 - 3 lambda_l).
Vec3 evaluate(const VelocityCRField& u, const Mesh& mesh, Index e, const Eigen::Vector4d& bary);

/// Lowest-order div-conforming reconstruction on element `e` from the face
/// fluxes: w + s x with constant normal component equal to `flux` on each
/// face.
Vec3 rt0_value(const FaceFluxField& flux, const Mesh& mesh, Index e, const Vec3& x);

/// Local CR stiffness: K(a, b) = 9 |E| grad(lambda_a) . grad(lambda_b).
Eigen::Matrix4d cr_local_stiffness(const Mesh& mesh, Index e);

struct CommutingResidual {
  double div_v = 0.0;     // max |div_h Pi_V v - Pi_Q div v|
  double curl_v = 0.0;    // max |curl_h Pi_V v - Pi_Q curl v|
  double div_n = 0.0;     // max |div Pi_N v - Pi_Q div v|
};

CommutingResidual commuting_residual(const SmoothVectorField& v, const Mesh& mesh, int quad_degree = 2);

/// integral of grad_h u : grad_h (Pi_V v - v); vanishes for every u in the
/// CR space.
double cr_orthogonality_residual(const VelocityCRField& u, const SmoothVectorField& v,
                                 const Mesh& mesh, int quad_degree = 2);

/// Broken H1 seminorm and L2 norm of a CR field.
double broken_h1_seminorm(const VelocityCRField& u, const Mesh& mesh);

struct InterpolationError {
  double l2 = 0.0;
  double broken_h1 = 0.0;
};

/// ||Pi_V v - v||_L2 and ||grad_h (Pi_V v - v)||_L2.
InterpolationError interpolation_error(const SmoothVectorField& v, const Mesh& mesh, int quad_degree);

double l2_norm(const ScalarQField& q, const Mesh& mesh);
double integral(const ScalarQField& q, const Mesh& mesh);

}  // namespace nsfemdg
