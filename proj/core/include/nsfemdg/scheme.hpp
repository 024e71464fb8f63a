#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "nsfemdg/mesh.hpp"
#include "nsfemdg/spaces.hpp"

namespace nsfemdg {

/// Physical and numerical parameters of the implicit FEM-DG scheme.
struct SchemeParams {
  double gamma = 3.5;     // adiabatic exponent, p = a rho^gamma
  double a = 1.0;         // pressure constant
  double epsilon = 0.2;   // stabilization exponent, coefficient h^{1-epsilon}
  double kappa = 0.01;    // initial density floor kappa * h
  double c = 0.5;         // dt = c * h
  double newton_tol = 1e-9;
  int newton_max_iter = 50;
  int homotopy_steps = 10;  // node count of the last-resort uniform schedule
  int face_quad_degree = 2;
  int cell_quad_degree = 2;

  /// Throws InvalidArgument on an inadmissible value; returns warnings
  /// (gamma <= 3 is allowed but outside the convergence theory).
  std::vector<std::string> validate() const;
};

double pressure(double rho, const SchemeParams& params);
double pressure_derivative(double rho, const SchemeParams& params);

/// Discrete state at time level `step`.
struct State {
  ScalarQField rho;
  VelocityCRField u;
  int step = 0;
  double time = 0.0;
};

/// Mesh-dependent data shared by residual and Jacobian assembly.
///
/// Unknown ordering: all element densities (element index order) followed by
/// the velocity triples of the interior faces (face index order). Boundary
/// velocity dofs are constrained to zero and are not unknowns.
///
/// Holds a reference to the mesh; the mesh must outlive the discretization.
class Discretization {
 public:
  enum class Mutation { kNone, kFlipFluxSign };

  Discretization(const Mesh& mesh, SchemeParams params);

  const Mesh& mesh() const { return *mesh_; }
  const SchemeParams& params() const { return params_; }
  double dt() const { return dt_; }
  /// h^{1-epsilon}
  double stab_coeff() const { return stab_coeff_; }

  Index num_density() const { return mesh_->num_elements(); }
  Index num_unknowns() const { return num_density() + 3 * static_cast<Index>(interior_faces_.size()); }
  const std::vector<Index>& interior_faces() const { return interior_faces_; }
  /// Position of a face among the interior faces, -1 on the boundary.
  Index velocity_slot(Index face) const { return slot_[static_cast<std::size_t>(face)]; }
  Index rho_col(Index e) const { return e; }
  Index u_col(Index face, int comp) const { return num_density() + 3 * velocity_slot(face) + comp; }
  const Eigen::Matrix4d& local_stiffness(Index e) const { return stiffness_[static_cast<std::size_t>(e)]; }

  /// Location of each unknown (element or face centroid), for orderings.
  const std::vector<Vec3>& unknown_positions() const { return positions_; }

  Eigen::VectorXd pack(const State& s) const;
  State unpack(const Eigen::VectorXd& x, int step, double time) const;

  /// Test hook used to check that the verification suite detects a broken
  /// assembly: kFlipFluxSign negates the upwind mass flux.
  void set_mutation(Mutation m) { mutation_ = m; }
  Mutation mutation() const { return mutation_; }

 private:
  const Mesh* mesh_;
  SchemeParams params_;
  double dt_;
  double stab_coeff_;
  std::vector<Index> interior_faces_;
  std::vector<Index> slot_;
  std::vector<Eigen::Matrix4d> stiffness_;
  std::vector<Vec3> positions_;
  Mutation mutation_ = Mutation::kNone;
};

/// rho_h^0 = Pi_Q(rho0 + kappa h), u_h^0 = Pi_V[m0 / (rho0 + kappa h)] with
/// the boundary dofs zeroed.
State initial_state(const ScalarFunction& rho0, const VectorFunction& m0, const Mesh& mesh,
                    const SchemeParams& params);

/// Residual of one implicit step: a continuity block (one row per element,
/// tested with element indicators) followed by a momentum block (three rows
/// per interior face, tested with the CR basis).
struct ResidualVector {
  Eigen::VectorXd values;
  Index num_continuity = 0;

  auto continuity() const { return values.head(num_continuity); }
  auto momentum() const { return values.tail(values.size() - num_continuity); }
  double norm_inf() const { return values.size() ? values.cwiseAbs().maxCoeff() : 0.0; }
};

/// Homotopy residual: convection, pressure and stabilization scaled by
/// `alpha`; alpha = 1 is the scheme itself.
ResidualVector residual(const State& prev, const Eigen::VectorXd& guess, const Discretization& disc,
                        double alpha = 1.0);
ResidualVector residual(const State& prev, const State& guess, const Discretization& disc, double alpha = 1.0);

/// Exact (semismooth at the upwind kinks) Jacobian of residual().
Eigen::SparseMatrix<double> jacobian(const State& prev, const Eigen::VectorXd& guess, const Discretization& disc,
                                     double alpha = 1.0);
Eigen::SparseMatrix<double> jacobian(const State& prev, const State& guess, const Discretization& disc,
                                     double alpha = 1.0);

double total_mass(const State& s, const Mesh& mesh);

}  // namespace nsfemdg
