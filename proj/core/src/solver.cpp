#include "nsfemdg/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

namespace nsfemdg {

void HomotopySettings::validate() const {
  if (schedules.empty()) throw InvalidArgument("homotopy: no schedule");
  for (const auto& s : schedules) {
    if (s.size() < 2 || s.front() != 0.0 || s.back() != 1.0) {
      throw InvalidArgument("homotopy: schedule must start at 0 and end at 1");
    }
    for (std::size_t i = 1; i < s.size(); ++i) {
      if (!(s[i] > s[i - 1])) throw InvalidArgument("homotopy: schedule must be strictly increasing");
    }
  }
  if (max_iter_per_node < 1) throw InvalidArgument("homotopy: iteration budget must be positive");
  if (!(backtrack > 0.0 && backtrack < 1.0)) throw InvalidArgument("homotopy: backtracking factor must be in (0,1)");
  if (!(min_step > 0.0 && min_step < 1.0)) throw InvalidArgument("homotopy: line-search floor must be in (0,1)");
}

HomotopySettings default_homotopy_settings(const SchemeParams& params) {
  HomotopySettings s;
  s.schedules.push_back({0.0, 1.0});
  s.schedules.push_back({0.0, 0.25, 0.5, 0.75, 1.0});
  std::vector<double> uniform;
  for (int i = 0; i <= params.homotopy_steps; ++i) uniform.push_back(static_cast<double>(i) / params.homotopy_steps);
  uniform.back() = 1.0;
  s.schedules.push_back(uniform);
  s.max_iter_per_node = params.newton_max_iter;
  s.tol = params.newton_tol;
  return s;
}

ResidualVector alpha_residual(const State& prev, const State& guess, double alpha, const Discretization& disc) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidArgument("alpha_residual: alpha must lie in [0, 1]");
  return residual(prev, guess, disc, alpha);
}

State alpha0_solve(const State& prev, const Discretization& disc) {
  using Triplet = Eigen::Triplet<double>;
  const Mesh& mesh = disc.mesh();
  const auto& interior = disc.interior_faces();
  const auto nu = static_cast<Index>(interior.size());
  const double dt = disc.dt();
  const std::vector<Vec3> uhat_prev = element_average(prev.u, mesh);

  std::vector<Triplet> trip;
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(nu, 3);
  for (Index e = 0; e < mesh.num_elements(); ++e) {
    const Element& el = mesh.element(e);
    const double w = prev.rho[e] * el.volume / dt;
    const Eigen::Matrix4d& k = disc.local_stiffness(e);
    for (int a = 0; a < 4; ++a) {
      const Index sa = disc.velocity_slot(el.faces[a]);
      if (sa < 0) continue;
      rhs.row(sa) += 0.25 * w * uhat_prev[static_cast<std::size_t>(e)].transpose();
      for (int b = 0; b < 4; ++b) {
        const Index sb = disc.velocity_slot(el.faces[b]);
        if (sb < 0) continue;
        trip.emplace_back(sa, sb, w / 16.0 + k(a, b));
      }
    }
  }
  Eigen::SparseMatrix<double> m(nu, nu);
  m.setFromTriplets(trip.begin(), trip.end());

  State out = prev;
  out.u = zero_cr_field(mesh);
  if (nu > 0) {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(m);
    if (ldlt.info() != Eigen::Success) throw SolverError("alpha0_solve: factorization failed");
    const Eigen::MatrixXd sol = ldlt.solve(rhs);
    if (ldlt.info() != Eigen::Success || !sol.allFinite()) throw SolverError("alpha0_solve: solve failed");
    for (Index s = 0; s < nu; ++s) out.u[interior[static_cast<std::size_t>(s)]] = sol.row(s).transpose();
  }
  return out;
}

std::vector<Index> nested_dissection_order(const Eigen::SparseMatrix<double>& a,
                                            const std::vector<Vec3>& positions) {
  const Index n = a.rows();
  if (a.cols() != n || static_cast<Index>(positions.size()) != n) {
    throw InvalidArgument("nested_dissection_order: dimension mismatch");
  }
  std::vector<std::vector<Index>> adj(static_cast<std::size_t>(n));
  for (Index c = 0; c < a.outerSize(); ++c) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(a, c); it; ++it) {
      if (it.row() == c) continue;
      adj[static_cast<std::size_t>(it.row())].push_back(c);
      adj[static_cast<std::size_t>(c)].push_back(it.row());
    }
  }

  constexpr std::size_t kLeaf = 64;
  std::vector<Index> order;
  order.reserve(static_cast<std::size_t>(n));
  std::vector<char> side(static_cast<std::size_t>(n), 0);

  // Explicit stack of (nodes, separator to emit after both halves).
  struct Task {
    std::vector<Index> nodes;
    bool emit = false;
  };
  std::vector<Task> stack;
  std::vector<Index> all(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
  stack.push_back({std::move(all), false});
  while (!stack.empty()) {
    Task t = std::move(stack.back());
    stack.pop_back();
    if (t.emit || t.nodes.size() <= kLeaf) {
      order.insert(order.end(), t.nodes.begin(), t.nodes.end());
      continue;
    }
    auto& nodes = t.nodes;
    Vec3 lo = positions[static_cast<std::size_t>(nodes.front())];
    Vec3 hi = lo;
    for (Index i : nodes) {
      lo = lo.cwiseMin(positions[static_cast<std::size_t>(i)]);
      hi = hi.cwiseMax(positions[static_cast<std::size_t>(i)]);
    }
    int axis = 0;
    (hi - lo).maxCoeff(&axis);
    const auto mid = nodes.begin() + static_cast<std::ptrdiff_t>(nodes.size() / 2);
    std::nth_element(nodes.begin(), mid, nodes.end(), [&](Index x, Index y) {
      const double px = positions[static_cast<std::size_t>(x)][axis];
      const double py = positions[static_cast<std::size_t>(y)][axis];
      return px < py || (px == py && x < y);
    });
    for (auto it = nodes.begin(); it != nodes.end(); ++it) side[static_cast<std::size_t>(*it)] = it < mid ? 1 : 2;
    std::vector<Index> left, right, sep;
    for (auto it = nodes.begin(); it != mid; ++it) {
      bool cut = false;
      for (Index j : adj[static_cast<std::size_t>(*it)]) {
        if (side[static_cast<std::size_t>(j)] == 2) {
          cut = true;
          break;
        }
      }
      (cut ? sep : left).push_back(*it);
    }
    right.assign(mid, nodes.end());
    for (Index i : nodes) side[static_cast<std::size_t>(i)] = 0;
    // Stack order: left is processed first, then right, then the separator.
    std::sort(left.begin(), left.end());
    std::sort(right.begin(), right.end());
    std::sort(sep.begin(), sep.end());
    stack.push_back({std::move(sep), true});
    stack.push_back({std::move(right), false});
    stack.push_back({std::move(left), false});
  }
  return order;
}

Eigen::VectorXd linear_solve(const Eigen::SparseMatrix<double>& a, const Eigen::VectorXd& b,
                             const std::vector<Vec3>* positions) {
  if (a.rows() != a.cols() || a.rows() != b.size()) throw InvalidArgument("linear_solve: dimension mismatch");
  if (a.rows() == 0) return {};
  const double bound = 1e-10 * (1.0 + b.cwiseAbs().maxCoeff());

  auto finish = [&](auto& lu, const Eigen::SparseMatrix<double>& m, const Eigen::VectorXd& rhs) {
    if (lu.info() != Eigen::Success) throw SolverError("linear_solve: factorization failed (" + lu.lastErrorMessage() + ")");
    Eigen::VectorXd x = lu.solve(rhs);
    Eigen::VectorXd r = rhs - m * x;
    if (x.allFinite() && r.cwiseAbs().maxCoeff() > bound) {
      x += lu.solve(r);
      r = rhs - m * x;
    }
    if (!x.allFinite() || r.cwiseAbs().maxCoeff() > bound) throw SolverError("linear_solve: numerically singular system");
    return x;
  };

  if (positions == nullptr) {
    Eigen::SparseMatrix<double> ac = a;
    ac.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(ac);
    return finish(lu, ac, b);
  }

  const std::vector<Index> order = nested_dissection_order(a, *positions);
  Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, int> p(a.rows());
  for (std::size_t k = 0; k < order.size(); ++k) p.indices()[order[k]] = static_cast<int>(k);
  Eigen::SparseMatrix<double> ap = p * a * p.transpose();
  ap.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::NaturalOrdering<int>> lu;
  lu.setPivotThreshold(0.1);
  lu.compute(ap);
  const Eigen::VectorXd pb = p * b;
  const Eigen::VectorXd y = finish(lu, ap, pb);
  return p.transpose() * y;
}

namespace {

struct NodeResult {
  Eigen::VectorXd x;
  int iterations = 0;
};

bool positive_density(const Eigen::VectorXd& x, Index nrho) {
  return nrho == 0 || x.head(nrho).minCoeff() > 0.0;
}

NodeResult newton_at(const State& prev, Eigen::VectorXd x, double alpha, const Discretization& disc,
                     const HomotopySettings& settings) {
  const Index nrho = disc.num_density();
  double norm = residual(prev, x, disc, alpha).norm_inf();
  for (int it = 0;; ++it) {
    if (norm <= settings.tol) return {std::move(x), it};
    if (it >= settings.max_iter_per_node) {
      throw StepFailure("Newton budget exhausted", alpha, it, norm);
    }
    const ResidualVector r = residual(prev, x, disc, alpha);
    Eigen::VectorXd dx;
    try {
      dx = linear_solve(jacobian(prev, x, disc, alpha), -r.values, &disc.unknown_positions());
    } catch (const SolverError& e) {
      throw StepFailure(std::string("linear solve failed: ") + e.what(), alpha, it, norm);
    }
    double step = 1.0;
    for (;;) {
      Eigen::VectorXd trial = x + step * dx;
      if (positive_density(trial, nrho)) {
        const double trial_norm = residual(prev, trial, disc, alpha).norm_inf();
        if (trial_norm < norm) {
          x = std::move(trial);
          norm = trial_norm;
          break;
        }
      }
      step *= settings.backtrack;
      if (step < settings.min_step) throw StepFailure("line search reached its floor", alpha, it, norm);
    }
  }
}

}  // namespace

SolveReport homotopy_newton_solve(const State& prev, const Discretization& disc, const HomotopySettings& settings) {
  settings.validate();
  const State start = alpha0_solve(prev, disc);
  const Eigen::VectorXd x0 = disc.pack(start);

  std::ostringstream failures;
  double last_alpha = 0.0;
  int last_iter = 0;
  double last_norm = 0.0;
  for (std::size_t si = 0; si < settings.schedules.size(); ++si) {
    const auto& schedule = settings.schedules[si];
    Eigen::VectorXd x = x0;
    int iterations = 0;
    try {
      for (double alpha : schedule) {
        NodeResult node = newton_at(prev, std::move(x), alpha, disc, settings);
        x = std::move(node.x);
        iterations += node.iterations;
      }
    } catch (const StepFailure& f) {
      failures << " [schedule " << si << ": " << f.what() << " at alpha=" << f.alpha() << ", iteration "
               << f.iteration() << ", residual " << f.residual_norm() << "]";
      last_alpha = f.alpha();
      last_iter = f.iteration();
      last_norm = f.residual_norm();
      continue;
    }
    SolveReport rep;
    rep.state = disc.unpack(x, prev.step + 1, prev.time + disc.dt());
    rep.newton_iterations = iterations;
    rep.alpha_nodes = static_cast<int>(schedule.size());
    rep.schedule_index = static_cast<int>(si);
    rep.residual_norm = residual(prev, x, disc, 1.0).norm_inf();
    if (!(rep.state.rho.values.minCoeff() > 0.0) || !(rep.residual_norm <= settings.tol)) {
      throw StepFailure("postcondition violated", 1.0, iterations, rep.residual_norm, prev.step + 1);
    }
    return rep;
  }
  throw StepFailure("all homotopy schedules failed:" + failures.str(), last_alpha, last_iter, last_norm,
                    prev.step + 1);
}

}  // namespace nsfemdg
