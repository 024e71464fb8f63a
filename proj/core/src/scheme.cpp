#include "nsfemdg/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nsfemdg/fluxes.hpp"
#include "nsfemdg/parallel.hpp"
#include "nsfemdg/quadrature.hpp"

namespace nsfemdg {

std::vector<std::string> SchemeParams::validate() const {
  auto fail = [](const std::string& what) { throw InvalidArgument("invalid scheme parameter: " + what); };
  if (!(gamma > 1.0)) fail("gamma must be > 1");
  if (!(a > 0.0)) fail("a must be > 0");
  if (!(epsilon > 1.0 / 6.0)) fail("epsilon must be > 1/6");
  if (!(kappa > 0.0)) fail("kappa must be > 0");
  if (!(c > 0.0)) fail("c must be > 0");
  if (!(newton_tol > 0.0)) fail("newton_tol must be > 0");
  if (newton_max_iter < 1) fail("newton_max_iter must be >= 1");
  if (homotopy_steps < 1) fail("homotopy_steps must be >= 1");
  if (face_quad_degree < 1 || cell_quad_degree < 1) fail("quadrature degrees must be >= 1");

  std::vector<std::string> warnings;
  if (gamma <= 3.0) {
    std::ostringstream os;
    os << "gamma = " << gamma << " <= 3: outside the range covered by the convergence theory";
    warnings.push_back(os.str());
  }
  return warnings;
}

double pressure(double rho, const SchemeParams& params) {
  if (rho < 0.0) throw DomainError("pressure: negative density");
  return params.a * std::pow(rho, params.gamma);
}

double pressure_derivative(double rho, const SchemeParams& params) {
  if (rho < 0.0) throw DomainError("pressure_derivative: negative density");
  return params.a * params.gamma * std::pow(rho, params.gamma - 1.0);
}

Discretization::Discretization(const Mesh& mesh, SchemeParams params)
    : mesh_(&mesh), params_(params) {
  params_.validate();
  dt_ = params_.c * mesh.h();
  stab_coeff_ = std::pow(mesh.h(), 1.0 - params_.epsilon);
  slot_.assign(static_cast<std::size_t>(mesh.num_faces()), -1);
  for (Index f = 0; f < mesh.num_faces(); ++f) {
    if (!mesh.face(f).is_boundary()) {
      slot_[static_cast<std::size_t>(f)] = static_cast<Index>(interior_faces_.size());
      interior_faces_.push_back(f);
    }
  }
  stiffness_.reserve(static_cast<std::size_t>(mesh.num_elements()));
  for (Index e = 0; e < mesh.num_elements(); ++e) stiffness_.push_back(cr_local_stiffness(mesh, e));
  positions_.reserve(static_cast<std::size_t>(num_unknowns()));
  for (Index e = 0; e < mesh.num_elements(); ++e) positions_.push_back(mesh.element(e).centroid);
  for (Index f : interior_faces_) {
    for (int j = 0; j < 3; ++j) positions_.push_back(mesh.face(f).centroid);
  }
}

Eigen::VectorXd Discretization::pack(const State& s) const {
  Eigen::VectorXd x(num_unknowns());
  x.head(num_density()) = s.rho.values;
  for (Index f : interior_faces_) {
    for (int j = 0; j < 3; ++j) x[u_col(f, j)] = s.u[f][j];
  }
  return x;
}

State Discretization::unpack(const Eigen::VectorXd& x, int step, double time) const {
  State s;
  s.rho.values = x.head(num_density());
  s.u = zero_cr_field(*mesh_);
  for (Index f : interior_faces_) {
    for (int j = 0; j < 3; ++j) s.u[f][j] = x[u_col(f, j)];
  }
  s.step = step;
  s.time = time;
  return s;
}

State initial_state(const ScalarFunction& rho0, const VectorFunction& m0, const Mesh& mesh,
                    const SchemeParams& params) {
  params.validate();
  const double floor = params.kappa * mesh.h();
  auto shifted = [&](const Vec3& x) {
    const double r = rho0(x);
    if (r < 0.0 || !std::isfinite(r)) throw InvalidData("initial density is negative or not finite");
    return r + floor;
  };
  State s;
  s.rho = project_Q(shifted, mesh, std::max(params.cell_quad_degree, 2));
  s.u = interpolate_V([&](const Vec3& x) -> Vec3 { return m0(x) / shifted(x); }, mesh,
                      std::max(params.face_quad_degree, 2));
  apply_no_slip(s.u, mesh);
  return s;
}

double total_mass(const State& s, const Mesh& mesh) { return integral(s.rho, mesh); }

namespace {

struct Heaviside {
  static double pos(double x) { return x > 0.0 ? 1.0 : 0.0; }
  static double neg(double x) { return x < 0.0 ? 1.0 : 0.0; }
};

// Quantities shared by residual and Jacobian at one iterate.
struct Kinematics {
  Eigen::VectorXd rho;
  VelocityCRField u;
  std::vector<Vec3> uhat;
  std::vector<Mat3> grad;
  std::vector<double> pres;
  // Per interior slot.
  std::vector<double> flux;
  std::vector<double> up;
  std::vector<Vec3> mom;
  std::vector<Vec3> stab;  // h^{1-eps} |face| [rho] avg(uhat)
};

Kinematics kinematics(const Eigen::VectorXd& x, const Discretization& disc) {
  const Mesh& mesh = disc.mesh();
  const Index ne = mesh.num_elements();
  Kinematics k;
  k.rho = x.head(ne);
  if (k.rho.size() && !(k.rho.minCoeff() > 0.0)) throw DomainError("residual: non-positive density in iterate");
  k.u = disc.unpack(x, 0, 0.0).u;
  k.uhat = element_average(k.u, mesh);
  k.grad.resize(static_cast<std::size_t>(ne));
  k.pres.resize(static_cast<std::size_t>(ne));
  for (Index e = 0; e < ne; ++e) {
    k.grad[static_cast<std::size_t>(e)] = element_gradient(k.u, mesh, e);
    k.pres[static_cast<std::size_t>(e)] = pressure(k.rho[e], disc.params());
  }
  const double sign = disc.mutation() == Discretization::Mutation::kFlipFluxSign ? -1.0 : 1.0;
  const auto& interior = disc.interior_faces();
  const std::size_t nf = interior.size();
  k.flux.resize(nf);
  k.up.resize(nf);
  k.mom.resize(nf);
  k.stab.resize(nf);
  for (std::size_t s = 0; s < nf; ++s) {
    const Face& f = mesh.face(interior[s]);
    const double rm = k.rho[f.minus];
    const double rp = k.rho[f.plus];
    const Vec3& um = k.uhat[static_cast<std::size_t>(f.minus)];
    const Vec3& upl = k.uhat[static_cast<std::size_t>(f.plus)];
    k.flux[s] = k.u[interior[s]].dot(f.normal);
    k.up[s] = sign * fluxes::upwind_scalar(rm, rp, k.flux[s]);
    k.mom[s] = fluxes::upwind_momentum(k.up[s], um, upl);
    k.stab[s] = fluxes::stab_continuity(rp - rm, disc.stab_coeff(), f.area) * 0.5 * (um + upl);
  }
  return k;
}

}  // namespace

ResidualVector residual(const State& prev, const Eigen::VectorXd& x, const Discretization& disc, double alpha) {
  const Mesh& mesh = disc.mesh();
  const Index ne = mesh.num_elements();
  const double dt = disc.dt();
  const double hs = disc.stab_coeff();
  const Kinematics k = kinematics(x, disc);
  const std::vector<Vec3> uhat_prev = element_average(prev.u, mesh);

  ResidualVector r;
  r.values = Eigen::VectorXd::Zero(disc.num_unknowns());
  r.num_continuity = ne;

  // Element-tested momentum terms (time derivative, convection, and
  // stabilization all act through the element average of the test function).
  std::vector<Vec3> g(static_cast<std::size_t>(ne));
  parallel_for(ne, [&](Index begin, Index end) {
    for (Index e = begin; e < end; ++e) {
      const Element& el = mesh.element(e);
      const auto ue = static_cast<std::size_t>(e);
      double cont = el.volume * (k.rho[e] - prev.rho[e]) / dt;
      Vec3 ge = el.volume * (k.rho[e] * k.uhat[ue] - prev.rho[e] * uhat_prev[ue]) / dt;
      for (int l = 0; l < 4; ++l) {
        const Index s = disc.velocity_slot(el.faces[l]);
        if (s < 0) continue;
        const auto us = static_cast<std::size_t>(s);
        const Face& f = mesh.face(el.faces[l]);
        const double sigma = el.orientation[l];
        const double jump = k.rho[f.plus] - k.rho[f.minus];
        cont += alpha * sigma * (f.area * k.up[us] - hs * f.area * jump);
        ge += alpha * sigma * (f.area * k.mom[us] - k.stab[us]);
      }
      r.values[e] = cont;
      g[ue] = ge;
    }
  });

  const auto& interior = disc.interior_faces();
  parallel_for(static_cast<Index>(interior.size()), [&](Index begin, Index end) {
    for (Index s = begin; s < end; ++s) {
      const Index fi = interior[static_cast<std::size_t>(s)];
      const Face& f = mesh.face(fi);
      Vec3 row = 0.25 * (g[static_cast<std::size_t>(f.minus)] + g[static_cast<std::size_t>(f.plus)]);
      for (Index e : {f.minus, f.plus}) {
        const Element& el = mesh.element(e);
        const int l = el.local_face(fi);
        const Eigen::Matrix4d& kmat = disc.local_stiffness(e);
        for (int m = 0; m < 4; ++m) row += kmat(l, m) * k.u[el.faces[m]];
      }
      row += alpha * f.area *
             (k.pres[static_cast<std::size_t>(f.plus)] - k.pres[static_cast<std::size_t>(f.minus)]) * f.normal;
      r.values.segment<3>(ne + 3 * s) = row;
    }
  });
  return r;
}

ResidualVector residual(const State& prev, const State& guess, const Discretization& disc, double alpha) {
  return residual(prev, disc.pack(guess), disc, alpha);
}

namespace {

using ScalarLin = std::vector<std::pair<Index, double>>;
using VectorLin = std::vector<std::pair<Index, Vec3>>;

void axpy(VectorLin& out, double a, const VectorLin& in) {
  for (const auto& [c, v] : in) out.emplace_back(c, a * v);
}

// out += vec * d(scalar)
void outer(VectorLin& out, const Vec3& vec, const ScalarLin& in) {
  for (const auto& [c, v] : in) out.emplace_back(c, v * vec);
}

void compress(VectorLin& lin) {
  std::stable_sort(lin.begin(), lin.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::size_t w = 0;
  for (std::size_t i = 0; i < lin.size(); ++i) {
    if (w > 0 && lin[w - 1].first == lin[i].first) {
      lin[w - 1].second += lin[i].second;
    } else {
      lin[w++] = lin[i];
    }
  }
  lin.resize(w);
}

}  // namespace

Eigen::SparseMatrix<double> jacobian(const State& prev, const Eigen::VectorXd& x, const Discretization& disc,
                                     double alpha) {
  using Triplet = Eigen::Triplet<double>;
  const Mesh& mesh = disc.mesh();
  const Index ne = mesh.num_elements();
  const double dt = disc.dt();
  const double hs = disc.stab_coeff();
  const Kinematics k = kinematics(x, disc);
  const double sign = disc.mutation() == Discretization::Mutation::kFlipFluxSign ? -1.0 : 1.0;
  const auto& interior = disc.interior_faces();
  const auto nf = static_cast<Index>(interior.size());
  (void)prev;

  // d(uhat_E): each interior face of E contributes e_j / 4.
  auto uhat_lin = [&](Index e) {
    VectorLin lin;
    const Element& el = mesh.element(e);
    for (int l = 0; l < 4; ++l) {
      if (disc.velocity_slot(el.faces[l]) < 0) continue;
      for (int j = 0; j < 3; ++j) lin.emplace_back(disc.u_col(el.faces[l], j), 0.25 * Vec3::Unit(j));
    }
    return lin;
  };

  // Per-face linearizations of Up, the momentum flux and the stabilization.
  std::vector<ScalarLin> up_lin(static_cast<std::size_t>(nf));
  std::vector<VectorLin> mom_lin(static_cast<std::size_t>(nf));
  std::vector<VectorLin> stab_lin(static_cast<std::size_t>(nf));
  parallel_for(nf, [&](Index begin, Index end) {
    for (Index s = begin; s < end; ++s) {
      const auto us = static_cast<std::size_t>(s);
      const Index fi = interior[us];
      const Face& f = mesh.face(fi);
      const double rm = k.rho[f.minus];
      const double rp = k.rho[f.plus];
      const double flux = k.flux[us];
      const double up = k.up[us];
      const Vec3& um = k.uhat[static_cast<std::size_t>(f.minus)];
      const Vec3& upl = k.uhat[static_cast<std::size_t>(f.plus)];

      ScalarLin& dup = up_lin[us];
      dup.emplace_back(disc.rho_col(f.minus), sign * fluxes::positive_part(flux));
      dup.emplace_back(disc.rho_col(f.plus), sign * fluxes::negative_part(flux));
      const double dflux = sign * (rm * Heaviside::pos(flux) + rp * Heaviside::neg(flux));
      for (int j = 0; j < 3; ++j) dup.emplace_back(disc.u_col(fi, j), dflux * f.normal[j]);

      const VectorLin dum = uhat_lin(f.minus);
      const VectorLin dup_hat = uhat_lin(f.plus);

      VectorLin& dm = mom_lin[us];
      outer(dm, Heaviside::pos(up) * um + Heaviside::neg(up) * upl, dup);
      axpy(dm, fluxes::positive_part(up), dum);
      axpy(dm, fluxes::negative_part(up), dup_hat);

      VectorLin& ds = stab_lin[us];
      const Vec3 avg = 0.5 * (um + upl);
      const double jump = rp - rm;
      ds.emplace_back(disc.rho_col(f.plus), hs * f.area * avg);
      ds.emplace_back(disc.rho_col(f.minus), -hs * f.area * avg);
      axpy(ds, 0.5 * hs * f.area * jump, dum);
      axpy(ds, 0.5 * hs * f.area * jump, dup_hat);
    }
  });

  // Element stage: continuity rows and the linearization of the
  // element-tested momentum vector G_E.
  std::vector<std::vector<Triplet>> cont_rows(static_cast<std::size_t>(ne));
  std::vector<VectorLin> g_lin(static_cast<std::size_t>(ne));
  parallel_for(ne, [&](Index begin, Index end) {
    for (Index e = begin; e < end; ++e) {
      const auto ue = static_cast<std::size_t>(e);
      const Element& el = mesh.element(e);
      auto& rows = cont_rows[ue];
      rows.emplace_back(e, disc.rho_col(e), el.volume / dt);

      VectorLin& gl = g_lin[ue];
      gl.emplace_back(disc.rho_col(e), (el.volume / dt) * k.uhat[ue]);
      axpy(gl, el.volume * k.rho[e] / dt, uhat_lin(e));

      for (int l = 0; l < 4; ++l) {
        const Index s = disc.velocity_slot(el.faces[l]);
        if (s < 0) continue;
        const auto us = static_cast<std::size_t>(s);
        const Face& f = mesh.face(el.faces[l]);
        const double sigma = el.orientation[l];
        for (const auto& [c, v] : up_lin[us]) rows.emplace_back(e, c, alpha * sigma * f.area * v);
        rows.emplace_back(e, disc.rho_col(f.plus), -alpha * sigma * hs * f.area);
        rows.emplace_back(e, disc.rho_col(f.minus), alpha * sigma * hs * f.area);
        axpy(gl, alpha * sigma * f.area, mom_lin[us]);
        axpy(gl, -alpha * sigma, stab_lin[us]);
      }
      compress(gl);
    }
  });

  std::vector<std::vector<Triplet>> mom_rows(static_cast<std::size_t>(nf));
  parallel_for(nf, [&](Index begin, Index end) {
    for (Index s = begin; s < end; ++s) {
      const auto us = static_cast<std::size_t>(s);
      const Index fi = interior[us];
      const Face& f = mesh.face(fi);
      const Index row0 = ne + 3 * s;
      auto& rows = mom_rows[us];
      for (Index e : {f.minus, f.plus}) {
        for (const auto& [c, v] : g_lin[static_cast<std::size_t>(e)]) {
          for (int i = 0; i < 3; ++i) {
            if (v[i] != 0.0) rows.emplace_back(row0 + i, c, 0.25 * v[i]);
          }
        }
        const Element& el = mesh.element(e);
        const int l = el.local_face(fi);
        const Eigen::Matrix4d& kmat = disc.local_stiffness(e);
        for (int m = 0; m < 4; ++m) {
          if (disc.velocity_slot(el.faces[m]) < 0) continue;
          for (int i = 0; i < 3; ++i) rows.emplace_back(row0 + i, disc.u_col(el.faces[m], i), kmat(l, m));
        }
      }
      const double dpp = pressure_derivative(k.rho[f.plus], disc.params());
      const double dpm = pressure_derivative(k.rho[f.minus], disc.params());
      for (int i = 0; i < 3; ++i) {
        rows.emplace_back(row0 + i, disc.rho_col(f.plus), alpha * f.area * dpp * f.normal[i]);
        rows.emplace_back(row0 + i, disc.rho_col(f.minus), -alpha * f.area * dpm * f.normal[i]);
      }
    }
  });

  std::size_t total = 0;
  for (const auto& r : cont_rows) total += r.size();
  for (const auto& r : mom_rows) total += r.size();
  std::vector<Triplet> triplets;
  triplets.reserve(total);
  for (const auto& r : cont_rows) triplets.insert(triplets.end(), r.begin(), r.end());
  for (const auto& r : mom_rows) triplets.insert(triplets.end(), r.begin(), r.end());

  Eigen::SparseMatrix<double> jac(disc.num_unknowns(), disc.num_unknowns());
  jac.setFromTriplets(triplets.begin(), triplets.end());
  return jac;
}

Eigen::SparseMatrix<double> jacobian(const State& prev, const State& guess, const Discretization& disc,
                                     double alpha) {
  return jacobian(prev, disc.pack(guess), disc, alpha);
}

}  // namespace nsfemdg
