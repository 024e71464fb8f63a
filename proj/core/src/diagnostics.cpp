#include "nsfemdg/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nsfemdg/fluxes.hpp"
#include "nsfemdg/parallel.hpp"
#include "nsfemdg/quadrature.hpp"

namespace nsfemdg {

namespace {

// Element contributions are computed in parallel into per-element slots and
// summed serially, so results do not depend on the worker count.
template <typename Body>
double element_sum(Index ne, Body body) {
  std::vector<double> part(static_cast<std::size_t>(ne), 0.0);
  parallel_for(ne, [&](Index begin, Index end) {
    for (Index e = begin; e < end; ++e) part[static_cast<std::size_t>(e)] = body(e);
  });
  return std::accumulate(part.begin(), part.end(), 0.0);
}

std::vector<double> element_divergence(const VelocityCRField& u, const Mesh& mesh) {
  std::vector<double> div(static_cast<std::size_t>(mesh.num_elements()));
  for (Index e = 0; e < mesh.num_elements(); ++e) div[static_cast<std::size_t>(e)] = element_gradient(u, mesh, e).trace();
  return div;
}

Vec3 face_point(const Mesh& mesh, const Face& f, const Eigen::Vector3d& bary) {
  return bary[0] * mesh.vertex(f.vertices[0]) + bary[1] * mesh.vertex(f.vertices[1]) +
         bary[2] * mesh.vertex(f.vertices[2]);
}

double relative(double lhs, double rhs) { return std::abs(lhs - rhs) / (1.0 + std::abs(lhs)); }

}  // namespace

EnergyLedger energy_ledger(const State& s, const Discretization& disc) {
  const Mesh& mesh = disc.mesh();
  const SchemeParams& prm = disc.params();
  const std::vector<Vec3> uhat = element_average(s.u, mesh);
  EnergyLedger led;
  led.kinetic = element_sum(mesh.num_elements(), [&](Index e) {
    return 0.5 * mesh.element(e).volume * s.rho[e] * uhat[static_cast<std::size_t>(e)].squaredNorm();
  });
  led.internal = element_sum(mesh.num_elements(), [&](Index e) {
    return mesh.element(e).volume * pressure(s.rho[e], prm) / (prm.gamma - 1.0);
  });
  led.mass = total_mass(s, mesh);
  led.min_rho = s.rho.size() ? s.rho.values.minCoeff() : 0.0;
  return led;
}

EnergyLedger energy_ledger(const State& prev, const State& cur, const Discretization& disc) {
  const Mesh& mesh = disc.mesh();
  EnergyLedger led = energy_ledger(cur, disc);
  const std::vector<Vec3> uhat = element_average(cur.u, mesh);
  const std::vector<Vec3> uhat_prev = element_average(prev.u, mesh);
  led.grad_diss = element_sum(mesh.num_elements(), [&](Index e) {
    return mesh.element(e).volume * element_gradient(cur.u, mesh, e).squaredNorm();
  });
  led.d5 = element_sum(mesh.num_elements(), [&](Index e) {
    const auto ue = static_cast<std::size_t>(e);
    return mesh.element(e).volume * prev.rho[e] * (uhat[ue] - uhat_prev[ue]).squaredNorm() / (2.0 * disc.dt());
  });
  double d2 = 0.0;
  for (Index fi : disc.interior_faces()) {
    const Face& f = mesh.face(fi);
    const double up = fluxes::upwind_scalar(cur.rho[f.minus], cur.rho[f.plus], cur.u[fi].dot(f.normal));
    d2 += 0.5 * f.area * std::abs(up) *
          (uhat[static_cast<std::size_t>(f.plus)] - uhat[static_cast<std::size_t>(f.minus)]).squaredNorm();
  }
  led.d2 = d2;
  return led;
}

double EnergyTracker::add(const EnergyLedger& step) {
  accumulated_ += dt_ * step.dissipation();
  const double margin = e0_ - (step.energy() + accumulated_);
  if (margin < -1e-10 * e0_) pass_ = false;
  return margin;
}

EnergyCheck energy_inequality_check(const std::vector<EnergyLedger>& ledgers, double dt) {
  EnergyCheck out;
  if (ledgers.empty()) return out;
  EnergyTracker tracker(ledgers.front(), dt);
  out.e0 = tracker.e0();
  for (std::size_t m = 1; m < ledgers.size(); ++m) out.margins.push_back(tracker.add(ledgers[m]));
  out.pass = tracker.pass();
  return out;
}

PositivityCheck positivity_bound_check(const State& prev, const State& cur, const Discretization& disc) {
  const std::vector<double> div = element_divergence(cur.u, disc.mesh());
  double max_div = 0.0;
  for (double d : div) max_div = std::max(max_div, std::abs(d));
  PositivityCheck c;
  c.bound = prev.rho.values.minCoeff() / (1.0 + disc.dt() * max_div);
  c.slack = cur.rho.values.minCoeff() - c.bound;
  c.pass = c.slack >= -1e-12;
  return c;
}

RenormalizedCheck renormalized_check(const State& prev, const State& cur, const Discretization& disc) {
  const Mesh& mesh = disc.mesh();
  const std::vector<double> div = element_divergence(cur.u, mesh);
  RenormalizedCheck c;
  c.lhs = element_sum(mesh.num_elements(), [&](Index e) {
    return mesh.element(e).volume * (cur.rho[e] * cur.rho[e] - prev.rho[e] * prev.rho[e]) / (2.0 * disc.dt());
  });
  c.rhs = -element_sum(mesh.num_elements(), [&](Index e) {
    return mesh.element(e).volume * 0.5 * cur.rho[e] * cur.rho[e] * div[static_cast<std::size_t>(e)];
  });
  c.margin = c.rhs - c.lhs;
  c.pass = c.margin >= -1e-10 * (1.0 + std::abs(c.rhs));
  return c;
}

namespace {

// Shared per-state data of the transport identities.
struct TransportData {
  const Mesh* mesh;
  const State* s;
  FaceFluxField flux;
  std::vector<Vec3> uhat;
  std::vector<double> div;

  TransportData(const State& state, const Discretization& disc)
      : mesh(&disc.mesh()), s(&state), flux(normal_flux(state.u, disc.mesh())),
        uhat(element_average(state.u, disc.mesh())), div(element_divergence(state.u, disc.mesh())) {
    if (state.rho.size() && !(state.rho.values.minCoeff() > 0.0)) {
      throw DomainError("transport identity: density must be positive");
    }
  }

  // Outward flux of element e through its local face l.
  double outward(Index e, int l) const {
    const Element& el = mesh->element(e);
    return el.orientation[l] * flux[static_cast<std::size_t>(el.faces[l])];
  }
};

// Densities of the face error functionals at one boundary point of element e.
struct FaceTerms {
  double p1 = 0.0;
  double p2 = 0.0;
  double p3 = 0.0;
};

FaceTerms face_terms(const TransportData& d, Index e, int l, double phi_q_e, double phi_x, const Vec3& w_e,
                     const Vec3& v_x) {
  const Element& el = d.mesh->element(e);
  const Index out = d.mesh->neighbor(e, el.faces[l]);
  FaceTerms t;
  if (out == kNoElement) return t;
  const double fneg = fluxes::negative_part(d.outward(e, l));
  const double rin = d.s->rho[e];
  const double rout = d.s->rho[out];
  const Vec3& uin = d.uhat[static_cast<std::size_t>(e)];
  const Vec3& uout = d.uhat[static_cast<std::size_t>(out)];
  t.p1 = (rin - rout) * fneg * (phi_q_e - phi_x);
  t.p2 = (rout - rin) * fneg * uin.dot(v_x - w_e);
  t.p3 = rout * fneg * (uout - uin).dot(v_x - w_e);
  return t;
}

}  // namespace

TransportIdentity transport_identity_continuity(const State& s, const SmoothScalarField& phi,
                                                const Discretization& disc, int quad_degree) {
  const Mesh& mesh = disc.mesh();
  const TransportData d(s, disc);
  const ScalarQField phi_q = project_Q(phi.value, mesh, quad_degree);
  const TetRule cell = tet_rule(quad_degree);
  const TriangleRule tri = triangle_rule(quad_degree);

  TransportIdentity r;
  for (Index fi : disc.interior_faces()) {
    const Face& f = mesh.face(fi);
    const double up = fluxes::upwind_scalar(s.rho[f.minus], s.rho[f.plus], d.flux[static_cast<std::size_t>(fi)]);
    r.lhs += f.area * up * (phi_q[f.plus] - phi_q[f.minus]);
  }
  r.volume = element_sum(mesh.num_elements(), [&](Index e) {
    double acc = 0.0;
    for (std::size_t q = 0; q < cell.size(); ++q) {
      const Vec3 x = mesh.point(e, cell.points[q]);
      acc += cell.weights[q] * rt0_value(d.flux, mesh, e, x).dot(phi.gradient(x));
    }
    return s.rho[e] * mesh.element(e).volume * acc;
  });
  r.p.p1 = element_sum(mesh.num_elements(), [&](Index e) {
    const Element& el = mesh.element(e);
    double acc = 0.0;
    for (int l = 0; l < 4; ++l) {
      const Face& f = mesh.face(el.faces[l]);
      for (std::size_t q = 0; q < tri.size(); ++q) {
        const Vec3 x = face_point(mesh, f, tri.points[q]);
        acc += f.area * tri.weights[q] * face_terms(d, e, l, phi_q[e], phi.value(x), Vec3::Zero(), Vec3::Zero()).p1;
      }
    }
    return acc;
  });
  r.rhs = r.volume + r.p.p1;
  r.relative_residual = relative(r.lhs, r.rhs);
  r.pass = r.relative_residual <= 1e-10;
  return r;
}

TransportIdentity transport_identity_momentum(const State& s, const SmoothVectorField& v,
                                              const Discretization& disc, int quad_degree) {
  const Mesh& mesh = disc.mesh();
  const TransportData d(s, disc);
  const VelocityCRField pv = interpolate_V(v.value, mesh, quad_degree);
  const std::vector<Vec3> w = element_average(pv, mesh);
  const TetRule cell = tet_rule(quad_degree);
  const TriangleRule tri = triangle_rule(quad_degree);

  TransportIdentity r;
  for (Index fi : disc.interior_faces()) {
    const Face& f = mesh.face(fi);
    const auto um = static_cast<std::size_t>(f.minus);
    const auto upl = static_cast<std::size_t>(f.plus);
    const double up = fluxes::upwind_scalar(s.rho[f.minus], s.rho[f.plus], d.flux[static_cast<std::size_t>(fi)]);
    const Vec3 mom = fluxes::upwind_momentum(up, d.uhat[um], d.uhat[upl]);
    r.lhs += f.area * mom.dot(w[upl] - w[um]);
  }
  r.volume = element_sum(mesh.num_elements(), [&](Index e) {
    const auto ue = static_cast<std::size_t>(e);
    double acc = 0.0;
    for (std::size_t q = 0; q < cell.size(); ++q) {
      const Vec3 x = mesh.point(e, cell.points[q]);
      acc += cell.weights[q] * d.uhat[ue].dot(v.jacobian(x) * rt0_value(d.flux, mesh, e, x));
    }
    return s.rho[e] * mesh.element(e).volume * acc;
  });

  std::vector<Vec3> parts(static_cast<std::size_t>(mesh.num_elements()), Vec3::Zero());
  parallel_for(mesh.num_elements(), [&](Index begin, Index end) {
    for (Index e = begin; e < end; ++e) {
      const auto ue = static_cast<std::size_t>(e);
      const Element& el = mesh.element(e);
      double p2 = 0.0;
      double p3 = 0.0;
      for (int l = 0; l < 4; ++l) {
        const Face& f = mesh.face(el.faces[l]);
        for (std::size_t q = 0; q < tri.size(); ++q) {
          const Vec3 x = face_point(mesh, f, tri.points[q]);
          const FaceTerms t = face_terms(d, e, l, 0.0, 0.0, w[ue], v.value(x));
          p2 += f.area * tri.weights[q] * t.p2;
          p3 += f.area * tri.weights[q] * t.p3;
        }
      }
      Vec3 defect = Vec3::Zero();  // mean over E of (Pi_V v - v)
      for (std::size_t q = 0; q < cell.size(); ++q) {
        const Vec3 x = mesh.point(e, cell.points[q]);
        defect += cell.weights[q] * (evaluate(pv, mesh, e, cell.points[q]) - v.value(x));
      }
      const double p4 = -s.rho[e] * d.div[ue] * el.volume * d.uhat[ue].dot(defect);
      parts[ue] = Vec3(p2, p3, p4);
    }
  });
  for (const Vec3& p : parts) {
    r.p.p2 += p[0];
    r.p.p3 += p[1];
    r.p.p4 += p[2];
  }
  r.rhs = r.volume + r.p.p2 + r.p.p3 + r.p.p4;
  r.relative_residual = relative(r.lhs, r.rhs);
  r.pass = r.relative_residual <= 1e-10;
  return r;
}

PFunctionals p_functional_magnitudes(const State& s, const SmoothScalarField& phi, const SmoothVectorField& v,
                                     const Discretization& disc, int quad_degree) {
  const Mesh& mesh = disc.mesh();
  const TransportData d(s, disc);
  const ScalarQField phi_q = project_Q(phi.value, mesh, quad_degree);
  const VelocityCRField pv = interpolate_V(v.value, mesh, quad_degree);
  const std::vector<Vec3> w = element_average(pv, mesh);
  const TetRule cell = tet_rule(quad_degree);
  const TriangleRule tri = triangle_rule(quad_degree);

  std::vector<Eigen::Vector4d> parts(static_cast<std::size_t>(mesh.num_elements()), Eigen::Vector4d::Zero());
  parallel_for(mesh.num_elements(), [&](Index begin, Index end) {
    for (Index e = begin; e < end; ++e) {
      const auto ue = static_cast<std::size_t>(e);
      const Element& el = mesh.element(e);
      Eigen::Vector4d acc = Eigen::Vector4d::Zero();
      for (int l = 0; l < 4; ++l) {
        const Face& f = mesh.face(el.faces[l]);
        for (std::size_t q = 0; q < tri.size(); ++q) {
          const Vec3 x = face_point(mesh, f, tri.points[q]);
          const FaceTerms t = face_terms(d, e, l, phi_q[e], phi.value(x), w[ue], v.value(x));
          const double wq = f.area * tri.weights[q];
          acc[0] += wq * std::abs(t.p1);
          acc[1] += wq * std::abs(t.p2);
          acc[2] += wq * std::abs(t.p3);
        }
      }
      const double coef = s.rho[e] * d.div[ue];
      for (std::size_t q = 0; q < cell.size(); ++q) {
        const Vec3 x = mesh.point(e, cell.points[q]);
        const Vec3 defect = evaluate(pv, mesh, e, cell.points[q]) - v.value(x);
        acc[3] += el.volume * cell.weights[q] * std::abs(coef * d.uhat[ue].dot(defect));
      }
      parts[ue] = acc;
    }
  });
  PFunctionals out;
  for (const auto& p : parts) {
    out.p1 += p[0];
    out.p2 += p[1];
    out.p3 += p[2];
    out.p4 += p[3];
  }
  return out;
}

}  // namespace nsfemdg
