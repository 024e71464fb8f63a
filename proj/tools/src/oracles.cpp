#include "nsfemdg/cli/oracles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <vector>

#include <Eigen/Dense>

namespace nsfemdg::cli {

namespace {

using Key = std::array<Index, 3>;

Key sorted_key(Index a, Index b, Index c) {
  Key k{a, b, c};
  std::sort(k.begin(), k.end());
  return k;
}

struct LocalFace {
  Key key;
  double area = 0.0;
  Vec3 outward = Vec3::Zero();
  Vec3 centroid = Vec3::Zero();
};

struct Geometry {
  double h = 0.0;
  std::vector<double> volume;
  std::vector<std::array<LocalFace, 4>> faces;  // faces[e][l] opposite vertex l
  std::map<Key, std::vector<Index>> owners;     // sorted element indices per face
  std::map<Key, Index> dof;                     // face key -> mesh face index
};

Geometry build_geometry(const Mesh& mesh) {
  Geometry g;
  const Index ne = mesh.num_elements();
  g.volume.resize(static_cast<std::size_t>(ne));
  g.faces.resize(static_cast<std::size_t>(ne));
  for (Index e = 0; e < ne; ++e) {
    const auto& vid = mesh.element(e).vertices;
    std::array<Vec3, 4> p;
    for (int i = 0; i < 4; ++i) p[i] = mesh.vertex(vid[i]);
    g.volume[static_cast<std::size_t>(e)] = std::abs((p[1] - p[0]).cross(p[2] - p[0]).dot(p[3] - p[0])) / 6.0;
    for (int i = 0; i < 4; ++i) {
      for (int j = i + 1; j < 4; ++j) g.h = std::max(g.h, (p[i] - p[j]).norm());
    }
    for (int l = 0; l < 4; ++l) {
      std::array<int, 3> o{};
      int c = 0;
      for (int i = 0; i < 4; ++i) {
        if (i != l) o[c++] = i;
      }
      LocalFace& lf = g.faces[static_cast<std::size_t>(e)][l];
      const Vec3 cr = (p[o[1]] - p[o[0]]).cross(p[o[2]] - p[o[0]]);
      lf.area = 0.5 * cr.norm();
      lf.outward = cr.normalized();
      if (lf.outward.dot(p[l] - p[o[0]]) > 0.0) lf.outward = -lf.outward;
      lf.centroid = (p[o[0]] + p[o[1]] + p[o[2]]) / 3.0;
      lf.key = sorted_key(vid[o[0]], vid[o[1]], vid[o[2]]);
      g.owners[lf.key].push_back(e);
    }
  }
  for (Index f = 0; f < mesh.num_faces(); ++f) {
    const auto& v = mesh.face(f).vertices;
    g.dof[sorted_key(v[0], v[1], v[2])] = f;
  }
  return g;
}

Index other_owner(const Geometry& g, const Key& k, Index e) {
  const auto& o = g.owners.at(k);
  if (o.size() < 2) return kNoElement;
  return o[0] == e ? o[1] : o[0];
}

double pos(double x) { return x > 0.0 ? x : 0.0; }
double neg(double x) { return x < 0.0 ? x : 0.0; }

// Per element: the inverse of the affine interpolation matrix at the face
// centroids. Column l holds the coefficients (c0, grad) of the CR function
// that is 1 on face l and 0 on the others.
std::vector<Eigen::Matrix4d> cr_coefficients(const Geometry& g) {
  std::vector<Eigen::Matrix4d> out(g.faces.size());
  for (std::size_t e = 0; e < g.faces.size(); ++e) {
    Eigen::Matrix4d a;
    for (int l = 0; l < 4; ++l) a.row(l) << 1.0, g.faces[e][l].centroid.transpose();
    out[e] = a.inverse();
  }
  return out;
}

}  // namespace

Eigen::VectorXd continuity_oracle(const State& prev, const State& guess, const Mesh& mesh,
                                  const SchemeParams& params, double alpha) {
  const Geometry g = build_geometry(mesh);
  const double dt = params.c * g.h;
  const double hs = std::pow(g.h, 1.0 - params.epsilon);
  const Index ne = mesh.num_elements();
  Eigen::VectorXd r(ne);
  for (Index e = 0; e < ne; ++e) {
    const auto ue = static_cast<std::size_t>(e);
    double row = g.volume[ue] * (guess.rho[e] - prev.rho[e]) / dt;
    for (int l = 0; l < 4; ++l) {
      const LocalFace& lf = g.faces[ue][l];
      const Index nb = other_owner(g, lf.key, e);
      if (nb == kNoElement) continue;
      const double flux = guess.u[g.dof.at(lf.key)].dot(lf.outward);
      const double upwind = flux > 0.0 ? guess.rho[e] * flux : guess.rho[nb] * flux;
      row += alpha * lf.area * upwind;
      row -= alpha * hs * lf.area * (guess.rho[nb] - guess.rho[e]);
    }
    r[e] = row;
  }
  return r;
}

Eigen::VectorXd momentum_oracle(const State& prev, const State& guess, const Mesh& mesh,
                                const SchemeParams& params, double alpha) {
  const Geometry g = build_geometry(mesh);
  const double dt = params.c * g.h;
  const double hs = std::pow(g.h, 1.0 - params.epsilon);
  const Index ne = mesh.num_elements();
  const std::vector<Eigen::Matrix4d> coef = cr_coefficients(g);

  auto face_values = [&](const State& s, Index e) {
    std::array<Vec3, 4> v;
    for (int l = 0; l < 4; ++l) v[l] = s.u[g.dof.at(g.faces[static_cast<std::size_t>(e)][l].key)];
    return v;
  };
  std::vector<Vec3> uhat(static_cast<std::size_t>(ne));
  std::vector<Vec3> uhat_prev(static_cast<std::size_t>(ne));
  std::vector<Mat3> grad_u(static_cast<std::size_t>(ne));
  for (Index e = 0; e < ne; ++e) {
    const auto ue = static_cast<std::size_t>(e);
    const auto cur = face_values(guess, e);
    const auto old = face_values(prev, e);
    uhat[ue] = (cur[0] + cur[1] + cur[2] + cur[3]) / 4.0;
    uhat_prev[ue] = (old[0] + old[1] + old[2] + old[3]) / 4.0;
    Mat3 gu = Mat3::Zero();
    for (int l = 0; l < 4; ++l) gu += cur[l] * coef[ue].block<3, 1>(1, l).transpose();
    grad_u[ue] = gu;
  }

  // Interior faces in ascending mesh face index, oriented from the lower to
  // the higher element index.
  struct InteriorFace {
    Index dof;
    Index minus;
    Index plus;
    double area;
    Vec3 normal;
    Key key;
  };
  std::vector<InteriorFace> interior;
  for (const auto& [key, owners] : g.owners) {
    if (owners.size() != 2) continue;
    const Index m = std::min(owners[0], owners[1]);
    const Index p = std::max(owners[0], owners[1]);
    const auto& faces_m = g.faces[static_cast<std::size_t>(m)];
    for (int l = 0; l < 4; ++l) {
      if (faces_m[l].key == key) interior.push_back({g.dof.at(key), m, p, faces_m[l].area, faces_m[l].outward, key});
    }
  }
  std::sort(interior.begin(), interior.end(), [](const auto& a, const auto& b) { return a.dof < b.dof; });

  Eigen::VectorXd r(3 * static_cast<Index>(interior.size()));
  for (std::size_t t = 0; t < interior.size(); ++t) {
    const Key& test_key = interior[t].key;
    for (int i = 0; i < 3; ++i) {
      // Element means and gradients of the test function phi_test e_i.
      std::vector<Vec3> vhat(static_cast<std::size_t>(ne), Vec3::Zero());
      std::vector<Mat3> grad_v(static_cast<std::size_t>(ne), Mat3::Zero());
      for (Index e = 0; e < ne; ++e) {
        const auto ue = static_cast<std::size_t>(e);
        for (int l = 0; l < 4; ++l) {
          if (g.faces[ue][l].key != test_key) continue;
          vhat[ue][i] = 0.25;
          grad_v[ue].row(i) = coef[ue].block<3, 1>(1, l).transpose();
        }
      }
      double val = 0.0;
      for (Index e = 0; e < ne; ++e) {
        const auto ue = static_cast<std::size_t>(e);
        val += g.volume[ue] * (guess.rho[e] * uhat[ue] - prev.rho[e] * uhat_prev[ue]).dot(vhat[ue]) / dt;
        val += g.volume[ue] * (grad_u[ue].array() * grad_v[ue].array()).sum();
        val -= alpha * params.a * std::pow(guess.rho[e], params.gamma) * g.volume[ue] * grad_v[ue].trace();
      }
      for (const InteriorFace& f : interior) {
        const double flux = guess.u[f.dof].dot(f.normal);
        const double up = guess.rho[f.minus] * pos(flux) + guess.rho[f.plus] * neg(flux);
        const Vec3& um = uhat[static_cast<std::size_t>(f.minus)];
        const Vec3& upl = uhat[static_cast<std::size_t>(f.plus)];
        const Vec3 mom = pos(up) * um + neg(up) * upl;
        const Vec3 jump_v = vhat[static_cast<std::size_t>(f.plus)] - vhat[static_cast<std::size_t>(f.minus)];
        val -= alpha * f.area * mom.dot(jump_v);
        val += alpha * hs * f.area * (guess.rho[f.plus] - guess.rho[f.minus]) * (0.5 * (um + upl)).dot(jump_v);
      }
      r[3 * static_cast<Index>(t) + i] = val;
    }
  }
  return r;
}

}  // namespace nsfemdg::cli
