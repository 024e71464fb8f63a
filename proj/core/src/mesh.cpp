#include "nsfemdg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <Eigen/Dense>

namespace nsfemdg {

namespace {

// Local face l of a tet is opposite local vertex l.
constexpr std::array<std::array<int, 3>, 4> kFaceVertices{{
    {1, 2, 3},
    {0, 2, 3},
    {0, 1, 3},
    {0, 1, 2},
}};

double signed_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  return (b - a).dot((c - a).cross(d - a)) / 6.0;
}

}  // namespace

Mesh::Mesh(std::vector<Vec3> vertices, std::vector<std::array<Index, 4>> tets, Box box)
    : vertices_(std::move(vertices)), box_(box) {
  const auto nv = static_cast<Index>(vertices_.size());
  elements_.resize(tets.size());

  std::map<std::array<Index, 3>, Index> face_ids;
  for (std::size_t e = 0; e < tets.size(); ++e) {
    auto t = tets[e];
    for (Index v : t) {
      if (v < 0 || v >= nv) throw InvalidMesh("tetrahedron references a missing vertex");
    }
    double vol = signed_volume(vertex(t[0]), vertex(t[1]), vertex(t[2]), vertex(t[3]));
    if (vol < 0.0) {
      std::swap(t[2], t[3]);
      vol = -vol;
    }
    const double edge_scale = (vertex(t[1]) - vertex(t[0])).norm();
    if (!(vol > 1e-14 * edge_scale * edge_scale * edge_scale)) {
      throw InvalidMesh("degenerate tetrahedron " + std::to_string(e));
    }

    Element& el = elements_[e];
    el.vertices = t;
    el.volume = vol;
    el.centroid = 0.25 * (vertex(t[0]) + vertex(t[1]) + vertex(t[2]) + vertex(t[3]));

    Mat3 jac;
    for (int i = 0; i < 3; ++i) jac.col(i) = vertex(t[i + 1]) - vertex(t[0]);
    const Mat3 inv = jac.inverse();
    el.grad_lambda[0] = -(inv.row(0) + inv.row(1) + inv.row(2)).transpose();
    for (int i = 0; i < 3; ++i) el.grad_lambda[i + 1] = inv.row(i).transpose();

    for (int a = 0; a < 4; ++a) {
      for (int b = a + 1; b < 4; ++b) {
        el.diameter = std::max(el.diameter, (vertex(t[a]) - vertex(t[b])).norm());
      }
    }

    for (int l = 0; l < 4; ++l) {
      std::array<Index, 3> key{t[kFaceVertices[l][0]], t[kFaceVertices[l][1]], t[kFaceVertices[l][2]]};
      std::sort(key.begin(), key.end());
      auto [it, inserted] = face_ids.try_emplace(key, static_cast<Index>(faces_.size()));
      if (inserted) {
        Face f;
        f.vertices = key;
        f.minus = static_cast<Index>(e);
        faces_.push_back(f);
      } else {
        Face& f = faces_[static_cast<std::size_t>(it->second)];
        if (f.plus != kNoElement) throw InvalidMesh("face shared by more than two elements");
        f.plus = static_cast<Index>(e);
      }
      el.faces[l] = it->second;
    }
  }

  for (Face& f : faces_) {
    const Vec3& a = vertex(f.vertices[0]);
    const Vec3& b = vertex(f.vertices[1]);
    const Vec3& c = vertex(f.vertices[2]);
    Vec3 n = (b - a).cross(c - a);
    f.area = 0.5 * n.norm();
    f.centroid = (a + b + c) / 3.0;
    n.normalize();
    // Orient away from the minus element (elements are visited in index
    // order, so minus < plus already holds).
    if (n.dot(f.centroid - element(f.minus).centroid) < 0.0) n = -n;
    f.normal = n;
  }

  for (std::size_t e = 0; e < elements_.size(); ++e) {
    Element& el = elements_[e];
    for (int l = 0; l < 4; ++l) {
      el.orientation[l] = face(el.faces[l]).minus == static_cast<Index>(e) ? 1 : -1;
    }
    h_ = std::max(h_, el.diameter);
  }
}

Eigen::Vector4d Mesh::barycentric(Index e, const Vec3& x) const {
  const Element& el = element(e);
  const Vec3& x0 = vertex(el.vertices[0]);
  Eigen::Vector4d lam;
  for (int i = 1; i < 4; ++i) lam[i] = el.grad_lambda[i].dot(x - x0);
  lam[0] = 1.0 - lam[1] - lam[2] - lam[3];
  return lam;
}

Vec3 Mesh::point(Index e, const Eigen::Vector4d& bary) const {
  const Element& el = element(e);
  Vec3 x = Vec3::Zero();
  for (int i = 0; i < 4; ++i) x += bary[i] * vertex(el.vertices[i]);
  return x;
}

Mesh build_box_mesh(int n_per_axis, const Box& box) {
  if (n_per_axis < 1) throw InvalidArgument("build_box_mesh: n_per_axis must be >= 1");
  const Vec3 ext = box.upper - box.lower;
  if (!(ext.minCoeff() > 0.0)) throw InvalidArgument("build_box_mesh: box extents must be positive");

  const Index n = n_per_axis;
  const Index np = n + 1;
  auto vid = [np](Index i, Index j, Index k) { return i + np * (j + np * k); };

  std::vector<Vec3> vertices;
  vertices.reserve(static_cast<std::size_t>(np * np * np));
  for (Index k = 0; k < np; ++k) {
    for (Index j = 0; j < np; ++j) {
      for (Index i = 0; i < np; ++i) {
        const Vec3 s(static_cast<double>(i) / n, static_cast<double>(j) / n, static_cast<double>(k) / n);
        vertices.push_back(box.lower + ext.cwiseProduct(s));
      }
    }
  }

  // Each cube is split along its main diagonal into the 6 simplices
  // 0 <= x_p0 <= x_p1 <= x_p2 <= 1 (one per axis permutation); the same
  // pattern in every cube makes the family nested under n -> 2n.
  std::array<int, 3> perm{0, 1, 2};
  std::vector<std::array<int, 3>> perms;
  do {
    perms.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));

  std::vector<std::array<Index, 4>> tets;
  tets.reserve(static_cast<std::size_t>(6 * n * n * n));
  for (Index k = 0; k < n; ++k) {
    for (Index j = 0; j < n; ++j) {
      for (Index i = 0; i < n; ++i) {
        for (const auto& p : perms) {
          std::array<Index, 3> c{i, j, k};
          std::array<Index, 4> t{};
          t[0] = vid(c[0], c[1], c[2]);
          for (int s = 0; s < 3; ++s) {
            c[p[2 - s]] += 1;
            t[s + 1] = vid(c[0], c[1], c[2]);
          }
          tets.push_back(t);
        }
      }
    }
  }
  return Mesh(std::move(vertices), std::move(tets), box);
}

double circumradius(const Mesh& mesh, Index e) {
  const Element& el = mesh.element(e);
  const Vec3& x0 = mesh.vertex(el.vertices[0]);
  Mat3 a;
  Vec3 rhs;
  for (int i = 0; i < 3; ++i) {
    const Vec3 d = mesh.vertex(el.vertices[i + 1]) - x0;
    a.row(i) = 2.0 * d.transpose();
    rhs[i] = d.squaredNorm();
  }
  return a.partialPivLu().solve(rhs).norm();
}

double inradius(const Mesh& mesh, Index e) {
  const Element& el = mesh.element(e);
  double area = 0.0;
  for (Index f : el.faces) area += mesh.face(f).area;
  return 3.0 * el.volume / area;
}

MeshMetrics mesh_metrics(const Mesh& mesh) {
  MeshMetrics m;
  m.h = mesh.h();
  m.num_elements = mesh.num_elements();
  m.min_volume = std::numeric_limits<double>::infinity();
  for (Index e = 0; e < mesh.num_elements(); ++e) {
    const double v = mesh.element(e).volume;
    m.min_volume = std::min(m.min_volume, v);
    m.max_volume = std::max(m.max_volume, v);
    m.max_shape_ratio = std::max(m.max_shape_ratio, circumradius(mesh, e) / inradius(mesh, e));
  }
  for (const Face& f : mesh.faces()) {
    if (f.is_boundary()) {
      ++m.num_boundary_faces;
    } else {
      ++m.num_interior_faces;
    }
  }
  return m;
}

Index locate_element(const Mesh& mesh, const Vec3& x, double tol) {
  for (Index e = 0; e < mesh.num_elements(); ++e) {
    const Element& el = mesh.element(e);
    if ((x - el.centroid).norm() > el.diameter + tol) continue;
    if (mesh.barycentric(e, x).minCoeff() >= -tol) return e;
  }
  return kNoElement;
}

std::vector<Index> parent_map(const Mesh& coarse, const Mesh& fine) {
  std::vector<Index> parent(static_cast<std::size_t>(fine.num_elements()));
  for (Index e = 0; e < fine.num_elements(); ++e) {
    const Index p = locate_element(coarse, fine.element(e).centroid);
    if (p == kNoElement) throw InvalidMesh("parent_map: fine element outside the coarse mesh");
    parent[static_cast<std::size_t>(e)] = p;
  }
  return parent;
}

}  // namespace nsfemdg
