#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <vector>

#include "nsfemdg/common.hpp"

namespace nsfemdg {

struct Box {
  Vec3 lower{0.0, 0.0, 0.0};
  Vec3 upper{1.0, 1.0, 1.0};

  double volume() const { return (upper - lower).prod(); }
};

/// A triangular face shared by at most two tetrahedra.
///
/// For interior faces `normal` points from `minus` into `plus`, and `minus`
/// always has the smaller element index. Boundary faces have `plus ==
/// kNoElement` and an outward normal.
struct Face {
  std::array<Index, 3> vertices{};
  double area = 0.0;
  Vec3 normal = Vec3::Zero();
  Vec3 centroid = Vec3::Zero();
  Index minus = kNoElement;
  Index plus = kNoElement;

  bool is_boundary() const { return plus == kNoElement; }
};

/// Positively oriented tetrahedron. Local face `l` is opposite local vertex
/// `l`; `orientation[l]` is +1 when this element is the face's `minus` side
/// (face normal is outward) and -1 otherwise.
struct Element {
  std::array<Index, 4> vertices{};
  std::array<Index, 4> faces{};
  std::array<int, 4> orientation{};
  double volume = 0.0;
  double diameter = 0.0;
  Vec3 centroid = Vec3::Zero();
  // Gradients of the barycentric coordinates, one per local vertex.
  std::array<Vec3, 4> grad_lambda{};

  /// Local index (0..3) of `face`, or -1 when the face is not on this element.
  int local_face(Index face) const {
    for (int l = 0; l < 4; ++l) {
      if (faces[l] == face) return l;
    }
    return -1;
  }
};

class Mesh {
 public:
  /// Builds connectivity and geometry from raw tetrahedra. Negatively
  /// oriented tets are flipped; degenerate ones raise InvalidMesh.
  Mesh(std::vector<Vec3> vertices, std::vector<std::array<Index, 4>> tets, Box box);

  std::span<const Vec3> vertices() const { return vertices_; }
  std::span<const Element> elements() const { return elements_; }
  std::span<const Face> faces() const { return faces_; }
  const Element& element(Index e) const { return elements_[static_cast<std::size_t>(e)]; }
  const Face& face(Index f) const { return faces_[static_cast<std::size_t>(f)]; }
  const Vec3& vertex(Index v) const { return vertices_[static_cast<std::size_t>(v)]; }

  Index num_elements() const { return static_cast<Index>(elements_.size()); }
  Index num_faces() const { return static_cast<Index>(faces_.size()); }
  Index num_vertices() const { return static_cast<Index>(vertices_.size()); }

  /// Maximal element diameter.
  double h() const { return h_; }
  const Box& box() const { return box_; }

  /// The element on the other side of `face` as seen from `e`, or kNoElement.
  Index neighbor(Index e, Index face) const {
    const Face& f = this->face(face);
    return f.minus == e ? f.plus : f.minus;
  }

  /// Barycentric coordinates of `x` with respect to element `e`.
  Eigen::Vector4d barycentric(Index e, const Vec3& x) const;
  Vec3 point(Index e, const Eigen::Vector4d& bary) const;

 private:
  std::vector<Vec3> vertices_;
  std::vector<Element> elements_;
  std::vector<Face> faces_;
  Box box_;
  double h_ = 0.0;
};

/// Kuhn (Freudenthal) subdivision of a box into n^3 cubes of 6 tets each.
Mesh build_box_mesh(int n_per_axis, const Box& box = Box{});

struct MeshMetrics {
  double h = 0.0;
  double min_volume = 0.0;
  double max_volume = 0.0;
  double max_shape_ratio = 0.0;  // circumradius / inradius
  Index num_elements = 0;
  Index num_interior_faces = 0;
  Index num_boundary_faces = 0;
};

MeshMetrics mesh_metrics(const Mesh& mesh);

double circumradius(const Mesh& mesh, Index e);
double inradius(const Mesh& mesh, Index e);

/// Element of `mesh` containing `x` (ties resolved towards the lowest index),
/// or kNoElement when `x` is outside the mesh.
Index locate_element(const Mesh& mesh, const Vec3& x, double tol = 1e-12);

/// For nested meshes: the coarse element containing each fine element.
std::vector<Index> parent_map(const Mesh& coarse, const Mesh& fine);

}  // namespace nsfemdg
