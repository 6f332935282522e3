#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <Eigen/SparseCore>

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace curldiv {

using Point3 = Eigen::Vector3d;
using Vector3 = Eigen::Vector3d;
using Matrix3 = Eigen::Matrix3d;

/// Local edge numbering inside a tetrahedron (pairs of local vertices).
inline constexpr std::array<std::array<int, 2>, 6> kTetEdges = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

/// Local face i is opposite local vertex i.
inline constexpr std::array<std::array<int, 3>, 4> kTetFaces = {
    {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}}};

/// Affine data of one tetrahedron: vertex positions, barycentric gradients
/// and volume. Local vertices follow the global vertex order.
struct TetGeometry {
  std::array<Point3, 4> vertices;
  Eigen::Matrix<double, 4, 3> grad_lambda;  // row i = grad of lambda_i
  double volume = 0.0;
  int orientation = 1;  // sign of det(v1-v0, v2-v0, v3-v0)

  Point3 point(const Eigen::Vector4d& lambda) const;
  Eigen::Vector4d barycentric(const Point3& p) const;
  Point3 centroid() const;
};

/// Oriented tetrahedral complex. Vertex order induces the orientation of
/// edges [a,b] (a<b) and faces [a,b,c] (a<b<c); edges and faces are numbered
/// lexicographically on their sorted vertex tuples. Immutable once built.
class Mesh {
 public:
  /// Builds the complex. Throws MeshError for out-of-range indices, repeated
  /// or degenerate tetrahedra and faces shared by more than two cells.
  /// `tags` holds one region tag per tetrahedron (defaults to 0).
  static Mesh build(std::vector<Point3> coords, std::span<const std::array<int, 4>> tets,
                    std::vector<int> tags = {});

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int num_faces() const { return static_cast<int>(faces_.size()); }
  int num_tets() const { return static_cast<int>(tets_.size()); }

  /// n_v - n_e + n_f - n_t.
  int euler_characteristic() const;

  const std::vector<Point3>& vertices() const { return vertices_; }
  const Point3& vertex(int v) const { return vertices_[v]; }
  const std::array<int, 2>& edge(int e) const { return edges_[e]; }
  const std::array<int, 3>& face(int f) const { return faces_[f]; }
  /// Vertices of a cell in increasing global order.
  const std::array<int, 4>& tet(int t) const { return tets_[t]; }
  const std::array<int, 6>& tet_edges(int t) const { return tet_edges_[t]; }
  const std::array<int, 4>& tet_faces(int t) const { return tet_faces_[t]; }
  /// +1 iff the normal of local face i points out of the cell.
  const std::array<int, 4>& tet_face_signs(int t) const { return tet_face_signs_[t]; }
  /// Cells adjacent to a face; second entry is -1 on the boundary.
  const std::array<int, 2>& face_tets(int f) const { return face_tets_[f]; }
  bool is_boundary_face(int f) const { return face_tets_[f][1] < 0; }
  int tag(int t) const { return tags_[t]; }
  const std::vector<int>& tags() const { return tags_; }
  const TetGeometry& geometry(int t) const { return geometry_[t]; }

  /// Edge index of {a,b} or -1.
  int find_edge(int a, int b) const;
  /// Face index of {a,b,c} or -1.
  int find_face(int a, int b, int c) const;

  double volume(int t) const { return geometry_[t].volume; }
  Vector3 edge_tangent(int e) const;  // unit, from edge(e)[0] to edge(e)[1]
  double edge_length(int e) const;
  Vector3 face_normal(int f) const;  // unit, right-hand rule on face(f)
  double face_area(int f) const;
  double max_edge_length() const;
  Point3 bbox_min() const;
  Point3 bbox_max() const;

 private:
  std::vector<Point3> vertices_;
  std::vector<std::array<int, 4>> tets_;
  std::vector<std::array<int, 2>> edges_;
  std::vector<std::array<int, 3>> faces_;
  std::vector<std::array<int, 6>> tet_edges_;
  std::vector<std::array<int, 4>> tet_faces_;
  std::vector<std::array<int, 4>> tet_face_signs_;
  std::vector<std::array<int, 2>> face_tets_;
  std::vector<int> tags_;
  std::vector<TetGeometry> geometry_;
};

using IntSparse = Eigen::SparseMatrix<int, Eigen::RowMajor>;

/// Signed incidence matrices realising grad, curl and div on the complex.
struct IncidenceOperators {
  IntSparse G;  // n_e x n_v
  IntSparse C;  // n_f x n_e
  IntSparse D;  // n_t x n_f
};

IncidenceOperators derive_incidence(const Mesh& m);

/// One connected component of the boundary surface.
struct BoundaryComponent {
  std::vector<int> faces;     // ascending
  std::vector<int> edges;     // ascending
  std::vector<int> vertices;  // ascending
  Point3 bbox_min;
  Point3 bbox_max;
};

/// Connected components of the boundary, in order of their smallest face.
struct BoundaryStructure {
  std::vector<BoundaryComponent> components;
  int external_index = 0;
  std::vector<int> face_component;  // per face, -1 for interior faces
  std::vector<int> outward_sign;    // per face, +1 iff face normal leaves the domain; 0 inside

  int p() const { return static_cast<int>(components.size()) - 1; }
  /// Component index of (dOmega)_r, r = 0..p; r = 0 is the external one and
  /// the others follow discovery order.
  int component_of(int r) const;
};

/// Groups boundary faces into connected closed surfaces. Throws MeshError if
/// there is no boundary, a component is not closed, or no component encloses
/// all the others.
BoundaryStructure extract_boundary(const Mesh& m);

}  // namespace curldiv
