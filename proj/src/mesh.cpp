#include "curldiv/mesh.hpp"

#include "curldiv/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace curldiv {

Point3 TetGeometry::point(const Eigen::Vector4d& lambda) const {
  Point3 p = Point3::Zero();
  for (int i = 0; i < 4; ++i) p += lambda[i] * vertices[i];
  return p;
}

Eigen::Vector4d TetGeometry::barycentric(const Point3& p) const {
  Eigen::Vector4d lambda;
  for (int i = 1; i < 4; ++i) lambda[i] = grad_lambda.row(i).dot(p - vertices[0]);
  lambda[0] = 1.0 - lambda[1] - lambda[2] - lambda[3];
  return lambda;
}

Point3 TetGeometry::centroid() const {
  return 0.25 * (vertices[0] + vertices[1] + vertices[2] + vertices[3]);
}

namespace {

TetGeometry make_geometry(const std::array<Point3, 4>& v) {
  TetGeometry g;
  g.vertices = v;
  Matrix3 jac;
  jac.col(0) = v[1] - v[0];
  jac.col(1) = v[2] - v[0];
  jac.col(2) = v[3] - v[0];
  const double det = jac.determinant();
  g.volume = std::abs(det) / 6.0;
  g.orientation = det > 0 ? 1 : -1;
  // Rows of jac^{-1} are the gradients of lambda_1..lambda_3.
  const Matrix3 inv = jac.inverse();
  for (int i = 0; i < 3; ++i) g.grad_lambda.row(i + 1) = inv.row(i);
  g.grad_lambda.row(0) = -(inv.row(0) + inv.row(1) + inv.row(2));
  return g;
}

template <std::size_t N>
int lookup(const std::vector<std::array<int, N>>& sorted, const std::array<int, N>& key) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), key);
  if (it == sorted.end() || *it != key) return -1;
  return static_cast<int>(it - sorted.begin());
}

struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

Mesh Mesh::build(std::vector<Point3> coords, std::span<const std::array<int, 4>> tets,
                 std::vector<int> tags) {
  Mesh m;
  const int nv = static_cast<int>(coords.size());
  if (tets.empty()) throw MeshError("mesh has no tetrahedra");
  for (const auto& p : coords) {
    if (!p.allFinite()) throw MeshError("vertex coordinates must be finite");
  }
  if (!tags.empty() && tags.size() != tets.size())
    throw MeshError("region tag count does not match tetrahedron count");
  m.vertices_ = std::move(coords);
  m.tags_ = tags.empty() ? std::vector<int>(tets.size(), 0) : std::move(tags);

  Point3 lo = m.vertices_.front(), hi = m.vertices_.front();
  for (const auto& p : m.vertices_) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const double diag = (hi - lo).norm();
  const double min_volume = 1e-14 * diag * diag * diag;

  m.tets_.reserve(tets.size());
  for (std::size_t t = 0; t < tets.size(); ++t) {
    std::array<int, 4> s = tets[t];
    for (int v : s) {
      if (v < 0 || v >= nv)
        throw MeshError("tetrahedron " + std::to_string(t) + " references vertex " +
                        std::to_string(v) + " out of range");
    }
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end())
      throw MeshError("degenerate tetrahedron " + std::to_string(t) + ": repeated vertex");
    m.tets_.push_back(s);
  }
  {
    std::vector<int> order(m.tets_.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return m.tets_[a] < m.tets_[b]; });
    for (std::size_t i = 1; i < order.size(); ++i) {
      if (m.tets_[order[i]] == m.tets_[order[i - 1]])
        throw MeshError("duplicate tetrahedron " + std::to_string(order[i]));
    }
  }

  m.geometry_.reserve(m.tets_.size());
  for (std::size_t t = 0; t < m.tets_.size(); ++t) {
    const auto& s = m.tets_[t];
    std::array<Point3, 4> v;
    for (int i = 0; i < 4; ++i) v[i] = m.vertices_[s[i]];
    Matrix3 jac;
    jac << v[1] - v[0], v[2] - v[0], v[3] - v[0];
    if (std::abs(jac.determinant()) / 6.0 < min_volume)
      throw MeshError("degenerate tetrahedron " + std::to_string(t) + ": zero volume");
    m.geometry_.push_back(make_geometry(v));
  }

  for (const auto& s : m.tets_) {
    for (const auto& le : kTetEdges) m.edges_.push_back({s[le[0]], s[le[1]]});
    for (const auto& lf : kTetFaces) m.faces_.push_back({s[lf[0]], s[lf[1]], s[lf[2]]});
  }
  std::sort(m.edges_.begin(), m.edges_.end());
  m.edges_.erase(std::unique(m.edges_.begin(), m.edges_.end()), m.edges_.end());
  std::sort(m.faces_.begin(), m.faces_.end());
  m.faces_.erase(std::unique(m.faces_.begin(), m.faces_.end()), m.faces_.end());

  m.face_tets_.assign(m.faces_.size(), {-1, -1});
  m.tet_edges_.resize(m.tets_.size());
  m.tet_faces_.resize(m.tets_.size());
  m.tet_face_signs_.resize(m.tets_.size());
  for (int t = 0; t < m.num_tets(); ++t) {
    const auto& s = m.tets_[t];
    for (int i = 0; i < 6; ++i)
      m.tet_edges_[t][i] = lookup(m.edges_, {s[kTetEdges[i][0]], s[kTetEdges[i][1]]});
    for (int i = 0; i < 4; ++i) {
      const auto& lf = kTetFaces[i];
      const int f = lookup(m.faces_, {s[lf[0]], s[lf[1]], s[lf[2]]});
      m.tet_faces_[t][i] = f;
      // Boundary of the positively oriented simplex carries sign (-1)^i on
      // the face opposite local vertex i.
      m.tet_face_signs_[t][i] = ((i % 2 == 0) ? 1 : -1) * m.geometry_[t].orientation;
      auto& adj = m.face_tets_[f];
      if (adj[0] < 0) {
        adj[0] = t;
      } else if (adj[1] < 0) {
        adj[1] = t;
      } else {
        throw MeshError("non-manifold face shared by more than two tetrahedra (face " +
                        std::to_string(f) + ")");
      }
    }
  }
  return m;
}

int Mesh::euler_characteristic() const {
  return num_vertices() - num_edges() + num_faces() - num_tets();
}

int Mesh::find_edge(int a, int b) const {
  if (a > b) std::swap(a, b);
  return lookup(edges_, {a, b});
}

int Mesh::find_face(int a, int b, int c) const {
  std::array<int, 3> k{a, b, c};
  std::sort(k.begin(), k.end());
  return lookup(faces_, k);
}

Vector3 Mesh::edge_tangent(int e) const {
  return (vertices_[edges_[e][1]] - vertices_[edges_[e][0]]).normalized();
}

double Mesh::edge_length(int e) const {
  return (vertices_[edges_[e][1]] - vertices_[edges_[e][0]]).norm();
}

Vector3 Mesh::face_normal(int f) const {
  const auto& v = faces_[f];
  return (vertices_[v[1]] - vertices_[v[0]]).cross(vertices_[v[2]] - vertices_[v[0]]).normalized();
}

double Mesh::face_area(int f) const {
  const auto& v = faces_[f];
  return 0.5 * (vertices_[v[1]] - vertices_[v[0]]).cross(vertices_[v[2]] - vertices_[v[0]]).norm();
}

double Mesh::max_edge_length() const {
  double h = 0.0;
  for (int e = 0; e < num_edges(); ++e) h = std::max(h, edge_length(e));
  return h;
}

Point3 Mesh::bbox_min() const {
  Point3 lo = vertices_.front();
  for (const auto& p : vertices_) lo = lo.cwiseMin(p);
  return lo;
}

Point3 Mesh::bbox_max() const {
  Point3 hi = vertices_.front();
  for (const auto& p : vertices_) hi = hi.cwiseMax(p);
  return hi;
}

IncidenceOperators derive_incidence(const Mesh& m) {
  using Triplet = Eigen::Triplet<int>;
  IncidenceOperators ops;

  std::vector<Triplet> trip;
  trip.reserve(2 * m.num_edges());
  for (int e = 0; e < m.num_edges(); ++e) {
    trip.emplace_back(e, m.edge(e)[0], -1);
    trip.emplace_back(e, m.edge(e)[1], 1);
  }
  ops.G.resize(m.num_edges(), m.num_vertices());
  ops.G.setFromTriplets(trip.begin(), trip.end());

  // Face [a,b,c] traverses [a,b] and [b,c] forwards and [a,c] backwards.
  trip.clear();
  for (int f = 0; f < m.num_faces(); ++f) {
    const auto& v = m.face(f);
    trip.emplace_back(f, m.find_edge(v[0], v[1]), 1);
    trip.emplace_back(f, m.find_edge(v[1], v[2]), 1);
    trip.emplace_back(f, m.find_edge(v[0], v[2]), -1);
  }
  ops.C.resize(m.num_faces(), m.num_edges());
  ops.C.setFromTriplets(trip.begin(), trip.end());

  trip.clear();
  for (int t = 0; t < m.num_tets(); ++t) {
    for (int i = 0; i < 4; ++i) trip.emplace_back(t, m.tet_faces(t)[i], m.tet_face_signs(t)[i]);
  }
  ops.D.resize(m.num_tets(), m.num_faces());
  ops.D.setFromTriplets(trip.begin(), trip.end());
  return ops;
}

int BoundaryStructure::component_of(int r) const {
  if (r == 0) return external_index;
  int seen = 0;
  for (int c = 0; c < static_cast<int>(components.size()); ++c) {
    if (c == external_index) continue;
    if (++seen == r) return c;
  }
  throw std::out_of_range("boundary component index out of range");
}

BoundaryStructure extract_boundary(const Mesh& m) {
  BoundaryStructure b;
  b.face_component.assign(m.num_faces(), -1);
  b.outward_sign.assign(m.num_faces(), 0);

  std::vector<int> bfaces;
  for (int f = 0; f < m.num_faces(); ++f) {
    if (m.is_boundary_face(f)) bfaces.push_back(f);
  }
  if (bfaces.empty()) throw MeshError("mesh has an empty boundary");

  // Boundary faces incident to each edge.
  std::vector<std::vector<int>> edge_faces(m.num_edges());
  for (int k = 0; k < static_cast<int>(bfaces.size()); ++k) {
    const auto& v = bfaces[k];
    const auto& fv = m.face(v);
    edge_faces[m.find_edge(fv[0], fv[1])].push_back(k);
    edge_faces[m.find_edge(fv[1], fv[2])].push_back(k);
    edge_faces[m.find_edge(fv[0], fv[2])].push_back(k);
  }
  DisjointSets sets(static_cast<int>(bfaces.size()));
  for (int e = 0; e < m.num_edges(); ++e) {
    const auto& ef = edge_faces[e];
    if (ef.empty()) continue;
    if (ef.size() != 2)
      throw MeshError("boundary edge " + std::to_string(e) + " has " + std::to_string(ef.size()) +
                      " boundary faces; the boundary surface is not closed");
    sets.unite(ef[0], ef[1]);
  }

  std::vector<int> root_to_component(bfaces.size(), -1);
  for (int k = 0; k < static_cast<int>(bfaces.size()); ++k) {
    const int root = sets.find(k);
    if (root_to_component[root] < 0) {
      root_to_component[root] = static_cast<int>(b.components.size());
      b.components.emplace_back();
    }
    const int c = root_to_component[root];
    const int f = bfaces[k];
    b.components[c].faces.push_back(f);
    b.face_component[f] = c;
    const int t = m.face_tets(f)[0];
    const auto& tf = m.tet_faces(t);
    const int local = static_cast<int>(std::find(tf.begin(), tf.end(), f) - tf.begin());
    b.outward_sign[f] = m.tet_face_signs(t)[local];
  }

  std::vector<int> vertex_owner(m.num_vertices(), -1);
  for (int c = 0; c < static_cast<int>(b.components.size()); ++c) {
    auto& comp = b.components[c];
    for (int f : comp.faces) {
      const auto& fv = m.face(f);
      for (int i = 0; i < 3; ++i) {
        comp.vertices.push_back(fv[i]);
        comp.edges.push_back(m.find_edge(fv[i], fv[(i + 1) % 3]));
      }
    }
    std::sort(comp.vertices.begin(), comp.vertices.end());
    comp.vertices.erase(std::unique(comp.vertices.begin(), comp.vertices.end()),
                        comp.vertices.end());
    std::sort(comp.edges.begin(), comp.edges.end());
    comp.edges.erase(std::unique(comp.edges.begin(), comp.edges.end()), comp.edges.end());
    comp.bbox_min = comp.bbox_max = m.vertex(comp.vertices.front());
    for (int v : comp.vertices) {
      if (vertex_owner[v] >= 0 && vertex_owner[v] != c)
        throw MeshError("boundary components touch at vertex " + std::to_string(v));
      vertex_owner[v] = c;
      comp.bbox_min = comp.bbox_min.cwiseMin(m.vertex(v));
      comp.bbox_max = comp.bbox_max.cwiseMax(m.vertex(v));
    }
  }

  const double tol = 1e-12 * (m.bbox_max() - m.bbox_min()).norm();
  b.external_index = -1;
  for (int c = 0; c < static_cast<int>(b.components.size()) && b.external_index < 0; ++c) {
    bool encloses = true;
    for (const auto& other : b.components) {
      if ((other.bbox_min.array() < b.components[c].bbox_min.array() - tol).any() ||
          (other.bbox_max.array() > b.components[c].bbox_max.array() + tol).any()) {
        encloses = false;
        break;
      }
    }
    if (encloses) b.external_index = c;
  }
  if (b.external_index < 0)
    throw MeshError("no boundary component encloses all the others");
  return b;
}

}  // namespace curldiv
