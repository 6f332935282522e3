#include "curldiv/whitney.hpp"

#include "curldiv/quadrature.hpp"

#include <stdexcept>
#include <string>

namespace curldiv {

const char* to_string(Space s) {
  switch (s) {
    case Space::Lagrange: return "L_h";
    case Space::Edge: return "N_h";
    case Space::Face: return "RT_h";
    case Space::Cell: return "PC_h";
  }
  return "?";
}

int space_dimension(const Mesh& m, Space s) {
  switch (s) {
    case Space::Lagrange: return m.num_vertices();
    case Space::Edge: return m.num_edges();
    case Space::Face: return m.num_faces();
    case Space::Cell: return m.num_tets();
  }
  return 0;
}

FEFunction zero_function(const Mesh& m, Space s) {
  return {s, Eigen::VectorXd::Zero(space_dimension(m, s))};
}

namespace local {

Eigen::Matrix<double, 3, 6> edge_basis(const TetGeometry& geo, const Eigen::Vector4d& lambda) {
  Eigen::Matrix<double, 3, 6> w;
  for (int i = 0; i < 6; ++i) {
    const int a = kTetEdges[i][0], b = kTetEdges[i][1];
    w.col(i) = lambda[a] * geo.grad_lambda.row(b).transpose() -
               lambda[b] * geo.grad_lambda.row(a).transpose();
  }
  return w;
}

Eigen::Matrix<double, 3, 6> edge_curls(const TetGeometry& geo) {
  Eigen::Matrix<double, 3, 6> c;
  for (int i = 0; i < 6; ++i) {
    const Vector3 ga = geo.grad_lambda.row(kTetEdges[i][0]).transpose();
    const Vector3 gb = geo.grad_lambda.row(kTetEdges[i][1]).transpose();
    c.col(i) = 2.0 * ga.cross(gb);
  }
  return c;
}

Eigen::Matrix<double, 3, 4> face_basis(const TetGeometry& geo, const Eigen::Vector4d& lambda) {
  Eigen::Matrix<double, 3, 4> r;
  for (int i = 0; i < 4; ++i) {
    const int a = kTetFaces[i][0], b = kTetFaces[i][1], c = kTetFaces[i][2];
    const Vector3 ga = geo.grad_lambda.row(a).transpose();
    const Vector3 gb = geo.grad_lambda.row(b).transpose();
    const Vector3 gc = geo.grad_lambda.row(c).transpose();
    r.col(i) = 2.0 * (lambda[a] * gb.cross(gc) + lambda[b] * gc.cross(ga) + lambda[c] * ga.cross(gb));
  }
  return r;
}

Eigen::Vector4d face_divs(const TetGeometry& geo) {
  Eigen::Vector4d d;
  for (int i = 0; i < 4; ++i) {
    const Vector3 ga = geo.grad_lambda.row(kTetFaces[i][0]).transpose();
    const Vector3 gb = geo.grad_lambda.row(kTetFaces[i][1]).transpose();
    const Vector3 gc = geo.grad_lambda.row(kTetFaces[i][2]).transpose();
    d[i] = 6.0 * ga.dot(gb.cross(gc));
  }
  return d;
}

}  // namespace local

namespace {

Eigen::Vector4d checked_barycentric(const Mesh& m, int t, const Point3& p) {
  const Eigen::Vector4d lambda = m.geometry(t).barycentric(p);
  if (lambda.minCoeff() < -kInsideTolerance)
    throw std::out_of_range("point lies outside tetrahedron " + std::to_string(t));
  return lambda;
}

}  // namespace

double eval_scalar(const Mesh& m, const FEFunction& f, int t, const Point3& p) {
  const Eigen::Vector4d lambda = checked_barycentric(m, t, p);
  switch (f.space) {
    case Space::Lagrange: {
      double v = 0.0;
      for (int i = 0; i < 4; ++i) v += lambda[i] * f.coeffs[m.tet(t)[i]];
      return v;
    }
    case Space::Cell: return f.coeffs[t];
    default: throw std::invalid_argument("eval_scalar needs a nodal or cell function");
  }
}

Vector3 eval_vector(const Mesh& m, const FEFunction& f, int t, const Point3& p) {
  const Eigen::Vector4d lambda = checked_barycentric(m, t, p);
  const auto& geo = m.geometry(t);
  Vector3 v = Vector3::Zero();
  switch (f.space) {
    case Space::Edge: {
      const auto w = local::edge_basis(geo, lambda);
      for (int i = 0; i < 6; ++i) v += f.coeffs[m.tet_edges(t)[i]] * w.col(i);
      return v;
    }
    case Space::Face: {
      const auto r = local::face_basis(geo, lambda);
      for (int i = 0; i < 4; ++i) v += f.coeffs[m.tet_faces(t)[i]] * r.col(i);
      return v;
    }
    default: throw std::invalid_argument("eval_vector needs an edge or face function");
  }
}

FieldValue eval_fe(const Mesh& m, const FEFunction& f, int t, const Point3& p) {
  if (f.space == Space::Lagrange || f.space == Space::Cell) return eval_scalar(m, f, t, p);
  return eval_vector(m, f, t, p);
}

int locate(const Mesh& m, const Point3& p) {
  for (int t = 0; t < m.num_tets(); ++t) {
    if (m.geometry(t).barycentric(p).minCoeff() >= -kInsideTolerance) return t;
  }
  return -1;
}

FEFunction differential(const Mesh& m, const IncidenceOperators& ops, const FEFunction& f) {
  switch (f.space) {
    case Space::Lagrange: return {Space::Edge, ops.G.cast<double>() * f.coeffs};
    case Space::Edge: return {Space::Face, ops.C.cast<double>() * f.coeffs};
    case Space::Face: {
      Eigen::VectorXd div = ops.D.cast<double>() * f.coeffs;
      for (int t = 0; t < m.num_tets(); ++t) div[t] /= m.volume(t);
      return {Space::Cell, div};
    }
    case Space::Cell: break;
  }
  throw std::invalid_argument("no differential on piecewise constants");
}

FEFunction interpolate_scalar(const Mesh& m, Space s, const ScalarField& fn, int degree) {
  FEFunction out = zero_function(m, s);
  if (s == Space::Lagrange) {
    for (int v = 0; v < m.num_vertices(); ++v) out.coeffs[v] = fn(m.vertex(v));
    return out;
  }
  if (s != Space::Cell) throw std::invalid_argument("interpolate_scalar needs L_h or PC_h");
  const auto& rule = make_quadrature(QuadratureKind::Tetrahedron, degree);
  for (int t = 0; t < m.num_tets(); ++t) {
    const auto& geo = m.geometry(t);
    double avg = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) avg += rule.weights[q] * fn(geo.point(rule.points[q]));
    out.coeffs[t] = avg / rule.reference_measure();
  }
  return out;
}

FEFunction interpolate_vector(const Mesh& m, Space s, const VectorField& fn, int degree) {
  FEFunction out = zero_function(m, s);
  if (s == Space::Edge) {
    const auto& rule = make_quadrature(QuadratureKind::Edge, degree);
    for (int e = 0; e < m.num_edges(); ++e) {
      const Point3& a = m.vertex(m.edge(e)[0]);
      const Point3& b = m.vertex(m.edge(e)[1]);
      double acc = 0.0;
      for (std::size_t q = 0; q < rule.size(); ++q)
        acc += rule.weights[q] * fn(a + rule.points[q][1] * (b - a)).dot(b - a);
      out.coeffs[e] = acc;
    }
    return out;
  }
  if (s != Space::Face) throw std::invalid_argument("interpolate_vector needs N_h or RT_h");
  const auto& rule = make_quadrature(QuadratureKind::Triangle, degree);
  for (int f = 0; f < m.num_faces(); ++f) {
    const Point3& a = m.vertex(m.face(f)[0]);
    const Point3& b = m.vertex(m.face(f)[1]);
    const Point3& c = m.vertex(m.face(f)[2]);
    const Vector3 area_normal = (b - a).cross(c - a);  // |.| = 2 * area
    double acc = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto& l = rule.points[q];
      acc += rule.weights[q] * fn(l[0] * a + l[1] * b + l[2] * c).dot(area_normal);
    }
    out.coeffs[f] = acc;
  }
  return out;
}

}  // namespace curldiv
