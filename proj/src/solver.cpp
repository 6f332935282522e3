#include "curldiv/solver.hpp"

#include "curldiv/errors.hpp"
#include "curldiv/quadrature.hpp"

#include <cmath>
#include <sstream>

namespace curldiv {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

const QuadratureRule& tet_rule(int degree) { return make_quadrature(QuadratureKind::Tetrahedron, degree); }
const QuadratureRule& tri_rule(int degree) { return make_quadrature(QuadratureKind::Triangle, degree); }

/// Integral of the coefficient over one cell.
Matrix3 integrated_coefficient(const Mesh& m, const CoefficientField& c, int t, int degree) {
  const auto& geo = m.geometry(t);
  if (c.is_uniform()) return geo.volume * c.at(m, t, geo.centroid());
  const auto& q = tet_rule(degree);
  Matrix3 total = Matrix3::Zero();
  for (std::size_t k = 0; k < q.size(); ++k) total += q.weights[k] * c.at(m, t, geo.point(q.points[k]));
  return 6.0 * geo.volume * total;
}

/// Barycentric coordinates in the cell of a point given on local face j.
Eigen::Vector4d lift_to_cell(int j, const Eigen::Vector4d& tri) {
  Eigen::Vector4d lambda = Eigen::Vector4d::Zero();
  for (int k = 0; k < 3; ++k) lambda[kTetFaces[j][k]] = tri[k];
  return lambda;
}

Vector3 outward_normal(const Mesh& m, const BoundaryStructure& b, int f) {
  return b.outward_sign[f] * m.face_normal(f);
}

Eigen::VectorXd local_coeffs(const FEFunction& u, const std::array<int, 6>& edges) {
  Eigen::VectorXd c(6);
  for (int i = 0; i < 6; ++i) c[i] = u.coeffs[edges[i]];
  return c;
}

Eigen::Vector4d local_coeffs(const FEFunction& u, const std::array<int, 4>& faces) {
  Eigen::Vector4d c;
  for (int i = 0; i < 4; ++i) c[i] = u.coeffs[faces[i]];
  return c;
}

SparseMatrix symmetrized(const SparseMatrix& k) {
  SparseMatrix kt = k.transpose();
  SparseMatrix s = 0.5 * (k + kt);
  s.prune(0.0);
  return s;
}

double max_abs(const std::vector<double>& v) {
  double x = 0.0;
  for (double a : v) x = std::max(x, std::abs(a));
  return x;
}

/// Largest cell average of |div I^RT J| relative to the size of J.
double relative_divergence(const Mesh& m, const MeshTopology& topo, const FEFunction& J_h) {
  const Eigen::VectorXd d = topo.ops.D.cast<double>() * J_h.coeffs;
  double scale = 0.0;
  for (int f = 0; f < m.num_faces(); ++f) scale = std::max(scale, std::abs(J_h.coeffs[f]) / m.face_area(f));
  double worst = 0.0;
  for (int t = 0; t < m.num_tets(); ++t) worst = std::max(worst, std::abs(d[t]) / m.volume(t));
  return worst / (1.0 + scale);
}

}  // namespace

const char* to_string(Formulation f) { return f == Formulation::Tangential ? "tangential" : "normal"; }

ValidationReport validate_tangential(const TangentialProblem& p, const Mesh& m, const MeshTopology& topo,
                                     double tol) {
  ValidationReport report;
  const FEFunction J_h = interpolate_vector(m, Space::Face, p.J);
  report.div_J = relative_divergence(m, topo, J_h);
  if (report.div_J > tol) {
    std::ostringstream w;
    w << "div J is not zero: relative cell divergence " << report.div_J;
    report.warnings.push_back(w.str());
  }

  // Per boundary face: flux of J against the circulation of a along the
  // in-plane conormal of the face boundary (the surface divergence of a).
  const auto& edge_rule = make_quadrature(QuadratureKind::Edge, kInterpolationDegree);
  double scale = 0.0;
  double worst = 0.0;
  for (int f = 0; f < m.num_faces(); ++f) {
    if (!m.is_boundary_face(f)) continue;
    const Vector3 nf = m.face_normal(f);
    const Vector3 n = outward_normal(m, topo.boundary, f);
    const auto& v = m.face(f);
    double circulation = 0.0;
    for (int k = 0; k < 3; ++k) {
      const Point3& x0 = m.vertex(v[k]);
      const Point3& x1 = m.vertex(v[(k + 1) % 3]);
      const Vector3 tau = x1 - x0;
      const Vector3 conormal = tau.normalized().cross(nf);
      for (std::size_t q = 0; q < edge_rule.size(); ++q) {
        const Point3 x = edge_rule.points[q][0] * x0 + edge_rule.points[q][1] * x1;
        circulation += edge_rule.weights[q] * tau.norm() * p.a(x, n).dot(conormal);
      }
    }
    const double flux = topo.boundary.outward_sign[f] * J_h.coeffs[f];
    const double area = m.face_area(f);
    scale = std::max(scale, std::abs(flux) / area);
    worst = std::max(worst, std::abs(flux - circulation) / area);
  }
  report.trace_mismatch = worst / (1.0 + scale);
  if (report.trace_mismatch > tol) {
    std::ostringstream w;
    w << "J.n does not match the surface divergence of a: relative mismatch " << report.trace_mismatch;
    report.warnings.push_back(w.str());
  }
  report.length_ok = static_cast<int>(p.alpha.size()) == topo.p();
  if (!report.length_ok)
    report.warnings.push_back("expected " + std::to_string(topo.p()) + " component fluxes, got " +
                              std::to_string(p.alpha.size()));
  report.notes.push_back(
      "compatibility of J and a against the harmonic Neumann fields is not checked; those fields are not "
      "constructed");
  return report;
}

ValidationReport validate_normal(const NormalProblem& p, const Mesh& m, const MeshTopology& topo, double tol) {
  ValidationReport report;
  const FEFunction J_h = interpolate_vector(m, Space::Face, p.J);
  report.div_J = relative_divergence(m, topo, J_h);
  if (report.div_J > tol) {
    std::ostringstream w;
    w << "div J is not zero: relative cell divergence " << report.div_J;
    report.warnings.push_back(w.str());
  }

  const auto& qt = tet_rule(kDataQuadratureDegree);
  const auto& qf = tri_rule(kDataQuadratureDegree);
  double volume_term = 0.0, surface_term = 0.0, magnitude = 0.0;
  for (int t = 0; t < m.num_tets(); ++t) {
    const auto& geo = m.geometry(t);
    for (std::size_t k = 0; k < qt.size(); ++k) {
      const double v = 6.0 * geo.volume * qt.weights[k] * p.g(geo.point(qt.points[k]));
      volume_term += v;
      magnitude += std::abs(v);
    }
  }
  for (int f = 0; f < m.num_faces(); ++f) {
    if (!m.is_boundary_face(f)) continue;
    const Vector3 n = outward_normal(m, topo.boundary, f);
    const auto& v = m.face(f);
    for (std::size_t k = 0; k < qf.size(); ++k) {
      const Point3 x = qf.points[k][0] * m.vertex(v[0]) + qf.points[k][1] * m.vertex(v[1]) +
                       qf.points[k][2] * m.vertex(v[2]);
      const double s = 2.0 * m.face_area(f) * qf.weights[k] * p.b(x, n);
      surface_term += s;
      magnitude += std::abs(s);
    }
  }
  report.balance_mismatch = std::abs(volume_term - surface_term) / (1.0 + magnitude);
  if (report.balance_mismatch > tol) {
    std::ostringstream w;
    w << "int g differs from the boundary integral of b: relative mismatch " << report.balance_mismatch;
    report.warnings.push_back(w.str());
  }
  report.length_ok = static_cast<int>(p.beta.size()) == topo.g();
  if (!report.length_ok)
    report.warnings.push_back("expected " + std::to_string(topo.g()) + " periods, got " +
                              std::to_string(p.beta.size()));
  return report;
}

SparseMatrix curl_curl_matrix(const Mesh& m, const CoefficientField& eta, int degree) {
  Triplets trip;
  trip.reserve(36 * m.num_tets());
  for (int t = 0; t < m.num_tets(); ++t) {
    const Eigen::Matrix<double, 3, 6> c = local::edge_curls(m.geometry(t));
    const Eigen::Matrix<double, 6, 6> k = c.transpose() * integrated_coefficient(m, eta, t, degree) * c;
    const auto& e = m.tet_edges(t);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) trip.emplace_back(e[i], e[j], k(i, j));
  }
  SparseMatrix k(m.num_edges(), m.num_edges());
  k.setFromTriplets(trip.begin(), trip.end());
  return k;
}

SparseMatrix stiffness_matrix(const Mesh& m, const CoefficientField& mu, int degree) {
  Triplets trip;
  trip.reserve(16 * m.num_tets());
  for (int t = 0; t < m.num_tets(); ++t) {
    const auto& geo = m.geometry(t);
    const Eigen::Matrix4d k = geo.grad_lambda * integrated_coefficient(m, mu, t, degree) * geo.grad_lambda.transpose();
    const auto& v = m.tet(t);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) trip.emplace_back(v[i], v[j], k(i, j));
  }
  SparseMatrix k(m.num_vertices(), m.num_vertices());
  k.setFromTriplets(trip.begin(), trip.end());
  return k;
}

AssembledSystem assemble_tangential(const TangentialProblem& p, const Mesh& m, const MeshTopology& topo,
                                    const GaugedCurlBasis& gb, const FEFunction& lift, int degree) {
  if (lift.space != Space::Face || lift.coeffs.size() != m.num_faces())
    throw std::invalid_argument("tangential lift must be a Raviart-Thomas function");
  const auto& qt = tet_rule(degree);
  const auto& qf = tri_rule(degree);

  // Load against every edge function; the reduced right-hand side follows
  // by restriction to the gauged basis.
  Eigen::VectorXd load = Eigen::VectorXd::Zero(m.num_edges());
  for (int t = 0; t < m.num_tets(); ++t) {
    const auto& geo = m.geometry(t);
    const auto& edges = m.tet_edges(t);
    const Eigen::Vector4d u_star = local_coeffs(lift, m.tet_faces(t));
    const Eigen::Matrix<double, 3, 6> curls = local::edge_curls(geo);
    Eigen::Matrix<double, 6, 1> local = Eigen::Matrix<double, 6, 1>::Zero();
    for (std::size_t k = 0; k < qt.size(); ++k) {
      const Point3 x = geo.point(qt.points[k]);
      const double w = 6.0 * geo.volume * qt.weights[k];
      const Vector3 flux = p.eta.at(m, t, x) * (local::face_basis(geo, qt.points[k]) * u_star);
      local += w * (local::edge_basis(geo, qt.points[k]).transpose() * p.J(x) - curls.transpose() * flux);
    }
    for (int j = 0; j < 4; ++j) {
      const int f = m.tet_faces(t)[j];
      if (!m.is_boundary_face(f)) continue;
      const Vector3 n = outward_normal(m, topo.boundary, f);
      const double area = m.face_area(f);
      for (std::size_t k = 0; k < qf.size(); ++k) {
        const Eigen::Vector4d lambda = lift_to_cell(j, qf.points[k]);
        const Point3 x = geo.point(lambda);
        Vector3 a = p.a(x, n);
        a -= a.dot(n) * n;
        local += 2.0 * area * qf.weights[k] * (local::edge_basis(geo, lambda).transpose() * a);
      }
    }
    for (int i = 0; i < 6; ++i) load[edges[i]] += local[i];
  }

  const SparseMatrix kn = curl_curl_matrix(m, p.eta, degree);
  const SparseMatrix ft = gb.fields.transpose();
  AssembledSystem sys;
  sys.K = symmetrized(ft * (kn * gb.fields));
  sys.rhs = ft * load;
  sys.dof_map.assign(gb.num_combined, -1);
  sys.dof_map.insert(sys.dof_map.end(), gb.plain_edges.begin(), gb.plain_edges.end());
  return sys;
}

AssembledSystem assemble_normal(const NormalProblem& p, const Mesh& m, const MeshTopology& topo,
                                const ReducedNodalBasis& rb, const FEFunction& lift, int degree) {
  if (lift.space != Space::Edge || lift.coeffs.size() != m.num_edges())
    throw std::invalid_argument("normal lift must be a Nedelec function");
  const auto& qt = tet_rule(degree);
  const auto& qf = tri_rule(degree);

  Eigen::VectorXd load = Eigen::VectorXd::Zero(m.num_vertices());
  for (int t = 0; t < m.num_tets(); ++t) {
    const auto& geo = m.geometry(t);
    const Eigen::VectorXd u_star = local_coeffs(lift, m.tet_edges(t));
    Eigen::Vector4d local = Eigen::Vector4d::Zero();
    for (std::size_t k = 0; k < qt.size(); ++k) {
      const Point3 x = geo.point(qt.points[k]);
      const double w = 6.0 * geo.volume * qt.weights[k];
      const Vector3 flux = p.mu.at(m, t, x) * (local::edge_basis(geo, qt.points[k]) * u_star);
      local -= w * (p.g(x) * qt.points[k] + geo.grad_lambda * flux);
    }
    for (int j = 0; j < 4; ++j) {
      const int f = m.tet_faces(t)[j];
      if (!m.is_boundary_face(f)) continue;
      const Vector3 n = outward_normal(m, topo.boundary, f);
      const double area = m.face_area(f);
      for (std::size_t k = 0; k < qf.size(); ++k) {
        const Eigen::Vector4d lambda = lift_to_cell(j, qf.points[k]);
        local += 2.0 * area * qf.weights[k] * p.b(geo.point(lambda), n) * lambda;
      }
    }
    for (int i = 0; i < 4; ++i) load[m.tet(t)[i]] += local[i];
  }

  Triplets trip;
  for (int k = 0; k < rb.size(); ++k) trip.emplace_back(rb.retained[k], k, 1.0);
  SparseMatrix select(m.num_vertices(), rb.size());
  select.setFromTriplets(trip.begin(), trip.end());
  const SparseMatrix st = select.transpose();

  AssembledSystem sys;
  sys.K = symmetrized(st * (stiffness_matrix(m, p.mu, degree) * select));
  sys.rhs = st * load;
  sys.dof_map = rb.retained;
  return sys;
}

Eigen::VectorXd solve_spd(const AssembledSystem& s, double tol, int maxit, SolveStats* stats) {
  const auto n = s.K.rows();
  if (s.K.cols() != n || s.rhs.size() != n) throw std::invalid_argument("system dimensions do not match");
  if (maxit <= 0) maxit = 10 * static_cast<int>(std::max<Eigen::Index>(n, 1));
  SolveStats local;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  const double bnorm = s.rhs.norm();
  if (!std::isfinite(bnorm)) throw SolverError("right-hand side is not finite");
  if (bnorm == 0.0) {
    if (stats) *stats = local;
    return x;
  }
  const Eigen::VectorXd diag = s.K.diagonal();
  if ((diag.array() <= 0.0).any()) throw SolverError("matrix has a non-positive diagonal entry");
  const Eigen::VectorXd inv_diag = diag.cwiseInverse();

  local.min_curvature = std::numeric_limits<double>::infinity();
  Eigen::VectorXd r = s.rhs;
  Eigen::VectorXd z = inv_diag.cwiseProduct(r);
  Eigen::VectorXd p = z;
  double rz = r.dot(z);
  for (int it = 1; it <= maxit; ++it) {
    const Eigen::VectorXd kp = s.K * p;
    const double pkp = p.dot(kp);
    const double pp = p.squaredNorm();
    if (!(pkp > 0.0))
      throw SolverError("non-positive curvature p^T K p = " + std::to_string(pkp) + " at iteration " +
                        std::to_string(it));
    local.min_curvature = std::min(local.min_curvature, pkp / pp);
    const double step = rz / pkp;
    x += step * p;
    r -= step * kp;
    local.iterations = it;
    local.relative_residual = r.norm() / bnorm;
    if (local.relative_residual <= tol) {
      // Guard against drift of the recursive residual.
      r = s.rhs - s.K * x;
      local.relative_residual = r.norm() / bnorm;
      if (local.relative_residual <= tol) {
        if (stats) *stats = local;
        return x;
      }
    }
    z = inv_diag.cwiseProduct(r);
    const double rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }
  throw SolverError("conjugate gradients did not converge in " + std::to_string(maxit) +
                    " iterations (relative residual " + std::to_string(local.relative_residual) + ")");
}

Solution recover_solution(const MeshTopology& topo, const GaugedCurlBasis& gb, const Eigen::VectorXd& coeffs,
                          const FEFunction& lift) {
  Solution sol;
  sol.kind = Formulation::Tangential;
  sol.coeffs = coeffs;
  sol.lift = lift;
  sol.correction = FEFunction{Space::Face, curl_image_basis(topo.ops, gb) * coeffs};
  sol.u_h = FEFunction{Space::Face, sol.correction.coeffs + lift.coeffs};
  return sol;
}

Solution recover_solution(const MeshTopology& topo, const ReducedNodalBasis& rb, const Eigen::VectorXd& coeffs,
                          const FEFunction& lift) {
  Solution sol;
  sol.kind = Formulation::Normal;
  sol.coeffs = coeffs;
  sol.lift = lift;
  sol.correction = FEFunction{Space::Edge, gradient_basis(topo.ops, rb) * coeffs};
  sol.u_h = FEFunction{Space::Edge, sol.correction.coeffs + lift.coeffs};
  return sol;
}

FEFunction tangential_lift(const Mesh& m, const MeshTopology& topo, const TangentialProblem& p) {
  return rt_potential(m, topo.boundary, DivergenceData{interpolate_scalar(m, Space::Cell, p.g), p.alpha});
}

FEFunction normal_lift(const Mesh& m, const MeshTopology& topo, const NormalProblem& p) {
  return nedelec_potential(m, topo.ops, topo.boundary, topo.tree, topo.homology,
                           CurlData{interpolate_vector(m, Space::Face, p.J), p.beta});
}

Solution solve_tangential(const Mesh& m, const MeshTopology& topo, const TangentialProblem& p,
                          const SolverOptions& opts, const std::optional<FEFunction>& lift) {
  if (static_cast<int>(p.alpha.size()) != topo.p())
    throw DataError("expected " + std::to_string(topo.p()) + " component fluxes, got " +
                    std::to_string(p.alpha.size()));
  const GaugedCurlBasis gb = build_N_star(m, topo.tree, topo.homology);
  verify_periods(gb, topo.homology);
  const FEFunction g_h = interpolate_scalar(m, Space::Cell, p.g);
  const FEFunction u_star =
      lift ? *lift : rt_potential(m, topo.boundary, DivergenceData{g_h, p.alpha});
  const AssembledSystem sys = assemble_tangential(p, m, topo, gb, u_star, opts.quadrature_degree);
  SolveStats stats;
  const Eigen::VectorXd x = solve_spd(sys, opts.tol, opts.maxit, &stats);
  Solution sol = recover_solution(topo, gb, x, u_star);
  sol.stats = stats;

  sol.constraint_residual = divergence_residual(m, topo.ops, sol.u_h, g_h);
  for (int r = 1; r <= topo.p(); ++r) {
    sol.topology_residual = std::max(sol.topology_residual,
                                     std::abs(component_flux(m, topo.boundary, sol.u_h, r) - p.alpha[r - 1]));
  }
  if (sol.constraint_residual > 1e-10 * (1.0 + g_h.coeffs.cwiseAbs().maxCoeff()))
    throw DataError("solution violates div u = g_h: residual " + std::to_string(sol.constraint_residual));
  if (sol.topology_residual > 1e-10 * (1.0 + max_abs(p.alpha)))
    throw DataError("solution violates the component fluxes: mismatch " + std::to_string(sol.topology_residual));
  return sol;
}

Solution solve_normal(const Mesh& m, const MeshTopology& topo, const NormalProblem& p,
                      const SolverOptions& opts, const std::optional<FEFunction>& lift) {
  if (static_cast<int>(p.beta.size()) != topo.g())
    throw DataError("expected " + std::to_string(topo.g()) + " periods, got " + std::to_string(p.beta.size()));
  const ReducedNodalBasis rb = build_L_star(m);
  const FEFunction J_h = interpolate_vector(m, Space::Face, p.J);
  const FEFunction u_star =
      lift ? *lift
           : nedelec_potential(m, topo.ops, topo.boundary, topo.tree, topo.homology, CurlData{J_h, p.beta});
  const AssembledSystem sys = assemble_normal(p, m, topo, rb, u_star, opts.quadrature_degree);
  SolveStats stats;
  const Eigen::VectorXd x = solve_spd(sys, opts.tol, opts.maxit, &stats);
  Solution sol = recover_solution(topo, rb, x, u_star);
  sol.stats = stats;

  sol.constraint_residual = curl_residual(topo.ops, sol.u_h, J_h);
  for (int n = 0; n < topo.g(); ++n) {
    sol.topology_residual = std::max(
        sol.topology_residual, std::abs(chain_period(topo.homology.cycles[n], sol.u_h.coeffs) - p.beta[n]));
  }
  if (sol.constraint_residual > 1e-10 * (1.0 + J_h.coeffs.cwiseAbs().maxCoeff()))
    throw DataError("solution violates curl u = J_h: residual " + std::to_string(sol.constraint_residual));
  if (sol.topology_residual > 1e-10 * (1.0 + max_abs(p.beta)))
    throw DataError("solution violates the periods: mismatch " + std::to_string(sol.topology_residual));
  return sol;
}

ErrorNorms error_norms(const Mesh& m, const FEFunction& u_h, const ExactField& exact, int degree) {
  if (u_h.space != Space::Face && u_h.space != Space::Edge)
    throw std::invalid_argument("error_norms expects an edge or face field");
  const auto& q = tet_rule(degree);
  const bool face = u_h.space == Space::Face;
  double l2 = 0.0, d2 = 0.0;
  for (int t = 0; t < m.num_tets(); ++t) {
    const auto& geo = m.geometry(t);
    Eigen::VectorXd c;
    double div_h = 0.0;
    Vector3 curl_h = Vector3::Zero();
    if (face) {
      c = local_coeffs(u_h, m.tet_faces(t));
      div_h = local::face_divs(geo).dot(c);
    } else {
      c = local_coeffs(u_h, m.tet_edges(t));
      curl_h = local::edge_curls(geo) * c;
    }
    for (std::size_t k = 0; k < q.size(); ++k) {
      const Point3 x = geo.point(q.points[k]);
      const double w = 6.0 * geo.volume * q.weights[k];
      const Vector3 uh = face ? Vector3(local::face_basis(geo, q.points[k]) * c)
                              : Vector3(local::edge_basis(geo, q.points[k]) * c);
      l2 += w * (exact.u(x) - uh).squaredNorm();
      if (face) {
        const double e = exact.div(x) - div_h;
        d2 += w * e * e;
      } else {
        d2 += w * (exact.curl(x) - curl_h).squaredNorm();
      }
    }
  }
  ErrorNorms e;
  e.l2 = std::sqrt(l2);
  e.d = std::sqrt(d2);
  e.graph = std::sqrt(l2 + d2);
  return e;
}

}  // namespace curldiv
