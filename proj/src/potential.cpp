#include "curldiv/potential.hpp"

#include "curldiv/errors.hpp"

#include <Eigen/Dense>
#include <Eigen/OrderingMethods>
#include <Eigen/SparseQR>

#include <cmath>
#include <deque>
#include <queue>
#include <string>

namespace curldiv {

double component_flux(const Mesh& m, const BoundaryStructure& b, const FEFunction& u, int r) {
  (void)m;
  double flux = 0.0;
  for (int f : b.components[b.component_of(r)].faces) flux += b.outward_sign[f] * u.coeffs[f];
  return flux;
}

double divergence_residual(const Mesh& m, const IncidenceOperators& ops, const FEFunction& u,
                           const FEFunction& g_h) {
  const Eigen::VectorXd d = ops.D.cast<double>() * u.coeffs;
  double worst = 0.0;
  for (int t = 0; t < m.num_tets(); ++t) worst = std::max(worst, std::abs(d[t] / m.volume(t) - g_h.coeffs[t]));
  return worst;
}

double curl_residual(const IncidenceOperators& ops, const FEFunction& u, const FEFunction& J_h) {
  const Eigen::VectorXd c = ops.C.cast<double>() * u.coeffs;
  return (c - J_h.coeffs).cwiseAbs().maxCoeff();
}

FEFunction rt_potential(const Mesh& m, const BoundaryStructure& b, const DivergenceData& dd) {
  const int nt = m.num_tets();
  const int nf = m.num_faces();
  if (dd.g_h.space != Space::Cell || dd.g_h.coeffs.size() != nt)
    throw DataError("divergence data must be a piecewise-constant function");
  if (static_cast<int>(dd.alpha.size()) != b.p())
    throw DataError("expected " + std::to_string(b.p()) + " component fluxes, got " +
                    std::to_string(dd.alpha.size()));
  if (!dd.g_h.coeffs.allFinite()) throw DataError("non-finite divergence data");
  for (double a : dd.alpha) {
    if (!std::isfinite(a)) throw DataError("non-finite component flux");
  }

  Eigen::VectorXd flux = Eigen::VectorXd::Zero(nf);
  std::vector<char> known(nf, 0);
  for (int r = 1; r <= b.p(); ++r) {
    const auto& faces = b.components[b.component_of(r)].faces;
    double area = 0.0;
    for (int f : faces) area += m.face_area(f);
    for (int f : faces) {
      flux[f] = b.outward_sign[f] * dd.alpha[r - 1] * m.face_area(f) / area;
      known[f] = 1;
    }
  }

  // Dual graph: cells plus one ghost node standing for the external boundary.
  const int external = b.external_index;
  std::vector<int> parent_face(nt, -1);
  std::vector<char> reached(nt, 0);
  std::vector<int> order;
  order.reserve(nt);
  std::queue<int> queue;
  for (int f : b.components[external].faces) {
    const int t = m.face_tets(f)[0];
    if (reached[t]) continue;
    reached[t] = 1;
    parent_face[t] = f;
    queue.push(t);
  }
  while (!queue.empty()) {
    const int t = queue.front();
    queue.pop();
    order.push_back(t);
    for (int f : m.tet_faces(t)) {
      if (m.is_boundary_face(f)) continue;
      const auto& adj = m.face_tets(f);
      const int other = adj[0] == t ? adj[1] : adj[0];
      if (reached[other]) continue;
      reached[other] = 1;
      parent_face[other] = f;
      queue.push(other);
    }
  }
  if (static_cast<int>(order.size()) != nt)
    throw TopologyError("singular sweep: the dual graph does not reach every cell");

  std::vector<char> is_tree(nf, 0);
  for (int t = 0; t < nt; ++t) is_tree[parent_face[t]] = 1;
  for (int f = 0; f < nf; ++f) {
    if (!is_tree[f]) known[f] = 1;
  }

  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int t = *it;
    double rhs = dd.g_h.coeffs[t] * m.volume(t);
    int pf_sign = 0;
    for (int i = 0; i < 4; ++i) {
      const int f = m.tet_faces(t)[i];
      const int s = m.tet_face_signs(t)[i];
      if (f == parent_face[t]) {
        pf_sign = s;
      } else {
        if (!known[f]) throw TopologyError("singular sweep: unresolved face flux");
        rhs -= s * flux[f];
      }
    }
    flux[parent_face[t]] = rhs / pf_sign;
    known[parent_face[t]] = 1;
  }

  FEFunction u{Space::Face, flux};
  IncidenceOperators ops;
  {
    std::vector<Eigen::Triplet<int>> trip;
    for (int t = 0; t < nt; ++t)
      for (int i = 0; i < 4; ++i) trip.emplace_back(t, m.tet_faces(t)[i], m.tet_face_signs(t)[i]);
    ops.D.resize(nt, nf);
    ops.D.setFromTriplets(trip.begin(), trip.end());
  }
  const double scale = 1.0 + dd.g_h.coeffs.cwiseAbs().maxCoeff();
  if (divergence_residual(m, ops, u, dd.g_h) > 1e-10 * scale)
    throw TopologyError("singular sweep: divergence residual too large");
  return u;
}

FEFunction nedelec_potential(const Mesh& m, const IncidenceOperators& ops, const BoundaryStructure& b,
                             const TreeCotree& tc, const HomologyBasis& hb, const CurlData& cd) {
  const int ne = m.num_edges();
  const int nf = m.num_faces();
  if (cd.J_h.space != Space::Face || cd.J_h.coeffs.size() != nf)
    throw DataError("curl data must be a Raviart-Thomas function");
  if (static_cast<int>(cd.beta.size()) != hb.g)
    throw DataError("expected " + std::to_string(hb.g) + " periods, got " + std::to_string(cd.beta.size()));
  if (!cd.J_h.coeffs.allFinite()) throw DataError("non-finite curl data");

  const Eigen::VectorXd& J = cd.J_h.coeffs;
  const double jmax = J.size() ? J.cwiseAbs().maxCoeff() : 0.0;
  const Eigen::VectorXd div = ops.D.cast<double>() * J;
  if (div.size() && div.cwiseAbs().maxCoeff() > 1e-10 * std::max(jmax, 1e-300))
    throw DataError("incompatible curl data: discrete divergence " +
                    std::to_string(div.cwiseAbs().maxCoeff()));
  for (int r = 1; r <= b.p(); ++r) {
    const double flux = component_flux(m, b, cd.J_h, r);
    if (std::abs(flux) > 1e-10 * std::max(jmax, 1e-300) * b.components[b.component_of(r)].faces.size())
      throw DataError("incompatible curl data: nonzero flux through boundary component " + std::to_string(r));
  }

  // Face-edge structure from the incidence matrix.
  std::vector<std::array<std::pair<int, int>, 3>> face_edges(nf);
  std::vector<std::vector<int>> edge_faces(ne);
  for (int f = 0; f < nf; ++f) {
    int k = 0;
    for (IntSparse::InnerIterator it(ops.C, f); it; ++it) {
      face_edges[f][k++] = {static_cast<int>(it.col()), it.value()};
      edge_faces[it.col()].push_back(f);
    }
  }

  Eigen::VectorXd x = Eigen::VectorXd::Zero(ne);
  std::vector<char> known(ne, 0);
  for (int e : tc.tree_edges) known[e] = 1;
  std::vector<int> unknown_count(nf, 0);
  std::deque<int> ready;
  for (int f = 0; f < nf; ++f) {
    for (const auto& [e, s] : face_edges[f]) unknown_count[f] += !known[e];
    if (unknown_count[f] == 1) ready.push_back(f);
  }
  while (!ready.empty()) {
    const int f = ready.front();
    ready.pop_front();
    if (unknown_count[f] != 1) continue;
    int target = -1, target_sign = 0;
    double rhs = J[f];
    for (const auto& [e, s] : face_edges[f]) {
      if (known[e]) {
        rhs -= s * x[e];
      } else {
        target = e;
        target_sign = s;
      }
    }
    x[target] = rhs / target_sign;
    known[target] = 1;
    for (int nf2 : edge_faces[target]) {
      if (--unknown_count[nf2] == 1) ready.push_back(nf2);
    }
  }

  std::vector<int> unknowns;
  std::vector<int> column(ne, -1);
  for (int e = 0; e < ne; ++e) {
    if (!known[e]) {
      column[e] = static_cast<int>(unknowns.size());
      unknowns.push_back(e);
    }
  }

  if (!unknowns.empty()) {
    // Remaining face equations plus one equation per homology generator.
    std::vector<Eigen::Triplet<double>> trip;
    std::vector<double> rhs;
    int row = 0;
    for (int f = 0; f < nf; ++f) {
      if (unknown_count[f] == 0) continue;
      double r = J[f];
      for (const auto& [e, s] : face_edges[f]) {
        if (column[e] >= 0) {
          trip.emplace_back(row, column[e], s);
        } else {
          r -= s * x[e];
        }
      }
      rhs.push_back(r);
      ++row;
    }
    for (int n = 0; n < hb.g; ++n) {
      double r = cd.beta[n];
      for (const auto& [e, c] : hb.cycles[n]) {
        if (column[e] >= 0) {
          trip.emplace_back(row, column[e], static_cast<double>(c));
        } else {
          r -= static_cast<double>(c) * x[e];
        }
      }
      rhs.push_back(r);
      ++row;
    }
    const int ncols = static_cast<int>(unknowns.size());
    Eigen::Map<const Eigen::VectorXd> b_vec(rhs.data(), row);
    Eigen::VectorXd sol;
    if (ncols <= 1500) {
      Eigen::MatrixXd a = Eigen::MatrixXd::Zero(row, ncols);
      for (const auto& t : trip) a(t.row(), t.col()) += t.value();
      sol = a.completeOrthogonalDecomposition().solve(b_vec);
    } else {
      Eigen::SparseMatrix<double> a(row, ncols);
      a.setFromTriplets(trip.begin(), trip.end());
      a.makeCompressed();
      Eigen::SparseQR<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> qr(a);
      if (qr.info() != Eigen::Success) throw TopologyError("period system factorisation failed");
      sol = qr.solve(b_vec);
    }
    for (int k = 0; k < ncols; ++k) x[unknowns[k]] = sol[k];
  }

  FEFunction u{Space::Edge, x};
  if (curl_residual(ops, u, cd.J_h) > 1e-10 * (1.0 + jmax))
    throw DataError("incompatible curl data: curl residual " + std::to_string(curl_residual(ops, u, cd.J_h)));
  for (int n = 0; n < hb.g; ++n) {
    if (std::abs(chain_period(hb.cycles[n], x) - cd.beta[n]) > 1e-10 * (1.0 + std::abs(cd.beta[n])))
      throw TopologyError("period system unsolvable for generator " + std::to_string(n));
  }
  return u;
}

}  // namespace curldiv
