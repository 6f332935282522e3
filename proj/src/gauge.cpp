#include "curldiv/gauge.hpp"

#include "curldiv/errors.hpp"

#include <cmath>
#include <string>

namespace curldiv {

GaugedCurlBasis build_N_star(const Mesh& m, const TreeCotree& tc, const HomologyBasis& hb) {
  const int g = hb.g;
  const int n_closing = tc.num_closing;
  if (n_closing != 2 * g) throw TopologyError("closing edge count does not match the homology basis");

  GaugedCurlBasis gb;
  gb.num_combined = g;
  std::vector<Eigen::Triplet<double>> trip;
  for (int lambda = 0; lambda < g; ++lambda) {
    for (int q = 0; q < n_closing; ++q) {
      const double c = hb.kernel_vectors[lambda][q];
      if (c != 0.0) trip.emplace_back(tc.cotree_edges[q], lambda, c);
    }
  }
  for (int l = n_closing; l < tc.n_Q(); ++l) {
    const int col = g + static_cast<int>(gb.plain_edges.size());
    trip.emplace_back(tc.cotree_edges[l], col, 1.0);
    gb.plain_edges.push_back(tc.cotree_edges[l]);
  }
  gb.fields.resize(m.num_edges(), g + static_cast<int>(gb.plain_edges.size()));
  gb.fields.setFromTriplets(trip.begin(), trip.end());
  return gb;
}

SparseMatrix curl_image_basis(const IncidenceOperators& ops, const GaugedCurlBasis& gb) {
  SparseMatrix b = ops.C.cast<double>() * gb.fields;
  b.prune(0.0);
  return b;
}

PeriodReport verify_periods(const GaugedCurlBasis& gb, const HomologyBasis& hb, double tol) {
  PeriodReport report;
  for (int lambda = 0; lambda < gb.num_combined; ++lambda) {
    const Eigen::VectorXd field = gb.fields.col(lambda);
    std::vector<double> row;
    for (const auto& sigma : hb.cycles) {
      const double period = chain_period(sigma, field);
      row.push_back(period);
      report.max_abs = std::max(report.max_abs, std::abs(period));
    }
    report.periods.push_back(std::move(row));
  }
  if (report.max_abs > tol)
    throw TopologyError("combined gauge field has nonzero period " + std::to_string(report.max_abs));
  return report;
}

ReducedNodalBasis build_L_star(const Mesh& m) {
  ReducedNodalBasis rb;
  rb.excluded_vertex = m.num_vertices() - 1;
  rb.retained.resize(m.num_vertices() - 1);
  for (int v = 0; v + 1 < m.num_vertices(); ++v) rb.retained[v] = v;
  return rb;
}

SparseMatrix gradient_basis(const IncidenceOperators& ops, const ReducedNodalBasis& rb) {
  std::vector<Eigen::Triplet<double>> trip;
  for (int k = 0; k < rb.size(); ++k) trip.emplace_back(rb.retained[k], k, 1.0);
  SparseMatrix select(ops.G.cols(), rb.size());
  select.setFromTriplets(trip.begin(), trip.end());
  return ops.G.cast<double>() * select;
}

}  // namespace curldiv
