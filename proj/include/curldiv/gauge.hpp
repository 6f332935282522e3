#pragma once

#include "curldiv/topology.hpp"

#include <Eigen/SparseCore>

#include <vector>

namespace curldiv {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Edge fields omega_l whose curls form a basis of the discretely
/// divergence-free Raviart-Thomas fields with zero flux through every
/// internal boundary component. Column l of `fields` holds the N_h
/// coefficients of omega_l: the first g columns are the combined fields
/// sum_q c^(lambda)_q w_{e_q}, the remaining ones the plain cotree fields
/// w_e for the non-closing cotree edges in cotree order.
struct GaugedCurlBasis {
  int num_combined = 0;
  SparseMatrix fields;             // n_e x (n_Q - g)
  std::vector<int> plain_edges;    // edge of each plain column, in column order

  int size() const { return static_cast<int>(fields.cols()); }
};

GaugedCurlBasis build_N_star(const Mesh& m, const TreeCotree& tc, const HomologyBasis& hb);

/// Raviart-Thomas coefficients of curl omega_l, one column per basis field.
SparseMatrix curl_image_basis(const IncidenceOperators& ops, const GaugedCurlBasis& gb);

/// Periods of the combined fields along the homology generators.
struct PeriodReport {
  std::vector<std::vector<double>> periods;  // [combined field][sigma_n]
  double max_abs = 0.0;
};

/// Throws TopologyError if any period exceeds `tol` in magnitude.
PeriodReport verify_periods(const GaugedCurlBasis& gb, const HomologyBasis& hb, double tol = 1e-10);

/// Nodal basis without the highest-numbered vertex.
struct ReducedNodalBasis {
  int excluded_vertex = -1;
  std::vector<int> retained;  // ascending

  int size() const { return static_cast<int>(retained.size()); }
};

ReducedNodalBasis build_L_star(const Mesh& m);

/// Gradients of the retained nodal functions, as N_h coefficient columns.
SparseMatrix gradient_basis(const IncidenceOperators& ops, const ReducedNodalBasis& rb);

}  // namespace curldiv
