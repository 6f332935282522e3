#pragma once

#include "curldiv/topology.hpp"
#include "curldiv/whitney.hpp"

#include <vector>

namespace curldiv {

/// Prescribed divergence (cell values) and fluxes through the internal
/// boundary components (dOmega)_r, r = 1..p. The flux through the external
/// component is whatever closes the balance.
struct DivergenceData {
  FEFunction g_h;              // PC_h
  std::vector<double> alpha;   // length p
};

/// Prescribed curl (face fluxes) and circulations along sigma_n.
struct CurlData {
  FEFunction J_h;             // RT_h
  std::vector<double> beta;   // length g
};

/// Raviart-Thomas field with div = g_h and the prescribed component fluxes.
/// Built by a spanning tree of the dual graph rooted at the external boundary:
/// internal components receive alpha_r spread by face area, non-tree faces
/// carry zero flux, and tree fluxes follow leaf-to-root from the cell
/// balances. Throws DataError for malformed data and TopologyError if the
/// sweep cannot reach every cell.
FEFunction rt_potential(const Mesh& m, const BoundaryStructure& b, const DivergenceData& dd);

/// Nedelec field with curl = J_h and the prescribed periods. Tree edges get
/// zero circulation; face equations with a single unknown cotree edge are
/// resolved in sweep order; unknowns left by the sweep are fixed by a
/// least-squares solve of the remaining face equations together with the
/// period equations. Throws DataError if J_h is not in the range of curl.
FEFunction nedelec_potential(const Mesh& m, const IncidenceOperators& ops, const BoundaryStructure& b,
                             const TreeCotree& tc, const HomologyBasis& hb, const CurlData& cd);

/// Flux of an RT_h field through (dOmega)_r, taken with the outward normal.
double component_flux(const Mesh& m, const BoundaryStructure& b, const FEFunction& u, int r);

/// Largest cell-wise |div u - g_h|.
double divergence_residual(const Mesh& m, const IncidenceOperators& ops, const FEFunction& u,
                           const FEFunction& g_h);

/// Largest face-wise |curl u - J_h| (as fluxes).
double curl_residual(const IncidenceOperators& ops, const FEFunction& u, const FEFunction& J_h);

}  // namespace curldiv
