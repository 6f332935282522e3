#pragma once

#include "curldiv/mesh.hpp"

#include <cstdint>
#include <map>
#include <vector>

namespace curldiv {

/// Integer 1-chain: edge index -> coefficient, zero entries omitted.
using EdgeChain = std::map<int, std::int64_t>;

/// Spanning tree of the vertex-edge graph whose restriction to every boundary
/// component spans that component, together with the complementary cotree.
struct TreeCotree {
  std::vector<char> in_tree;        // per edge
  std::vector<int> tree_edges;      // ascending, n_v - 1 of them
  std::vector<int> cotree_edges;    // closing edges first, then ascending
  std::vector<int> cotree_position; // per edge, -1 for tree edges
  int num_closing = 0;              // 2g once surface cycles are known

  // Tree rooted at vertex 0.
  std::vector<int> parent_vertex;  // -1 at the root
  std::vector<int> parent_edge;    // -1 at the root
  std::vector<int> depth;

  int n_Q() const { return static_cast<int>(cotree_edges.size()); }
  /// Cotree edges first, then tree edges: position l holds edge ordering()[l].
  std::vector<int> ordering() const;
  /// Cycle closed by a cotree edge through the tree, traversing the edge forwards.
  EdgeChain fundamental_cycle(const Mesh& m, int edge) const;
};

/// Breadth-first spanning trees on each boundary component (seeded at the
/// component's lowest vertex), extended breadth-first from vertex 0 to a
/// spanning tree of the whole graph. Throws TopologyError if the vertex graph
/// is disconnected.
TreeCotree build_boundary_first_tree(const Mesh& m, const BoundaryStructure& b);

/// Cycles gamma_q closed by the boundary edges e_q, whose classes form a basis
/// of the first homology of the boundary surface.
struct SurfaceCycleBasis {
  std::vector<int> closing_edges;  // e_q, q = 0..2g-1
  std::vector<int> component;      // boundary component of each e_q
  std::vector<EdgeChain> cycles;   // gamma_q
  int size() const { return static_cast<int>(cycles.size()); }
};

/// Picks, on each boundary component, the boundary cotree edges left without
/// a pivot when the face boundaries (tree edges contracted) are eliminated.
/// Reorders `tc` so that the closing edges come first among cotree edges.
SurfaceCycleBasis surface_cycle_basis(const Mesh& m, const BoundaryStructure& b, TreeCotree& tc);

/// Homology generators sigma_n = sum_q A(n,q) gamma_q of the domain and a
/// basis c^(lambda) of ker A.
struct HomologyBasis {
  int g = 0;
  std::vector<std::vector<std::int64_t>> A;               // g x 2g
  std::vector<EdgeChain> cycles;                          // sigma_n
  std::vector<EdgeChain> tree_parts;                      // a_{n,i}: tree-edge coefficients
  std::vector<std::vector<std::int64_t>> kernel_integer;  // c^(lambda), primitive
  std::vector<std::vector<double>> kernel_vectors;        // same, as reals
};

/// Computes g from the rank of the face-cotree incidence, the subspace of
/// surface-cycle combinations that bound in the domain (this is ker A), and
/// sigma_n spanning its orthogonal complement. Throws TopologyError when the
/// surface and domain ranks disagree.
HomologyBasis domain_homology_basis(const Mesh& m, const TreeCotree& tc,
                                    const SurfaceCycleBasis& scb);

struct BettiNumbers {
  int b0 = 0;
  int b1 = 0;
  int b2 = 0;
};

/// Betti numbers from exact ranks of the incidence matrices over Q.
BettiNumbers betti(const Mesh& m);
BettiNumbers betti(const Mesh& m, const IncidenceOperators& ops);

/// Vertex coefficients of the boundary of an edge chain.
std::vector<std::int64_t> chain_boundary(const Mesh& m, const EdgeChain& chain);

/// Pairing of an edge chain with edge values: sum_e chain[e] * values[e].
double chain_period(const EdgeChain& chain, const Eigen::Ref<const Eigen::VectorXd>& values);

/// Everything the solvers need about the complex, computed once.
struct MeshTopology {
  IncidenceOperators ops;
  BoundaryStructure boundary;
  TreeCotree tree;
  SurfaceCycleBasis surface;
  HomologyBasis homology;

  int g() const { return homology.g; }
  int p() const { return boundary.p(); }
};

MeshTopology analyze_topology(const Mesh& m);

}  // namespace curldiv
