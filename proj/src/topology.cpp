#include "curldiv/topology.hpp"

#include "curldiv/errors.hpp"
#include "curldiv/exact.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <string>

namespace curldiv {

namespace {

using exact::Rational;
using exact::SparseIntRow;

std::vector<SparseIntRow> rows_of(const IntSparse& a) {
  std::vector<SparseIntRow> rows(a.rows());
  for (int r = 0; r < a.outerSize(); ++r) {
    for (IntSparse::InnerIterator it(a, r); it; ++it) {
      if (it.value() != 0) rows[r].emplace_back(static_cast<int>(it.col()), it.value());
    }
  }
  return rows;
}

/// Edges of a face with the signs of its boundary.
std::array<std::pair<int, int>, 3> face_boundary(const Mesh& m, int f) {
  const auto& v = m.face(f);
  return {{{m.find_edge(v[0], v[1]), 1}, {m.find_edge(v[1], v[2]), 1}, {m.find_edge(v[0], v[2]), -1}}};
}

std::vector<std::vector<std::pair<int, int>>> vertex_adjacency(const Mesh& m) {
  std::vector<std::vector<std::pair<int, int>>> adj(m.num_vertices());
  for (int e = 0; e < m.num_edges(); ++e) {
    adj[m.edge(e)[0]].emplace_back(e, m.edge(e)[1]);
    adj[m.edge(e)[1]].emplace_back(e, m.edge(e)[0]);
  }
  return adj;
}

}  // namespace

std::vector<int> TreeCotree::ordering() const {
  std::vector<int> order = cotree_edges;
  order.insert(order.end(), tree_edges.begin(), tree_edges.end());
  return order;
}

EdgeChain TreeCotree::fundamental_cycle(const Mesh& m, int edge) const {
  EdgeChain chain;
  chain[edge] += 1;
  // Close the cycle by walking the tree from the head back to the tail.
  int x = m.edge(edge)[1];
  int y = m.edge(edge)[0];
  while (x != y) {
    if (depth[x] >= depth[y]) {
      const int e = parent_edge[x];
      chain[e] += (m.edge(e)[0] == x) ? 1 : -1;
      x = parent_vertex[x];
    } else {
      const int e = parent_edge[y];
      chain[e] += (m.edge(e)[0] == parent_vertex[y]) ? 1 : -1;
      y = parent_vertex[y];
    }
  }
  std::erase_if(chain, [](const auto& kv) { return kv.second == 0; });
  return chain;
}

TreeCotree build_boundary_first_tree(const Mesh& m, const BoundaryStructure& b) {
  const int nv = m.num_vertices();
  const int ne = m.num_edges();
  const auto adj = vertex_adjacency(m);

  TreeCotree tc;
  tc.in_tree.assign(ne, 0);
  std::vector<int> dsu(nv);
  std::iota(dsu.begin(), dsu.end(), 0);
  auto find = [&](int x) {
    while (dsu[x] != x) x = dsu[x] = dsu[dsu[x]];
    return x;
  };
  auto take = [&](int e) {
    tc.in_tree[e] = 1;
    dsu[find(m.edge(e)[0])] = find(m.edge(e)[1]);
  };

  std::vector<int> edge_component(ne, -1);
  for (int c = 0; c < static_cast<int>(b.components.size()); ++c) {
    for (int e : b.components[c].edges) edge_component[e] = c;
  }
  std::vector<char> seen(nv, 0);
  for (int r = 0; r <= b.p(); ++r) {
    const int c = b.component_of(r);
    const auto& comp = b.components[c];
    std::queue<int> queue;
    queue.push(comp.vertices.front());
    seen[comp.vertices.front()] = 1;
    std::size_t reached = 1;
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop();
      for (const auto& [e, v] : adj[u]) {
        if (edge_component[e] != c || seen[v]) continue;
        seen[v] = 1;
        ++reached;
        take(e);
        queue.push(v);
      }
    }
    if (reached != comp.vertices.size())
      throw TopologyError("boundary component " + std::to_string(c) + " has a disconnected edge graph");
  }

  std::vector<char> visited(nv, 0);
  std::queue<int> queue;
  queue.push(0);
  visited[0] = 1;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop();
    for (const auto& [e, v] : adj[u]) {
      if (find(u) != find(v)) take(e);
      if (!visited[v]) {
        visited[v] = 1;
        queue.push(v);
      }
    }
  }
  if (std::find(visited.begin(), visited.end(), 0) != visited.end())
    throw TopologyError("disconnected vertex graph");

  tc.cotree_position.assign(ne, -1);
  for (int e = 0; e < ne; ++e) {
    if (tc.in_tree[e]) {
      tc.tree_edges.push_back(e);
    } else {
      tc.cotree_position[e] = static_cast<int>(tc.cotree_edges.size());
      tc.cotree_edges.push_back(e);
    }
  }
  if (static_cast<int>(tc.tree_edges.size()) != nv - 1)
    throw TopologyError("spanning tree has the wrong number of edges");

  tc.parent_vertex.assign(nv, -1);
  tc.parent_edge.assign(nv, -1);
  tc.depth.assign(nv, 0);
  std::fill(visited.begin(), visited.end(), 0);
  queue.push(0);
  visited[0] = 1;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop();
    for (const auto& [e, v] : adj[u]) {
      if (!tc.in_tree[e] || visited[v]) continue;
      visited[v] = 1;
      tc.parent_vertex[v] = u;
      tc.parent_edge[v] = e;
      tc.depth[v] = tc.depth[u] + 1;
      queue.push(v);
    }
  }
  return tc;
}

SurfaceCycleBasis surface_cycle_basis(const Mesh& m, const BoundaryStructure& b, TreeCotree& tc) {
  SurfaceCycleBasis scb;
  for (int r = 0; r <= b.p(); ++r) {
    const int c = b.component_of(r);
    const auto& comp = b.components[c];
    std::vector<int> cols;
    std::vector<int> local(m.num_edges(), -1);
    for (int e : comp.edges) {
      if (tc.in_tree[e]) continue;
      local[e] = static_cast<int>(cols.size());
      cols.push_back(e);
    }
    std::vector<SparseIntRow> rows;
    rows.reserve(comp.faces.size());
    for (int f : comp.faces) {
      SparseIntRow row;
      for (const auto& [e, s] : face_boundary(m, f)) {
        if (local[e] >= 0) row.emplace_back(local[e], s);
      }
      std::sort(row.begin(), row.end());
      rows.push_back(std::move(row));
    }
    const auto elim = exact::eliminate(rows, static_cast<int>(cols.size()));
    if (elim.rank != static_cast<int>(comp.faces.size()) - 1)
      throw TopologyError("boundary component " + std::to_string(c) +
                          ": face boundaries have rank " + std::to_string(elim.rank) +
                          ", expected " + std::to_string(comp.faces.size() - 1));
    const int free = static_cast<int>(cols.size()) - elim.rank;
    if (free % 2 != 0)
      throw TopologyError("boundary component " + std::to_string(c) + " has odd first Betti number");
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if (elim.pivot_column[k]) continue;
      scb.closing_edges.push_back(cols[k]);
      scb.component.push_back(c);
      scb.cycles.push_back(tc.fundamental_cycle(m, cols[k]));
    }
  }

  std::vector<char> closing(m.num_edges(), 0);
  for (int e : scb.closing_edges) closing[e] = 1;
  std::vector<int> order = scb.closing_edges;
  for (int e : tc.cotree_edges) {
    if (!closing[e]) order.push_back(e);
  }
  std::sort(order.begin() + static_cast<std::ptrdiff_t>(scb.closing_edges.size()), order.end());
  tc.cotree_edges = std::move(order);
  tc.num_closing = static_cast<int>(scb.closing_edges.size());
  for (int l = 0; l < tc.n_Q(); ++l) tc.cotree_position[tc.cotree_edges[l]] = l;
  return scb;
}

HomologyBasis domain_homology_basis(const Mesh& m, const TreeCotree& tc, const SurfaceCycleBasis& scb) {
  const int nq = tc.n_Q();
  const int n_closing = tc.num_closing;
  if (n_closing != scb.size())
    throw TopologyError("tree-cotree ordering does not match the surface cycle basis");

  // Face boundaries with tree edges contracted; closing columns go last.
  std::vector<SparseIntRow> rows(m.num_faces());
  for (int f = 0; f < m.num_faces(); ++f) {
    for (const auto& [e, s] : face_boundary(m, f)) {
      if (tc.cotree_position[e] >= 0) rows[f].emplace_back(tc.cotree_position[e], s);
    }
    std::sort(rows[f].begin(), rows[f].end());
  }
  std::vector<int> stage(nq, 0);
  for (int l = 0; l < n_closing; ++l) stage[l] = 1;
  const auto elim = exact::eliminate(rows, nq, stage, 0);

  if (elim.rank != nq - n_closing)
    throw TopologyError("curls of the non-closing cotree fields are linearly dependent");

  // Combinations of the gamma_q that bound in the domain.
  exact::DenseMatrix bounding;
  for (const auto& row : elim.residual) {
    std::vector<Rational> dense(n_closing, Rational(0));
    for (const auto& [col, v] : row) {
      if (col >= n_closing) throw TopologyError("residual outside the closing columns");
      dense[col] = v;
    }
    bounding.push_back(std::move(dense));
  }
  exact::rref(bounding);
  const int total_rank = elim.rank + static_cast<int>(bounding.size());

  HomologyBasis hb;
  hb.g = nq - total_rank;
  if (2 * hb.g != n_closing)
    throw TopologyError("inconsistent ranks: first Betti number " + std::to_string(hb.g) +
                        " but the boundary has " + std::to_string(n_closing) + " independent cycles");
  if (hb.g == 0) return hb;

  for (const auto& row : bounding) {
    hb.kernel_integer.push_back(exact::primitive_integer(row));
    hb.kernel_vectors.emplace_back(hb.kernel_integer.back().begin(), hb.kernel_integer.back().end());
  }
  hb.A = exact::integer_kernel(bounding, n_closing);

  for (const auto& a_row : hb.A) {
    for (const auto& c : hb.kernel_integer) {
      std::int64_t dot = 0;
      for (int q = 0; q < n_closing; ++q) dot += a_row[q] * c[q];
      if (dot != 0) throw TopologyError("kernel vector not annihilated by A");
    }
    EdgeChain sigma;
    for (int q = 0; q < n_closing; ++q) {
      if (a_row[q] == 0) continue;
      for (const auto& [e, coef] : scb.cycles[q]) sigma[e] += a_row[q] * coef;
    }
    std::erase_if(sigma, [](const auto& kv) { return kv.second == 0; });
    EdgeChain tree_part;
    for (const auto& [e, coef] : sigma) {
      if (tc.in_tree[e]) tree_part[e] = coef;
    }
    hb.cycles.push_back(std::move(sigma));
    hb.tree_parts.push_back(std::move(tree_part));
  }
  return hb;
}

BettiNumbers betti(const Mesh& m, const IncidenceOperators& ops) {
  const int rg = exact::rank(rows_of(ops.G), m.num_vertices());
  const int rc = exact::rank(rows_of(ops.C), m.num_edges());
  const int rd = exact::rank(rows_of(ops.D), m.num_faces());
  BettiNumbers bn;
  bn.b0 = m.num_vertices() - rg;
  bn.b1 = m.num_edges() - rg - rc;
  bn.b2 = m.num_faces() - rc - rd;
  return bn;
}

BettiNumbers betti(const Mesh& m) { return betti(m, derive_incidence(m)); }

std::vector<std::int64_t> chain_boundary(const Mesh& m, const EdgeChain& chain) {
  std::vector<std::int64_t> out(m.num_vertices(), 0);
  for (const auto& [e, c] : chain) {
    out[m.edge(e)[1]] += c;
    out[m.edge(e)[0]] -= c;
  }
  return out;
}

double chain_period(const EdgeChain& chain, const Eigen::Ref<const Eigen::VectorXd>& values) {
  double s = 0.0;
  for (const auto& [e, c] : chain) s += static_cast<double>(c) * values[e];
  return s;
}

MeshTopology analyze_topology(const Mesh& m) {
  MeshTopology topo;
  topo.ops = derive_incidence(m);
  topo.boundary = extract_boundary(m);
  topo.tree = build_boundary_first_tree(m, topo.boundary);
  topo.surface = surface_cycle_basis(m, topo.boundary, topo.tree);
  topo.homology = domain_homology_basis(m, topo.tree, topo.surface);
  return topo;
}

}  // namespace curldiv
