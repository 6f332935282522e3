#include "curldiv/exact.hpp"
#include "curldiv/topology.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace curldiv;
using testing_support::load;

namespace {

std::vector<exact::SparseIntRow> face_rows(const IncidenceOperators& ops, const std::vector<int>* faces = nullptr) {
  std::vector<exact::SparseIntRow> rows;
  auto add = [&](int f) {
    exact::SparseIntRow row;
    for (IntSparse::InnerIterator it(ops.C, f); it; ++it) row.emplace_back(static_cast<int>(it.col()), it.value());
    rows.push_back(row);
  };
  if (faces) {
    for (int f : *faces) add(f);
  } else {
    for (int f = 0; f < ops.C.rows(); ++f) add(f);
  }
  return rows;
}

exact::SparseIntRow chain_row(const EdgeChain& c) {
  exact::SparseIntRow row;
  for (const auto& [e, v] : c) row.emplace_back(e, v);
  return row;
}

bool is_cycle(const Mesh& m, const EdgeChain& c) {
  for (auto v : chain_boundary(m, c))
    if (v != 0) return false;
  return true;
}

}  // namespace

TEST(Betti, KnownTopologies) {
  struct Expect {
    const char* name;
    int b0, b1, b2;
  };
  for (const auto& e : {Expect{"single_tet.msh", 1, 0, 0}, Expect{"cube6.msh", 1, 0, 0},
                        Expect{"cube_n2.msh", 1, 0, 0}, Expect{"solid_torus.msh", 1, 1, 0},
                        Expect{"hollow_ball.msh", 1, 0, 1}, Expect{"double_torus.msh", 1, 2, 0}}) {
    const BettiNumbers b = betti(load(e.name));
    EXPECT_EQ(b.b0, e.b0) << e.name;
    EXPECT_EQ(b.b1, e.b1) << e.name;
    EXPECT_EQ(b.b2, e.b2) << e.name;
  }
}

TEST(Betti, EulerPoincare) {
  for (const auto& name : testing_support::fixture_names()) {
    const Mesh m = load(name);
    const BettiNumbers b = betti(m);
    EXPECT_EQ(m.euler_characteristic(), b.b0 - b.b1 + b.b2) << name;
  }
}

TEST(Tree, IsSpanningAndBoundaryFirst) {
  for (const auto& name : testing_support::fixture_names()) {
    const Mesh m = load(name);
    const MeshTopology topo = analyze_topology(m);
    const TreeCotree& tc = topo.tree;
    EXPECT_EQ(static_cast<int>(tc.tree_edges.size()), m.num_vertices() - 1) << name;
    EXPECT_EQ(tc.n_Q() + static_cast<int>(tc.tree_edges.size()), m.num_edges());
    // Acyclic: the tree edge incidence has full rank.
    std::vector<exact::SparseIntRow> rows;
    for (int e : tc.tree_edges) rows.push_back({{m.edge(e)[0], -1}, {m.edge(e)[1], 1}});
    EXPECT_EQ(exact::rank(rows, m.num_vertices()), m.num_vertices() - 1) << name;
    for (const auto& comp : topo.boundary.components) {
      int inside = 0;
      for (int e : comp.edges) inside += tc.in_tree[e];
      EXPECT_EQ(inside, static_cast<int>(comp.vertices.size()) - 1) << name;
    }
    // Closing edges come first among cotree edges and are boundary edges.
    for (int q = 0; q < tc.num_closing; ++q) EXPECT_EQ(tc.cotree_edges[q], topo.surface.closing_edges[q]);
    for (int l = 0; l < tc.n_Q(); ++l) EXPECT_EQ(tc.cotree_position[tc.cotree_edges[l]], l);
  }
}

TEST(Tree, FundamentalCyclesAreClosed) {
  const Mesh m = load("solid_torus.msh");
  const MeshTopology topo = analyze_topology(m);
  for (int e : topo.tree.cotree_edges) {
    const EdgeChain c = topo.tree.fundamental_cycle(m, e);
    EXPECT_TRUE(is_cycle(m, c));
    EXPECT_EQ(c.at(e), 1);
    for (const auto& [edge, v] : c)
      if (edge != e) EXPECT_TRUE(topo.tree.in_tree[edge]);
  }
}

TEST(Homology, SurfaceCyclesSpanBoundaryHomology) {
  for (const char* name : {"solid_torus.msh", "double_torus.msh"}) {
    const Mesh m = load(name);
    const MeshTopology topo = analyze_topology(m);
    const int g = topo.g();
    ASSERT_EQ(topo.surface.size(), 2 * g);
    std::vector<int> bfaces;
    for (const auto& comp : topo.boundary.components) bfaces.insert(bfaces.end(), comp.faces.begin(), comp.faces.end());
    auto rows = face_rows(topo.ops, &bfaces);
    const int base = exact::rank(rows, m.num_edges());
    for (int q = 0; q < topo.surface.size(); ++q) {
      const auto& gamma = topo.surface.cycles[q];
      const auto& edges = topo.boundary.components[topo.surface.component[q]].edges;
      EXPECT_TRUE(is_cycle(m, gamma));
      for (const auto& [e, v] : gamma) EXPECT_TRUE(std::binary_search(edges.begin(), edges.end(), e));
      rows.push_back(chain_row(gamma));
    }
    EXPECT_EQ(exact::rank(rows, m.num_edges()), base + 2 * g) << name;
  }
}

TEST(Homology, SigmaCyclesAreIndependentNonBoundingCycles) {
  for (const char* name : {"solid_torus.msh", "double_torus.msh", "hollow_ball.msh", "cube_n2.msh"}) {
    const Mesh m = load(name);
    const MeshTopology topo = analyze_topology(m);
    const BettiNumbers b = betti(m, topo.ops);
    EXPECT_EQ(topo.g(), b.b1) << name;
    auto rows = face_rows(topo.ops);
    const int base = exact::rank(rows, m.num_edges());
    for (const auto& sigma : topo.homology.cycles) {
      EXPECT_TRUE(is_cycle(m, sigma));
      rows.push_back(chain_row(sigma));
    }
    EXPECT_EQ(exact::rank(rows, m.num_edges()), base + topo.g()) << name;
  }
}

TEST(Homology, KernelCombinationsBoundInTheDomain) {
  for (const char* name : {"solid_torus.msh", "double_torus.msh"}) {
    const Mesh m = load(name);
    const MeshTopology topo = analyze_topology(m);
    const HomologyBasis& hb = topo.homology;
    ASSERT_EQ(hb.kernel_integer.size(), static_cast<std::size_t>(topo.g()));
    auto rows = face_rows(topo.ops);
    const int base = exact::rank(rows, m.num_edges());
    for (const auto& c : hb.kernel_integer) {
      for (int n = 0; n < topo.g(); ++n) {
        std::int64_t dot = 0;
        for (int q = 0; q < 2 * topo.g(); ++q) dot += hb.A[n][q] * c[q];
        EXPECT_EQ(dot, 0);
      }
      EdgeChain combo;
      for (int q = 0; q < 2 * topo.g(); ++q)
        for (const auto& [e, v] : topo.surface.cycles[q]) combo[e] += c[q] * v;
      auto with = rows;
      with.push_back(chain_row(combo));
      EXPECT_EQ(exact::rank(with, m.num_edges()), base) << name;
    }
  }
}

TEST(Homology, DeterministicForTheSameMesh) {
  const Mesh m = load("double_torus.msh");
  const MeshTopology a = analyze_topology(m);
  const MeshTopology b = analyze_topology(m);
  EXPECT_EQ(a.tree.cotree_edges, b.tree.cotree_edges);
  EXPECT_EQ(a.homology.A, b.homology.A);
  EXPECT_EQ(a.homology.cycles, b.homology.cycles);
}

TEST(Homology, ChainPeriodPairsCoefficients) {
  EdgeChain c = {{0, 2}, {3, -1}};
  Eigen::VectorXd v(4);
  v << 1.0, 5.0, 7.0, 0.5;
  EXPECT_DOUBLE_EQ(chain_period(c, v), 1.5);
}
