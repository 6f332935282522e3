#include "curldiv/exact.hpp"
#include "curldiv/gauge.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace curldiv;
using testing_support::load;

namespace {

/// Curl images of the gauged fields as exact integer rows (one per field).
std::vector<exact::SparseIntRow> integer_curls(const IncidenceOperators& ops, const GaugedCurlBasis& gb) {
  const SparseMatrix b = curl_image_basis(ops, gb);
  std::vector<exact::SparseIntRow> rows(b.cols());
  for (int l = 0; l < b.outerSize(); ++l) {
    for (SparseMatrix::InnerIterator it(b, l); it; ++it) {
      const double v = it.value();
      EXPECT_EQ(v, std::round(v));
      rows[l].emplace_back(static_cast<int>(it.row()), static_cast<std::int64_t>(std::llround(v)));
    }
  }
  return rows;
}

}  // namespace

TEST(Gauge, DimensionIdentity) {
  for (const auto& name : testing_support::fixture_names()) {
    const Mesh m = load(name);
    const MeshTopology topo = analyze_topology(m);
    const GaugedCurlBasis gb = build_N_star(m, topo.tree, topo.homology);
    EXPECT_EQ(gb.size(), topo.tree.n_Q() - topo.g()) << name;
    EXPECT_EQ(gb.size(), m.num_faces() - m.num_tets() - topo.p()) << name;
    EXPECT_EQ(exact::rank(integer_curls(topo.ops, gb), m.num_faces()), gb.size()) << name;
  }
}

TEST(Gauge, CurlsAreExactlyDivergenceFree) {
  for (const auto& name : testing_support::fixture_names()) {
    const Mesh m = load(name);
    const MeshTopology topo = analyze_topology(m);
    const GaugedCurlBasis gb = build_N_star(m, topo.tree, topo.homology);
    const auto rows = integer_curls(topo.ops, gb);
    for (const auto& row : rows) {
      std::vector<std::int64_t> div(m.num_tets(), 0);
      for (const auto& [f, v] : row)
        for (int i = 0; i < 2; ++i) {
          const int t = m.face_tets(f)[i];
          if (t < 0) continue;
          for (int j = 0; j < 4; ++j)
            if (m.tet_faces(t)[j] == f) div[t] += m.tet_face_signs(t)[j] * v;
        }
      for (auto d : div) EXPECT_EQ(d, 0) << name;
    }
  }
}

TEST(Gauge, CurlsHaveNoFluxThroughBoundaryComponents) {
  const Mesh m = load("hollow_ball.msh");
  const MeshTopology topo = analyze_topology(m);
  const GaugedCurlBasis gb = build_N_star(m, topo.tree, topo.homology);
  const SparseMatrix b = curl_image_basis(topo.ops, gb);
  for (int l = 0; l < b.cols(); ++l) {
    const Eigen::VectorXd col = b.col(l);
    for (int r = 0; r <= topo.p(); ++r) {
      double flux = 0.0;
      for (int f : topo.boundary.components[topo.boundary.component_of(r)].faces)
        flux += topo.boundary.outward_sign[f] * col[f];
      EXPECT_EQ(flux, 0.0);
    }
  }
}

TEST(Gauge, CombinedFieldsHaveZeroPeriods) {
  for (const char* name : {"solid_torus.msh", "double_torus.msh"}) {
    const Mesh m = load(name);
    const MeshTopology topo = analyze_topology(m);
    const GaugedCurlBasis gb = build_N_star(m, topo.tree, topo.homology);
    EXPECT_EQ(gb.num_combined, topo.g());
    const PeriodReport pr = verify_periods(gb, topo.homology);
    EXPECT_LE(pr.max_abs, 1e-10);
    ASSERT_EQ(pr.periods.size(), static_cast<std::size_t>(topo.g()));
    // A single closing-edge field w_{e_q} has period A(n, q) along sigma_n.
    for (int q = 0; q < topo.tree.num_closing; ++q) {
      const Eigen::VectorXd w = Eigen::VectorXd::Unit(m.num_edges(), topo.surface.closing_edges[q]);
      for (int n = 0; n < topo.g(); ++n)
        EXPECT_EQ(chain_period(topo.homology.cycles[n], w), static_cast<double>(topo.homology.A[n][q]));
    }
  }
}

TEST(Gauge, PlainFieldsFollowCotreeOrder) {
  const Mesh m = load("solid_torus.msh");
  const MeshTopology topo = analyze_topology(m);
  const GaugedCurlBasis gb = build_N_star(m, topo.tree, topo.homology);
  ASSERT_EQ(static_cast<int>(gb.plain_edges.size()), topo.tree.n_Q() - topo.tree.num_closing);
  for (std::size_t k = 0; k < gb.plain_edges.size(); ++k) {
    EXPECT_EQ(gb.plain_edges[k], topo.tree.cotree_edges[topo.tree.num_closing + k]);
    const Eigen::VectorXd col = gb.fields.col(gb.num_combined + static_cast<int>(k));
    EXPECT_EQ(col.cwiseAbs().sum(), 1.0);
    EXPECT_EQ(col[gb.plain_edges[k]], 1.0);
  }
}

TEST(Gauge, ReducedNodalBasisDropsLastVertex) {
  const Mesh m = load("cube6.msh");
  const ReducedNodalBasis rb = build_L_star(m);
  EXPECT_EQ(rb.excluded_vertex, 7);
  EXPECT_EQ(rb.size(), 7);
  const IncidenceOperators ops = derive_incidence(m);
  const SparseMatrix g = gradient_basis(ops, rb);
  EXPECT_EQ(g.rows(), m.num_edges());
  EXPECT_EQ(g.cols(), 7);
  // Gradients of the retained nodal functions are independent.
  EXPECT_EQ(Eigen::MatrixXd(g).fullPivLu().rank(), 7);
}
