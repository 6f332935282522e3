#include "curldiv/cases.hpp"
#include "curldiv/errors.hpp"
#include "curldiv/potential.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace curldiv;
using testing_support::load;

namespace {

DivergenceData constant_divergence(const Mesh& m, double g, std::vector<double> alpha) {
  return {interpolate_scalar(m, Space::Cell, [g](const Point3&) { return g; }), std::move(alpha)};
}

}  // namespace

TEST(RtPotential, ConstantDivergenceOnCube) {
  const Mesh m = load("cube_n2.msh");
  const MeshTopology topo = analyze_topology(m);
  const DivergenceData dd = constant_divergence(m, 1.0, {});
  const FEFunction u = rt_potential(m, topo.boundary, dd);
  EXPECT_EQ(u.space, Space::Face);
  EXPECT_LE(divergence_residual(m, topo.ops, u, dd.g_h), 1e-12);
}

TEST(RtPotential, CavityFluxOnHollowBall) {
  const Mesh m = load("hollow_ball.msh");
  const MeshTopology topo = analyze_topology(m);
  const DivergenceData dd = constant_divergence(m, 0.0, {1.0});
  const FEFunction u = rt_potential(m, topo.boundary, dd);
  EXPECT_NEAR(component_flux(m, topo.boundary, u, 1), 1.0, 1e-10);
  EXPECT_LE(divergence_residual(m, topo.ops, u, dd.g_h), 1e-12);
  // Gauss: the external component carries the same flux out.
  EXPECT_NEAR(component_flux(m, topo.boundary, u, 0), -1.0, 1e-10);
}

TEST(RtPotential, ZeroDataGivesZero) {
  for (const char* name : {"cube6.msh", "hollow_ball.msh", "solid_torus.msh"}) {
    const Mesh m = load(name);
    const MeshTopology topo = analyze_topology(m);
    const FEFunction u = rt_potential(m, topo.boundary, constant_divergence(m, 0.0, std::vector<double>(topo.p(), 0.0)));
    EXPECT_EQ(u.coeffs.cwiseAbs().maxCoeff(), 0.0) << name;
  }
}

TEST(RtPotential, VariableDivergenceAndFluxBalance) {
  const Mesh m = load("hollow_ball.msh");
  const MeshTopology topo = analyze_topology(m);
  DivergenceData dd{interpolate_scalar(m, Space::Cell, [](const Point3& x) { return std::sin(x.x()) + x.y() * x.z(); }),
                    {-0.7}};
  const FEFunction u = rt_potential(m, topo.boundary, dd);
  EXPECT_LE(divergence_residual(m, topo.ops, u, dd.g_h), 1e-10 * (1.0 + dd.g_h.coeffs.cwiseAbs().maxCoeff()));
  EXPECT_NEAR(component_flux(m, topo.boundary, u, 1), -0.7, 1e-10);
  double total = 0.0;
  for (int t = 0; t < m.num_tets(); ++t) total += dd.g_h.coeffs[t] * m.volume(t);
  EXPECT_NEAR(component_flux(m, topo.boundary, u, 0) + component_flux(m, topo.boundary, u, 1), total, 1e-10);
}

TEST(RtPotential, RejectsMalformedData) {
  const Mesh m = load("hollow_ball.msh");
  const MeshTopology topo = analyze_topology(m);
  EXPECT_THROW(rt_potential(m, topo.boundary, constant_divergence(m, 0.0, {})), DataError);
  DivergenceData wrong_space{zero_function(m, Space::Lagrange), {0.0}};
  EXPECT_THROW(rt_potential(m, topo.boundary, wrong_space), DataError);
  DivergenceData nan = constant_divergence(m, 0.0, {std::nan("")});
  EXPECT_THROW(rt_potential(m, topo.boundary, nan), DataError);
}

TEST(NedelecPotential, ZeroDataGivesZero) {
  for (const char* name : {"cube6.msh", "solid_torus.msh", "double_torus.msh"}) {
    const Mesh m = load(name);
    const MeshTopology topo = analyze_topology(m);
    const CurlData cd{zero_function(m, Space::Face), std::vector<double>(topo.g(), 0.0)};
    const FEFunction u = nedelec_potential(m, topo.ops, topo.boundary, topo.tree, topo.homology, cd);
    EXPECT_EQ(u.coeffs.cwiseAbs().maxCoeff(), 0.0) << name;
  }
}

TEST(NedelecPotential, CurlOfSineFieldOnCube) {
  const Mesh m = load("cube_n2.msh");
  const MeshTopology topo = analyze_topology(m);
  // u = (sin(pi y), 0, 0), curl u = (0, 0, -pi cos(pi y)).
  const double pi = std::numbers::pi;
  const CurlData cd{interpolate_vector(m, Space::Face, [pi](const Point3& x) { return Vector3(0, 0, -pi * std::cos(pi * x.y())); }),
                    {}};
  const FEFunction u = nedelec_potential(m, topo.ops, topo.boundary, topo.tree, topo.homology, cd);
  EXPECT_LE(curl_residual(topo.ops, u, cd.J_h), 1e-10);
}

TEST(NedelecPotential, UnitPeriodOnSolidTorus) {
  const Mesh m = load("solid_torus.msh");
  const MeshTopology topo = analyze_topology(m);
  ASSERT_EQ(topo.g(), 1);
  const CurlData cd{zero_function(m, Space::Face), {1.0}};
  const FEFunction u = nedelec_potential(m, topo.ops, topo.boundary, topo.tree, topo.homology, cd);
  EXPECT_LE((topo.ops.C.cast<double>() * u.coeffs).cwiseAbs().maxCoeff(), 1e-12);
  double period = 0.0;
  for (const auto& [e, c] : topo.homology.cycles[0]) period += static_cast<double>(c) * u.coeffs[e];
  EXPECT_NEAR(period, 1.0, 1e-10);
}

TEST(NedelecPotential, PeriodsAndCurlOnDoubleTorus) {
  const Mesh m = load("double_torus.msh");
  const MeshTopology topo = analyze_topology(m);
  const ManufacturedCase& c = find_case("mms1");
  const CurlData cd{interpolate_vector(m, Space::Face, exact_field(c).curl), {0.25, -2.0}};
  const FEFunction u = nedelec_potential(m, topo.ops, topo.boundary, topo.tree, topo.homology, cd);
  EXPECT_LE(curl_residual(topo.ops, u, cd.J_h), 1e-10 * (1.0 + cd.J_h.coeffs.cwiseAbs().maxCoeff()));
  EXPECT_NEAR(chain_period(topo.homology.cycles[0], u.coeffs), 0.25, 1e-10);
  EXPECT_NEAR(chain_period(topo.homology.cycles[1], u.coeffs), -2.0, 1e-10);
}

TEST(NedelecPotential, TreeEdgesCarryNoCirculation) {
  const Mesh m = load("cube_n2.msh");
  const MeshTopology topo = analyze_topology(m);
  const CurlData cd{interpolate_vector(m, Space::Face, [](const Point3&) { return Vector3(1.0, 2.0, -0.5); }), {}};
  const FEFunction u = nedelec_potential(m, topo.ops, topo.boundary, topo.tree, topo.homology, cd);
  for (int e : topo.tree.tree_edges) EXPECT_EQ(u.coeffs[e], 0.0);
}

TEST(NedelecPotential, RejectsDivergentCurlData) {
  const Mesh m = load("cube_n2.msh");
  const MeshTopology topo = analyze_topology(m);
  const CurlData cd{interpolate_vector(m, Space::Face, [](const Point3& x) { return Vector3(x.x(), 0, 0); }), {}};
  EXPECT_THROW(nedelec_potential(m, topo.ops, topo.boundary, topo.tree, topo.homology, cd), DataError);
  const Mesh torus = load("solid_torus.msh");
  const MeshTopology tt = analyze_topology(torus);
  const CurlData wrong{zero_function(torus, Space::Face), {}};
  EXPECT_THROW(nedelec_potential(torus, tt.ops, tt.boundary, tt.tree, tt.homology, wrong), DataError);
}
