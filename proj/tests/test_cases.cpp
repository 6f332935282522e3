#include "curldiv/cases.hpp"
#include "curldiv/errors.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace curldiv;
using testing_support::load;

TEST(Cases, RegistryContents) {
  const std::vector<std::string> names = case_names();
  for (const char* n : {"mms1", "mms1-aniso", "linear", "constant", "constant-aniso"})
    EXPECT_NE(std::find(names.begin(), names.end(), n), names.end()) << n;
  for (const auto& n : names) EXPECT_LE(jacobian_consistency(find_case(n)), 1e-8) << n;
  EXPECT_TRUE(find_case("constant").constant);
  EXPECT_FALSE(find_case("mms1").constant);
}

TEST(Cases, UnknownNameThrows) { EXPECT_THROW(find_case("no-such-case"), DataError); }

TEST(Cases, InconsistentJacobianIsDetected) {
  ManufacturedCase c = find_case("linear");
  c.Du = [](const Point3&) { return Matrix3::Identity().eval(); };
  EXPECT_GT(jacobian_consistency(c), 0.5);
}

TEST(Cases, Mms1Data) {
  const Mesh m = load("cube_n2.msh");
  const MeshTopology topo = analyze_topology(m);
  const TangentialProblem p = tangential_problem(find_case("mms1"), m, topo);
  const double pi = std::numbers::pi;
  std::mt19937 gen(1);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const Point3 x(dist(gen), dist(gen), dist(gen));
    const Vector3 J(-pi * std::cos(pi * x.z()), -pi * std::cos(pi * x.x()), -pi * std::cos(pi * x.y()));
    EXPECT_LE((p.J(x) - J).norm(), 1e-13);
    EXPECT_NEAR(p.g(x), 1.0, 1e-15);
    const Vector3 n = Vector3(dist(gen), dist(gen), dist(gen)).normalized();
    const Vector3 u(std::sin(pi * x.y()) + x.x(), std::sin(pi * x.z()), std::sin(pi * x.x()));
    EXPECT_LE((p.a(x, n) - u.cross(n)).norm(), 1e-14);
  }
  EXPECT_TRUE(p.alpha.empty());
}

TEST(Cases, AnisotropicDataUseTheMatrix) {
  const Mesh m = load("hollow_ball.msh");
  const MeshTopology topo = analyze_topology(m);
  const ManufacturedCase& c = find_case("constant-aniso");
  const NormalProblem np = normal_problem(c, m, topo);
  const Vector3 n(0.0, 0.0, 1.0);
  EXPECT_NEAR(np.b(Point3(0.5, 0.5, 1.0), n), (c.M * c.u(Point3::Zero())).dot(n), 1e-15);
  EXPECT_EQ(np.mu.kind(), CoefficientField::Kind::Constant);
  // Flux of a constant field through a closed surface vanishes.
  const TangentialProblem tp = tangential_problem(c, m, topo);
  ASSERT_EQ(tp.alpha.size(), 1u);
  EXPECT_NEAR(tp.alpha[0], 0.0, 1e-12);
}

TEST(Cases, CirculationsAlongGenerators) {
  const Mesh m = load("solid_torus.msh");
  const MeshTopology topo = analyze_topology(m);
  // A gradient field has zero circulation; the constant field is one.
  const NormalProblem c = normal_problem(find_case("constant"), m, topo);
  ASSERT_EQ(c.beta.size(), 1u);
  EXPECT_NEAR(c.beta[0], 0.0, 1e-13);
  // The generator winds once around the hole: the circulation of the
  // irrotational vortex field about the hole axis is 2 pi.
  const double beta = chain_circulation(m, topo.homology.cycles[0], [](const Point3& x) -> Vector3 {
    const double dx = x.x() - 1.5, dy = x.y() - 1.5;
    return Vector3(-dy, dx, 0.0) / (dx * dx + dy * dy);
  });
  EXPECT_NEAR(std::abs(beta), 2.0 * std::numbers::pi, 1e-4);  // rational integrand, inexact quadrature
}

TEST(Cases, BoundaryFluxOfRadialField) {
  const Mesh m = load("hollow_ball.msh");
  const MeshTopology topo = analyze_topology(m);
  // Divergence 3 field: flux out of the domain through the cavity is -3 |cavity|.
  const Point3 lo = topo.boundary.components[topo.boundary.component_of(1)].bbox_min;
  const Point3 hi = topo.boundary.components[topo.boundary.component_of(1)].bbox_max;
  const double vol = (hi - lo).prod();
  EXPECT_NEAR(boundary_flux(m, topo.boundary, [](const Point3& x) { return x; }, 1), -3.0 * vol, 1e-12);
}
