#include "curldiv/cases.hpp"

#include "curldiv/errors.hpp"
#include "curldiv/quadrature.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>

namespace curldiv {

namespace {

constexpr double kPi = std::numbers::pi;

Matrix3 anisotropic_matrix() {
  Matrix3 m;
  m << 2.0, 0.5, 0.0, 0.5, 1.5, 0.2, 0.0, 0.2, 1.0;
  return m;
}

Vector3 curl_of(const Matrix3& d) {
  return {d(2, 1) - d(1, 2), d(0, 2) - d(2, 0), d(1, 0) - d(0, 1)};
}

ManufacturedCase mms1(std::string name, const Matrix3& m) {
  ManufacturedCase c;
  c.name = std::move(name);
  c.description = "u = (sin(pi y) + x, sin(pi z), sin(pi x))";
  c.M = m;
  c.u = [](const Point3& x) {
    return Vector3(std::sin(kPi * x.y()) + x.x(), std::sin(kPi * x.z()), std::sin(kPi * x.x()));
  };
  c.Du = [](const Point3& x) {
    Matrix3 d = Matrix3::Zero();
    d(0, 0) = 1.0;
    d(0, 1) = kPi * std::cos(kPi * x.y());
    d(1, 2) = kPi * std::cos(kPi * x.z());
    d(2, 0) = kPi * std::cos(kPi * x.x());
    return d;
  };
  return c;
}

ManufacturedCase linear_case() {
  ManufacturedCase c;
  c.name = "linear";
  c.description = "u = (x + y, z, x)";
  c.u = [](const Point3& x) { return Vector3(x.x() + x.y(), x.z(), x.x()); };
  c.Du = [](const Point3&) {
    Matrix3 d;
    d << 1, 1, 0, 0, 0, 1, 1, 0, 0;
    return d;
  };
  return c;
}

ManufacturedCase constant_case(std::string name, const Vector3& value, const Matrix3& m) {
  ManufacturedCase c;
  c.name = std::move(name);
  std::ostringstream d;
  d << "u = (" << value.x() << ", " << value.y() << ", " << value.z() << ")";
  c.description = d.str();
  c.M = m;
  c.constant = true;
  c.u = [value](const Point3&) { return value; };
  c.Du = [](const Point3&) { return Matrix3::Zero().eval(); };
  return c;
}

std::vector<ManufacturedCase> build_registry() {
  std::vector<ManufacturedCase> cases;
  cases.push_back(mms1("mms1", Matrix3::Identity()));
  cases.push_back(mms1("mms1-aniso", anisotropic_matrix()));
  cases.push_back(linear_case());
  cases.push_back(constant_case("constant", Vector3(1.0, 0.0, 0.0), Matrix3::Identity()));
  cases.push_back(constant_case("constant-aniso", Vector3(1.0, -2.0, 0.5), anisotropic_matrix()));
  for (const auto& c : cases) {
    const double err = jacobian_consistency(c);
    if (err > 1e-8)
      throw DataError("case '" + c.name + "' has an inconsistent Jacobian (deviation " + std::to_string(err) + ")");
  }
  return cases;
}

const std::vector<ManufacturedCase>& registry() {
  static const std::vector<ManufacturedCase> cases = build_registry();
  return cases;
}

}  // namespace

std::vector<std::string> case_names() {
  std::vector<std::string> names;
  for (const auto& c : registry()) names.push_back(c.name);
  return names;
}

const ManufacturedCase& find_case(const std::string& name) {
  for (const auto& c : registry()) {
    if (c.name == name) return c;
  }
  std::string known;
  for (const auto& n : case_names()) known += (known.empty() ? "" : ", ") + n;
  throw DataError("unknown case '" + name + "' (known: " + known + ")");
}

double jacobian_consistency(const ManufacturedCase& c, int samples, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  const double h = 1e-5;
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Point3 x(dist(gen), dist(gen), dist(gen));
    const Matrix3 d = c.Du(x);
    for (int j = 0; j < 3; ++j) {
      const Vector3 e = h * Vector3::Unit(j);
      const Vector3 fd = (c.u(x + e) - c.u(x - e)) / (2.0 * h);
      worst = std::max(worst, (fd - d.col(j)).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

ExactField exact_field(const ManufacturedCase& c) {
  ExactField e;
  e.u = c.u;
  auto du = c.Du;
  e.div = [du](const Point3& x) { return du(x).trace(); };
  e.curl = [du](const Point3& x) { return curl_of(du(x)); };
  return e;
}

CoefficientField case_coefficient(const ManufacturedCase& c) {
  if (c.M == Matrix3::Identity()) return CoefficientField::identity();
  return CoefficientField::constant(c.M);
}

double boundary_flux(const Mesh& m, const BoundaryStructure& b, const VectorField& u, int r, int degree) {
  const auto& q = make_quadrature(QuadratureKind::Triangle, degree);
  double flux = 0.0;
  for (int f : b.components[b.component_of(r)].faces) {
    const auto& v = m.face(f);
    const Vector3 n = b.outward_sign[f] * m.face_normal(f);
    double s = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k) {
      const Point3 x = q.points[k][0] * m.vertex(v[0]) + q.points[k][1] * m.vertex(v[1]) +
                       q.points[k][2] * m.vertex(v[2]);
      s += q.weights[k] * u(x).dot(n);
    }
    flux += 2.0 * m.face_area(f) * s;
  }
  return flux;
}

double chain_circulation(const Mesh& m, const EdgeChain& chain, const VectorField& u, int degree) {
  const auto& q = make_quadrature(QuadratureKind::Edge, degree);
  double total = 0.0;
  for (const auto& [e, coeff] : chain) {
    const Point3& x0 = m.vertex(m.edge(e)[0]);
    const Point3& x1 = m.vertex(m.edge(e)[1]);
    const Vector3 tau = x1 - x0;
    double s = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k) s += q.weights[k] * u(q.points[k][0] * x0 + q.points[k][1] * x1).dot(tau);
    total += static_cast<double>(coeff) * s;
  }
  return total;
}

TangentialProblem tangential_problem(const ManufacturedCase& c, const Mesh& m, const MeshTopology& topo) {
  TangentialProblem p;
  p.eta = case_coefficient(c);
  const Matrix3 M = c.M;
  const auto u = c.u;
  const auto du = c.Du;
  p.J = [M, du](const Point3& x) { return curl_of(M * du(x)); };
  p.g = [du](const Point3& x) { return du(x).trace(); };
  p.a = [M, u](const Point3& x, const Vector3& n) { return Vector3((M * u(x)).cross(n)); };
  for (int r = 1; r <= topo.p(); ++r) p.alpha.push_back(boundary_flux(m, topo.boundary, c.u, r));
  return p;
}

NormalProblem normal_problem(const ManufacturedCase& c, const Mesh& m, const MeshTopology& topo) {
  NormalProblem p;
  p.mu = case_coefficient(c);
  const Matrix3 M = c.M;
  const auto u = c.u;
  const auto du = c.Du;
  p.J = [du](const Point3& x) { return curl_of(du(x)); };
  p.g = [M, du](const Point3& x) { return (M * du(x)).trace(); };
  p.b = [M, u](const Point3& x, const Vector3& n) { return (M * u(x)).dot(n); };
  for (const auto& sigma : topo.homology.cycles) p.beta.push_back(chain_circulation(m, sigma, c.u));
  return p;
}

}  // namespace curldiv
