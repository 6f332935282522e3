#include "curldiv/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace curldiv {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

int dimension(QuadratureKind kind) {
  switch (kind) {
    case QuadratureKind::Edge: return 1;
    case QuadratureKind::Triangle: return 2;
    case QuadratureKind::Tetrahedron: return 3;
  }
  return 3;
}

void add_point(QuadratureRule& rule, double w, double x, double y = 0.0, double z = 0.0) {
  rule.points.emplace_back(1.0 - x - y - z, x, y, z);
  rule.weights.push_back(w);
}

void add_orbit_tri(QuadratureRule& rule, double a, double w) {
  const double b = 1.0 - 2.0 * a;
  add_point(rule, w, a, a);
  add_point(rule, w, a, b);
  add_point(rule, w, b, a);
}

void add_orbit_tet_aaab(QuadratureRule& rule, double a, double w) {
  const double b = 1.0 - 3.0 * a;
  add_point(rule, w, a, a, a);
  add_point(rule, w, b, a, a);
  add_point(rule, w, a, b, a);
  add_point(rule, w, a, a, b);
}

void add_orbit_tet_aabb(QuadratureRule& rule, double a, double w) {
  const double b = 0.5 - a;
  add_point(rule, w, a, a, b);
  add_point(rule, w, a, b, a);
  add_point(rule, w, b, a, a);
  add_point(rule, w, a, b, b);
  add_point(rule, w, b, a, b);
  add_point(rule, w, b, b, a);
}

QuadratureRule tabulated(QuadratureKind kind, int degree) {
  QuadratureRule rule;
  rule.kind = kind;
  switch (kind) {
    case QuadratureKind::Triangle:
      if (degree <= 1) {
        add_point(rule, 0.5, 1.0 / 3.0, 1.0 / 3.0);
        rule.degree = 1;
      } else if (degree == 2) {
        add_orbit_tri(rule, 1.0 / 6.0, 1.0 / 6.0);
        rule.degree = 2;
      } else {
        add_orbit_tri(rule, 0.44594849091596488632, 0.5 * 0.22338158967801146570);
        add_orbit_tri(rule, 0.09157621350977074346, 0.5 * 0.10995174365532186764);
        rule.degree = 4;
      }
      break;
    case QuadratureKind::Tetrahedron:
      if (degree <= 1) {
        add_point(rule, 1.0 / 6.0, 0.25, 0.25, 0.25);
        rule.degree = 1;
      } else if (degree == 2) {
        add_orbit_tet_aaab(rule, 0.13819660112501051518, 1.0 / 24.0);
        rule.degree = 2;
      } else {
        add_orbit_tet_aaab(rule, 0.09273525031089122640, 0.01224884051939365826);
        add_orbit_tet_aaab(rule, 0.31088591926330060980, 0.01878132095300264180);
        add_orbit_tet_aabb(rule, 0.04550370412564964949, 0.00709100346284691107);
        rule.degree = 5;
      }
      break;
    case QuadratureKind::Edge:
      break;
  }
  return rule;
}

QuadratureRule collapsed_gauss(QuadratureKind kind, int degree) {
  QuadratureRule rule;
  rule.kind = kind;
  std::vector<double> x, w;
  const int dim = dimension(kind);
  // The Duffy Jacobian adds dim-1 to the degree in the first direction.
  const int n = (degree + dim) / 2 + 1;
  gauss_legendre(n, x, w);
  if (kind == QuadratureKind::Edge) {
    for (int i = 0; i < n; ++i) add_point(rule, w[i], x[i]);
    rule.degree = 2 * n - 1;
  } else if (kind == QuadratureKind::Triangle) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double u = x[i], v = x[j];
        add_point(rule, w[i] * w[j] * (1.0 - u), u, (1.0 - u) * v);
      }
    }
    rule.degree = 2 * n - 2;
  } else {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          const double u = x[i], v = x[j], s = x[k];
          const double jac = (1.0 - u) * (1.0 - u) * (1.0 - v);
          add_point(rule, w[i] * w[j] * w[k] * jac, u, (1.0 - u) * v, (1.0 - u) * (1.0 - v) * s);
        }
      }
    }
    rule.degree = 2 * n - 3;
  }
  return rule;
}

void verify_exactness(const QuadratureRule& rule, int degree) {
  const int dim = dimension(rule.kind);
  for (int i = 0; i <= degree; ++i) {
    for (int j = 0; j <= (dim >= 2 ? degree - i : 0); ++j) {
      for (int k = 0; k <= (dim >= 3 ? degree - i - j : 0); ++k) {
        const double exact =
            factorial(i) * factorial(j) * factorial(k) / factorial(i + j + k + dim);
        double approx = 0.0;
        for (std::size_t q = 0; q < rule.size(); ++q) {
          const auto& p = rule.points[q];
          approx += rule.weights[q] * std::pow(p[1], i) * std::pow(p[2], j) * std::pow(p[3], k);
        }
        if (std::abs(approx - exact) > 1e-13 * std::max(1.0, exact) + 1e-15)
          throw std::logic_error("quadrature rule fails exactness for monomial (" +
                                 std::to_string(i) + "," + std::to_string(j) + "," +
                                 std::to_string(k) + ")");
      }
    }
  }
}

}  // namespace

double QuadratureRule::reference_measure() const {
  switch (kind) {
    case QuadratureKind::Edge: return 1.0;
    case QuadratureKind::Triangle: return 0.5;
    case QuadratureKind::Tetrahedron: return 1.0 / 6.0;
  }
  return 0.0;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Map from [-1, 1] to [0, 1].
    nodes[n - 1 - i] = 0.5 * (x + 1.0);
    weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
}

const QuadratureRule& make_quadrature(QuadratureKind kind, int degree) {
  if (degree < 0 || degree > kMaxQuadratureDegree)
    throw std::invalid_argument("unsupported quadrature degree " + std::to_string(degree));
  static std::mutex mutex;
  static std::map<std::pair<int, int>, QuadratureRule> cache;
  std::lock_guard lock(mutex);
  const auto key = std::make_pair(static_cast<int>(kind), degree);
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  QuadratureRule rule = (degree <= 4 && kind != QuadratureKind::Edge) ? tabulated(kind, degree)
                                                                      : collapsed_gauss(kind, degree);
  verify_exactness(rule, rule.degree);
  return cache.emplace(key, std::move(rule)).first->second;
}

}  // namespace curldiv
