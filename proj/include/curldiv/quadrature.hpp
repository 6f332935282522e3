#pragma once

#include <Eigen/Core>

#include <vector>

namespace curldiv {

enum class QuadratureKind { Edge, Triangle, Tetrahedron };

/// Quadrature on a reference simplex. Points are barycentric coordinates
/// (the first dim+1 entries are used); weights sum to the reference measure
/// (1, 1/2, 1/6).
struct QuadratureRule {
  QuadratureKind kind = QuadratureKind::Tetrahedron;
  int degree = 0;  // polynomial exactness, verified on construction
  std::vector<Eigen::Vector4d> points;
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
  double reference_measure() const;
};

inline constexpr int kMaxQuadratureDegree = 30;

/// Returns a cached rule exact for polynomials of total degree `degree`.
/// Degrees up to 4 use tabulated symmetric rules; higher degrees use
/// collapsed Gauss-Legendre products. Every rule is checked against the
/// exact integrals of all monomials up to its degree before it is handed
/// out. Throws std::invalid_argument for degrees outside [0, 30].
const QuadratureRule& make_quadrature(QuadratureKind kind, int degree);

/// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace curldiv
