#pragma once

#include "curldiv/solver.hpp"

#include <string>
#include <vector>

namespace curldiv {

/// Manufactured solution: an exact field u with its Jacobian (Du)_{ij} =
/// d u_i / d x_j and a constant material matrix M used as eta (tangential)
/// or mu (normal). All problem data are derived from these.
struct ManufacturedCase {
  std::string name;
  std::string description;
  Matrix3 M = Matrix3::Identity();
  VectorField u;
  std::function<Matrix3(const Point3&)> Du;
  bool constant = false;  // u is a constant vector
};

/// Registered case names, in registration order.
std::vector<std::string> case_names();

/// Throws DataError for unknown names. Every case passes a finite-difference
/// check of Du against u at 20 random points when first registered.
const ManufacturedCase& find_case(const std::string& name);

/// Largest deviation of Du from central differences of u at `samples`
/// pseudo-random points of the unit cube.
double jacobian_consistency(const ManufacturedCase& c, int samples = 20, unsigned seed = 20240611u);

ExactField exact_field(const ManufacturedCase& c);
CoefficientField case_coefficient(const ManufacturedCase& c);

/// J = curl(M u), g = div u, a = (M u) x n, alpha_r = flux of u through the
/// internal boundary components.
TangentialProblem tangential_problem(const ManufacturedCase& c, const Mesh& m, const MeshTopology& topo);
/// J = curl u, g = div(M u), b = (M u) . n, beta_n = circulation of u along sigma_n.
NormalProblem normal_problem(const ManufacturedCase& c, const Mesh& m, const MeshTopology& topo);

/// Flux of a vector field through (dOmega)_r, r >= 1, with the outward normal.
double boundary_flux(const Mesh& m, const BoundaryStructure& b, const VectorField& u, int r,
                     int degree = kInterpolationDegree);
/// Line integral of a vector field along an edge chain.
double chain_circulation(const Mesh& m, const EdgeChain& chain, const VectorField& u,
                         int degree = kInterpolationDegree);

}  // namespace curldiv
