#pragma once

#include "curldiv/mesh.hpp"

#include <functional>
#include <variant>

namespace curldiv {

/// Lowest-order Whitney spaces: nodal (L_h), edge (N_h), face (RT_h) and
/// piecewise-constant (PC_h).
enum class Space { Lagrange, Edge, Face, Cell };

const char* to_string(Space s);

/// Coefficient vector in one of the Whitney spaces. Coefficients are the
/// degree-of-freedom values: vertex values, tangential edge integrals, normal
/// face fluxes and cell values.
struct FEFunction {
  Space space = Space::Lagrange;
  Eigen::VectorXd coeffs;
};

int space_dimension(const Mesh& m, Space s);
FEFunction zero_function(const Mesh& m, Space s);

using ScalarField = std::function<double(const Point3&)>;
using VectorField = std::function<Vector3(const Point3&)>;
using FieldValue = std::variant<double, Vector3>;

/// Local shape functions of one cell, ordered by kTetEdges / kTetFaces.
namespace local {

/// Whitney 1-forms lambda_a grad lambda_b - lambda_b grad lambda_a.
Eigen::Matrix<double, 3, 6> edge_basis(const TetGeometry& geo, const Eigen::Vector4d& lambda);
/// Their (constant) curls 2 grad lambda_a x grad lambda_b.
Eigen::Matrix<double, 3, 6> edge_curls(const TetGeometry& geo);
/// Whitney 2-forms 2 sum_cyclic lambda_a grad lambda_b x grad lambda_c.
Eigen::Matrix<double, 3, 4> face_basis(const TetGeometry& geo, const Eigen::Vector4d& lambda);
/// Their (constant) divergences.
Eigen::Vector4d face_divs(const TetGeometry& geo);

}  // namespace local

/// Barycentric tolerance used to accept points on faces and edges.
inline constexpr double kInsideTolerance = 1e-10;

/// Value of `f` at `p` inside cell `t`: a scalar for nodal and cell functions,
/// a vector for edge and face functions. Throws std::out_of_range when `p`
/// lies outside the cell.
FieldValue eval_fe(const Mesh& m, const FEFunction& f, int t, const Point3& p);
double eval_scalar(const Mesh& m, const FEFunction& f, int t, const Point3& p);
Vector3 eval_vector(const Mesh& m, const FEFunction& f, int t, const Point3& p);

/// Locates the cell containing `p` (linear scan); -1 if none.
int locate(const Mesh& m, const Point3& p);

/// grad (L_h -> N_h), curl (N_h -> RT_h) or div (RT_h -> PC_h, divided by
/// cell volume). Throws std::invalid_argument for PC_h.
FEFunction differential(const Mesh& m, const IncidenceOperators& ops, const FEFunction& f);

/// Polynomial degree used for the degree-of-freedom integrals of the
/// interpolants. Exceeds what lowest-order elements need so that
/// interpolated analytic data satisfy the discrete Stokes/Gauss identities to
/// rounding level on ordinary meshes.
inline constexpr int kInterpolationDegree = 14;

/// I^L (vertex values) or I^PC (cell averages).
FEFunction interpolate_scalar(const Mesh& m, Space s, const ScalarField& fn,
                              int degree = kInterpolationDegree);
/// I^N (tangential edge integrals) or I^RT (normal face fluxes).
FEFunction interpolate_vector(const Mesh& m, Space s, const VectorField& fn,
                              int degree = kInterpolationDegree);

}  // namespace curldiv
