#pragma once

#include "curldiv/coefficient.hpp"
#include "curldiv/gauge.hpp"
#include "curldiv/potential.hpp"

#include <optional>
#include <string>
#include <vector>

namespace curldiv {

/// Boundary data depend on the point and the outward unit normal there.
using BoundaryVectorField = std::function<Vector3(const Point3&, const Vector3&)>;
using BoundaryScalarField = std::function<double(const Point3&, const Vector3&)>;

/// curl(eta u) = J, div u = g, (eta u) x n = a, fluxes alpha_r through the
/// internal boundary components.
struct TangentialProblem {
  CoefficientField eta;
  VectorField J;
  ScalarField g;
  BoundaryVectorField a;
  std::vector<double> alpha;
};

/// curl u = J, div(mu u) = g, mu u . n = b, circulations beta_n along the
/// homology generators.
struct NormalProblem {
  CoefficientField mu;
  VectorField J;
  ScalarField g;
  BoundaryScalarField b;
  std::vector<double> beta;
};

enum class Formulation { Tangential, Normal };

const char* to_string(Formulation f);

/// Outcome of the discrete compatibility checks. Failed checks produce
/// warnings; nothing is thrown.
struct ValidationReport {
  double div_J = 0.0;            // max cell average of |div I^RT J|, relative
  double trace_mismatch = 0.0;   // tangential: max face |int J.n - int div_tau a|, relative
  double balance_mismatch = 0.0; // normal: |int g - int b|, relative
  bool length_ok = true;         // alpha (beta) has p (g) entries
  std::vector<std::string> warnings;
  std::vector<std::string> notes;

  bool ok() const { return warnings.empty(); }
};

ValidationReport validate_tangential(const TangentialProblem& p, const Mesh& m, const MeshTopology& topo,
                                     double tol = 1e-8);
ValidationReport validate_normal(const NormalProblem& p, const Mesh& m, const MeshTopology& topo,
                                 double tol = 1e-8);

/// Reduced symmetric positive definite system. dof_map[l] is the plain
/// cotree edge (tangential, -1 for combined fields) or the retained vertex
/// (normal) behind unknown l.
struct AssembledSystem {
  SparseMatrix K;
  Eigen::VectorXd rhs;
  std::vector<int> dof_map;
};

/// Polynomial degree of the data quadrature used by the assemblers.
inline constexpr int kDataQuadratureDegree = 4;

AssembledSystem assemble_tangential(const TangentialProblem& p, const Mesh& m, const MeshTopology& topo,
                                    const GaugedCurlBasis& gb, const FEFunction& lift,
                                    int degree = kDataQuadratureDegree);
AssembledSystem assemble_normal(const NormalProblem& p, const Mesh& m, const MeshTopology& topo,
                                const ReducedNodalBasis& rb, const FEFunction& lift,
                                int degree = kDataQuadratureDegree);

/// Edge matrix int eta curl w_e . curl w_e' over the full N_h basis.
SparseMatrix curl_curl_matrix(const Mesh& m, const CoefficientField& eta, int degree = kDataQuadratureDegree);
/// Vertex matrix int mu grad phi_v . grad phi_v' over the full L_h basis.
SparseMatrix stiffness_matrix(const Mesh& m, const CoefficientField& mu, int degree = kDataQuadratureDegree);

struct SolveStats {
  int iterations = 0;
  double relative_residual = 0.0;
  double min_curvature = 0.0;  // smallest p^T K p / p^T p seen
};

/// Jacobi-preconditioned conjugate gradients. maxit <= 0 means 10 * dim.
/// Throws SolverError on non-convergence or non-positive curvature.
Eigen::VectorXd solve_spd(const AssembledSystem& s, double tol = 1e-10, int maxit = 0,
                          SolveStats* stats = nullptr);

/// u_h = correction + lift, with the correction in curl N*_h (tangential,
/// RT_h coefficients) or grad L*_h (normal, N_h coefficients).
struct Solution {
  Formulation kind = Formulation::Tangential;
  FEFunction u_h;
  FEFunction correction;
  FEFunction lift;
  Eigen::VectorXd coeffs;
  SolveStats stats;
  double constraint_residual = 0.0;  // div (curl) residual of u_h against the data
  double topology_residual = 0.0;    // flux (period) mismatch
};

Solution recover_solution(const MeshTopology& topo, const GaugedCurlBasis& gb, const Eigen::VectorXd& coeffs,
                          const FEFunction& lift);
Solution recover_solution(const MeshTopology& topo, const ReducedNodalBasis& rb, const Eigen::VectorXd& coeffs,
                          const FEFunction& lift);

struct SolverOptions {
  double tol = 1e-10;
  int maxit = 0;
  int quadrature_degree = kDataQuadratureDegree;
};

/// Full pipeline: interpolate data, lift, assemble, solve, recover. An
/// explicit lift replaces the one computed from the data. Throws DataError if
/// the recovered field violates its constraints.
Solution solve_tangential(const Mesh& m, const MeshTopology& topo, const TangentialProblem& p,
                          const SolverOptions& opts = {}, const std::optional<FEFunction>& lift = {});
Solution solve_normal(const Mesh& m, const MeshTopology& topo, const NormalProblem& p,
                      const SolverOptions& opts = {}, const std::optional<FEFunction>& lift = {});

/// The lifts solve_tangential / solve_normal would compute.
FEFunction tangential_lift(const Mesh& m, const MeshTopology& topo, const TangentialProblem& p);
FEFunction normal_lift(const Mesh& m, const MeshTopology& topo, const NormalProblem& p);

/// Analytic solution with its divergence and curl.
struct ExactField {
  VectorField u;
  ScalarField div;
  VectorField curl;
};

struct ErrorNorms {
  double l2 = 0.0;      // ||u - u_h||
  double d = 0.0;       // ||div(u - u_h)|| (RT_h) or ||curl(u - u_h)|| (N_h)
  double graph = 0.0;   // sqrt(l2^2 + d^2)
};

inline constexpr int kErrorQuadratureDegree = 6;

ErrorNorms error_norms(const Mesh& m, const FEFunction& u_h, const ExactField& exact,
                       int degree = kErrorQuadratureDegree);

}  // namespace curldiv
