#pragma once

#include "curldiv/cases.hpp"
#include "curldiv/io.hpp"

#include <optional>
#include <string>
#include <vector>

namespace curldiv {

/// Parsed solve configuration (JSON). Data come either from a built-in
/// manufactured case or from uniform constants.
struct ProblemConfig {
  Formulation formulation = Formulation::Tangential;
  CoefficientField coefficient;             // ignored when a case is used
  bool coefficient_given = false;
  std::optional<std::string> case_name;
  Vector3 J = Vector3::Zero();              // constant data
  double g = 0.0;
  Vector3 a = Vector3::Zero();              // tangential boundary datum
  double b = 0.0;                           // normal boundary datum
  std::optional<std::vector<double>> alpha;
  std::optional<std::vector<double>> beta;
  SolverOptions solver;
  bool strict = false;                      // validation warnings fail the run
};

/// Throws ParseError for malformed JSON and DataError for invalid values.
ProblemConfig parse_config(const std::string& json_text);
ProblemConfig read_config(const std::string& path);

/// Builds the problem for the mesh; fluxes and periods not given explicitly
/// are taken from the case (or set to zero for constant data). Throws
/// DataError if their lengths do not match p or g.
TangentialProblem make_tangential_problem(const ProblemConfig& cfg, const Mesh& m, const MeshTopology& topo);
NormalProblem make_normal_problem(const ProblemConfig& cfg, const Mesh& m, const MeshTopology& topo);

struct SolveOutcome {
  Solution solution;
  ValidationReport validation;
  std::optional<ErrorNorms> errors;  // when a case provides the exact field
  std::string report_json;
  bool ok = true;                    // residual checks (and, if strict, validation) passed
};

SolveOutcome run_solve(const Mesh& m, const ProblemConfig& cfg);

/// `solve` command: reads the mesh and config, solves, writes the VTK file to
/// `out_path` and the JSON report next to it (extension replaced by .json).
SolveOutcome run_solve_files(const std::string& mesh_path, const std::string& config_path,
                             const std::string& out_path);

struct ConvergenceLevel {
  int n = 0;
  double h = 0.0;
  int dofs = 0;
  int iterations = 0;
  double l2 = 0.0;
  double graph = 0.0;
  std::optional<double> rate_l2;     // against the previous level
  std::optional<double> rate_graph;
  double seconds = 0.0;
};

struct ConvergenceReport {
  std::string case_name;
  Formulation formulation = Formulation::Tangential;
  std::vector<ConvergenceLevel> levels;
  bool exact = false;  // every error at solver-tolerance level

  std::string to_text() const;
  std::string to_json() const;
};

/// Errors below this are treated as exact reproduction.
inline constexpr double kExactErrorLevel = 1e-8;

/// Solves the case on structured_cube_mesh(2^k), k = first_level .. first_level + levels - 1.
ConvergenceReport run_convergence(const std::string& case_name, Formulation f, int levels, int first_level = 0,
                                  const SolverOptions& opts = {});

/// Counts, Betti numbers, g, p, n_Q, dim W0h and the cycle edge lists, as JSON.
std::string topology_report(const Mesh& m, const MeshTopology& topo);
std::string topology_report(const std::string& mesh_path);

}  // namespace curldiv
