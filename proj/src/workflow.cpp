#include "curldiv/workflow.hpp"

#include "curldiv/errors.hpp"
#include "curldiv/quadrature.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace curldiv {

namespace {

using json = nlohmann::json;

Matrix3 parse_matrix(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 3) throw DataError(what + ": expected a 3x3 array");
  Matrix3 m;
  for (int r = 0; r < 3; ++r) {
    if (!j[r].is_array() || j[r].size() != 3) throw DataError(what + ": expected a 3x3 array");
    for (int c = 0; c < 3; ++c) {
      if (!j[r][c].is_number()) throw DataError(what + ": entries must be numbers");
      m(r, c) = j[r][c].get<double>();
    }
  }
  return m;
}

Vector3 parse_vector(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 3) throw DataError(what + ": expected three numbers");
  Vector3 v;
  for (int i = 0; i < 3; ++i) {
    if (!j[i].is_number()) throw DataError(what + ": entries must be numbers");
    v[i] = j[i].get<double>();
  }
  return v;
}

double parse_number(const json& j, const std::string& what) {
  if (!j.is_number()) throw DataError(what + ": expected a number");
  return j.get<double>();
}

std::vector<double> parse_list(const json& j, const std::string& what) {
  if (!j.is_array()) throw DataError(what + ": expected an array of numbers");
  std::vector<double> v;
  for (const auto& x : j) v.push_back(parse_number(x, what));
  return v;
}

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw DataError("unknown key '" + key + "' in " + where);
  }
}

CoefficientField parse_coefficient(const json& j) {
  if (!j.is_object() || !j.contains("kind")) throw DataError("coefficient: expected an object with a 'kind'");
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "identity") {
    reject_unknown(j, {"kind"}, "coefficient");
    return CoefficientField::identity();
  }
  if (kind == "scalar") {
    reject_unknown(j, {"kind", "value"}, "coefficient");
    return CoefficientField::scalar(parse_number(j.at("value"), "coefficient value"));
  }
  if (kind == "constant") {
    reject_unknown(j, {"kind", "matrix"}, "coefficient");
    return CoefficientField::constant(parse_matrix(j.at("matrix"), "coefficient matrix"));
  }
  if (kind == "per-region") {
    reject_unknown(j, {"kind", "regions", "default"}, "coefficient");
    std::map<int, Matrix3> regions;
    for (const auto& [tag, value] : j.at("regions").items()) {
      int t = 0;
      try {
        std::size_t used = 0;
        t = std::stoi(tag, &used);
        if (used != tag.size()) throw std::invalid_argument(tag);
      } catch (const std::exception&) {
        throw DataError("coefficient region '" + tag + "' is not an integer tag");
      }
      regions[t] = parse_matrix(value, "region " + tag);
    }
    const Matrix3 fallback =
        j.contains("default") ? parse_matrix(j["default"], "default region") : Matrix3::Identity();
    return CoefficientField::per_region(std::move(regions), fallback);
  }
  if (kind == "analytic") {
    reject_unknown(j, {"kind", "name"}, "coefficient");
    return CoefficientField::analytic(j.at("name").get<std::string>());
  }
  throw DataError("unknown coefficient kind '" + kind + "'");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
  out.flush();
  if (!out) throw IoError("failed writing '" + path + "'");
}

json mesh_counts(const Mesh& m) {
  return {{"vertices", m.num_vertices()},
          {"edges", m.num_edges()},
          {"faces", m.num_faces()},
          {"tets", m.num_tets()}};
}

json chain_json(const Mesh& m, const EdgeChain& chain) {
  json edges = json::array();
  for (const auto& [e, c] : chain)
    edges.push_back({{"edge", e}, {"vertices", {m.edge(e)[0], m.edge(e)[1]}}, {"coefficient", c}});
  return edges;
}

/// Per-cell residual of the recovered field: div u_h - g_h, or the largest
/// face mismatch of curl u_h against J_h.
Eigen::VectorXd cell_residual(const Mesh& m, const MeshTopology& topo, const Solution& sol,
                              const TangentialProblem* tp, const NormalProblem* np) {
  Eigen::VectorXd res(m.num_tets());
  if (tp) {
    const FEFunction g_h = interpolate_scalar(m, Space::Cell, tp->g);
    const Eigen::VectorXd d = topo.ops.D.cast<double>() * sol.u_h.coeffs;
    for (int t = 0; t < m.num_tets(); ++t) res[t] = d[t] / m.volume(t) - g_h.coeffs[t];
  } else {
    const FEFunction J_h = interpolate_vector(m, Space::Face, np->J);
    const Eigen::VectorXd c = topo.ops.C.cast<double>() * sol.u_h.coeffs - J_h.coeffs;
    for (int t = 0; t < m.num_tets(); ++t) {
      double worst = 0.0;
      for (int f : m.tet_faces(t)) worst = std::max(worst, std::abs(c[f]));
      res[t] = worst;
    }
  }
  return res;
}

std::string format_rate(const std::optional<double>& rate, bool exact) {
  if (exact) return "exact";
  if (!rate) return "-";
  std::ostringstream s;
  s << std::fixed << std::setprecision(3) << *rate;
  return s.str();
}

}  // namespace

ProblemConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("configuration must be a JSON object");
  reject_unknown(j, {"formulation", "coefficient", "case", "data", "alpha", "beta", "solver", "strict"},
                 "configuration");
  ProblemConfig cfg;
  try {
    const std::string f = j.value("formulation", std::string("tangential"));
    if (f == "tangential") {
      cfg.formulation = Formulation::Tangential;
    } else if (f == "normal") {
      cfg.formulation = Formulation::Normal;
    } else {
      throw DataError("formulation must be 'tangential' or 'normal', got '" + f + "'");
    }
    if (j.contains("coefficient")) {
      cfg.coefficient = parse_coefficient(j["coefficient"]);
      cfg.coefficient_given = true;
    }
    if (j.contains("case") && j.contains("data")) throw DataError("give either 'case' or 'data', not both");
    if (j.contains("case")) {
      cfg.case_name = j["case"].get<std::string>();
      find_case(*cfg.case_name);
      if (cfg.coefficient_given) throw DataError("a manufactured case fixes its own coefficient");
    }
    if (j.contains("data")) {
      const json& d = j["data"];
      if (!d.is_object()) throw DataError("data: expected an object");
      reject_unknown(d, {"J", "g", "a", "b"}, "data");
      if (d.contains("J")) cfg.J = parse_vector(d["J"], "data J");
      if (d.contains("g")) cfg.g = parse_number(d["g"], "data g");
      if (d.contains("a")) cfg.a = parse_vector(d["a"], "data a");
      if (d.contains("b")) cfg.b = parse_number(d["b"], "data b");
    }
    if (j.contains("alpha")) cfg.alpha = parse_list(j["alpha"], "alpha");
    if (j.contains("beta")) cfg.beta = parse_list(j["beta"], "beta");
    if (j.contains("solver")) {
      const json& s = j["solver"];
      reject_unknown(s, {"tol", "maxit", "quadrature_degree"}, "solver");
      if (s.contains("tol")) cfg.solver.tol = parse_number(s["tol"], "solver tol");
      if (s.contains("maxit")) cfg.solver.maxit = s["maxit"].get<int>();
      if (s.contains("quadrature_degree")) cfg.solver.quadrature_degree = s["quadrature_degree"].get<int>();
      if (!(cfg.solver.tol > 0.0)) throw DataError("solver tol must be positive");
      if (cfg.solver.quadrature_degree < 1 || cfg.solver.quadrature_degree > kMaxQuadratureDegree)
        throw DataError("solver quadrature_degree out of range");
    }
    if (j.contains("strict")) cfg.strict = j["strict"].get<bool>();
  } catch (const json::exception& e) {
    throw DataError(std::string("invalid configuration value: ") + e.what());
  }
  return cfg;
}

ProblemConfig read_config(const std::string& path) { return parse_config(read_text(path)); }

TangentialProblem make_tangential_problem(const ProblemConfig& cfg, const Mesh& m, const MeshTopology& topo) {
  TangentialProblem p;
  if (cfg.case_name) {
    p = tangential_problem(find_case(*cfg.case_name), m, topo);
  } else {
    p.eta = cfg.coefficient;
    const Vector3 J = cfg.J, a = cfg.a;
    const double g = cfg.g;
    p.J = [J](const Point3&) { return J; };
    p.g = [g](const Point3&) { return g; };
    p.a = [a](const Point3&, const Vector3&) { return a; };
    p.alpha.assign(topo.p(), 0.0);
  }
  if (cfg.alpha) p.alpha = *cfg.alpha;
  if (static_cast<int>(p.alpha.size()) != topo.p())
    throw DataError("alpha has " + std::to_string(p.alpha.size()) + " entries but the mesh has p = " +
                    std::to_string(topo.p()));
  return p;
}

NormalProblem make_normal_problem(const ProblemConfig& cfg, const Mesh& m, const MeshTopology& topo) {
  NormalProblem p;
  if (cfg.case_name) {
    p = normal_problem(find_case(*cfg.case_name), m, topo);
  } else {
    p.mu = cfg.coefficient;
    const Vector3 J = cfg.J;
    const double g = cfg.g, b = cfg.b;
    p.J = [J](const Point3&) { return J; };
    p.g = [g](const Point3&) { return g; };
    p.b = [b](const Point3&, const Vector3&) { return b; };
    p.beta.assign(topo.g(), 0.0);
  }
  if (cfg.beta) p.beta = *cfg.beta;
  if (static_cast<int>(p.beta.size()) != topo.g())
    throw DataError("beta has " + std::to_string(p.beta.size()) + " entries but the mesh has g = " +
                    std::to_string(topo.g()));
  return p;
}

namespace {

SolveOutcome solve_with(const Mesh& m, const MeshTopology& topo, const ProblemConfig& cfg,
                        Eigen::VectorXd* residual_out) {
  SolveOutcome out;
  std::optional<ExactField> exact;
  if (cfg.case_name) exact = exact_field(find_case(*cfg.case_name));

  if (cfg.formulation == Formulation::Tangential) {
    const TangentialProblem p = make_tangential_problem(cfg, m, topo);
    out.validation = validate_tangential(p, m, topo);
    out.solution = solve_tangential(m, topo, p, cfg.solver);
    if (residual_out) *residual_out = cell_residual(m, topo, out.solution, &p, nullptr);
  } else {
    const NormalProblem p = make_normal_problem(cfg, m, topo);
    out.validation = validate_normal(p, m, topo);
    out.solution = solve_normal(m, topo, p, cfg.solver);
    if (residual_out) *residual_out = cell_residual(m, topo, out.solution, nullptr, &p);
  }
  if (exact) out.errors = error_norms(m, out.solution.u_h, *exact);
  out.ok = !cfg.strict || out.validation.ok();

  const Solution& s = out.solution;
  json report = {
      {"formulation", to_string(cfg.formulation)},
      {"mesh", mesh_counts(m)},
      {"topology", {{"g", topo.g()}, {"p", topo.p()}}},
      {"dofs", s.coeffs.size()},
      {"solver",
       {{"iterations", s.stats.iterations},
        {"relative_residual", s.stats.relative_residual},
        {"min_curvature", s.stats.min_curvature},
        {"tol", cfg.solver.tol}}},
      {"residuals", {{"constraint", s.constraint_residual}, {"topology", s.topology_residual}}},
      {"validation",
       {{"div_J", out.validation.div_J},
        {"trace_mismatch", out.validation.trace_mismatch},
        {"balance_mismatch", out.validation.balance_mismatch},
        {"warnings", out.validation.warnings},
        {"notes", out.validation.notes}}},
      {"ok", out.ok}};
  if (cfg.case_name) report["case"] = *cfg.case_name;
  if (out.errors) report["errors"] = {{"l2", out.errors->l2}, {"d", out.errors->d}, {"graph", out.errors->graph}};
  out.report_json = report.dump(2);
  return out;
}

}  // namespace

SolveOutcome run_solve(const Mesh& m, const ProblemConfig& cfg) {
  const MeshTopology topo = analyze_topology(m);
  return solve_with(m, topo, cfg, nullptr);
}

SolveOutcome run_solve_files(const std::string& mesh_path, const std::string& config_path,
                             const std::string& out_path) {
  const ProblemConfig cfg = read_config(config_path);
  const GmshData data = read_gmsh(mesh_path);
  const MeshTopology topo = analyze_topology(data.mesh);
  Eigen::VectorXd residual;
  SolveOutcome out = solve_with(data.mesh, topo, cfg, &residual);
  const std::string name = cfg.formulation == Formulation::Tangential ? "div_residual" : "curl_residual";
  write_vtk(data.mesh, out.solution.u_h, out_path, {{name, residual}});
  write_text(std::filesystem::path(out_path).replace_extension(".json").string(), out.report_json + "\n");
  return out;
}

ConvergenceReport run_convergence(const std::string& case_name, Formulation f, int levels, int first_level,
                                  const SolverOptions& opts) {
  if (levels < 1) throw DataError("need at least one level");
  if (first_level < 0 || first_level + levels > 8) throw DataError("levels out of range (largest n is 128)");
  const ManufacturedCase& c = find_case(case_name);
  const ExactField exact = exact_field(c);
  ConvergenceReport report;
  report.case_name = case_name;
  report.formulation = f;
  report.exact = true;
  for (int k = first_level; k < first_level + levels; ++k) {
    const auto start = std::chrono::steady_clock::now();
    ConvergenceLevel lvl;
    lvl.n = 1 << k;
    const Mesh m = structured_cube_mesh(lvl.n);
    const MeshTopology topo = analyze_topology(m);
    const Solution sol = f == Formulation::Tangential ? solve_tangential(m, topo, tangential_problem(c, m, topo), opts)
                                                      : solve_normal(m, topo, normal_problem(c, m, topo), opts);
    const ErrorNorms e = error_norms(m, sol.u_h, exact);
    lvl.h = m.max_edge_length();
    lvl.dofs = static_cast<int>(sol.coeffs.size());
    lvl.iterations = sol.stats.iterations;
    lvl.l2 = e.l2;
    lvl.graph = e.graph;
    if (!report.levels.empty()) {
      const auto& prev = report.levels.back();
      const double dh = std::log(prev.h / lvl.h);
      if (prev.l2 > 0.0 && lvl.l2 > 0.0) lvl.rate_l2 = std::log(prev.l2 / lvl.l2) / dh;
      if (prev.graph > 0.0 && lvl.graph > 0.0) lvl.rate_graph = std::log(prev.graph / lvl.graph) / dh;
    }
    if (e.graph > kExactErrorLevel) report.exact = false;
    lvl.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.levels.push_back(lvl);
  }
  return report;
}

std::string ConvergenceReport::to_text() const {
  std::ostringstream s;
  s << "case " << case_name << ", " << to_string(formulation) << " formulation, graph norm "
    << (formulation == Formulation::Tangential ? "H(div)" : "H(curl)") << "\n";
  s << std::setw(5) << "n" << std::setw(12) << "h" << std::setw(9) << "dofs" << std::setw(8) << "iters"
    << std::setw(14) << "L2 error" << std::setw(14) << "graph error" << std::setw(9) << "rate L2" << std::setw(12)
    << "rate graph" << std::setw(10) << "time [s]" << "\n";
  for (const auto& l : levels) {
    s << std::setw(5) << l.n << std::setw(12) << std::setprecision(5) << l.h << std::setw(9) << l.dofs
      << std::setw(8) << l.iterations << std::setw(14) << std::scientific << std::setprecision(4) << l.l2
      << std::setw(14) << l.graph << std::defaultfloat << std::setw(9) << format_rate(l.rate_l2, exact)
      << std::setw(12) << format_rate(l.rate_graph, exact) << std::setw(10) << std::fixed << std::setprecision(3)
      << l.seconds << std::defaultfloat << "\n";
  }
  return s.str();
}

std::string ConvergenceReport::to_json() const {
  json rows = json::array();
  for (const auto& l : levels) {
    json row = {{"n", l.n},         {"h", l.h},         {"dofs", l.dofs},      {"iterations", l.iterations},
                {"l2_error", l.l2}, {"graph_error", l.graph}, {"seconds", l.seconds}};
    if (exact) {
      row["rate_l2"] = "exact";
      row["rate_graph"] = "exact";
    } else {
      row["rate_l2"] = l.rate_l2 ? json(*l.rate_l2) : json(nullptr);
      row["rate_graph"] = l.rate_graph ? json(*l.rate_graph) : json(nullptr);
    }
    rows.push_back(row);
  }
  json j = {{"case", case_name}, {"formulation", to_string(formulation)}, {"exact", exact}, {"levels", rows}};
  return j.dump(2);
}

std::string topology_report(const Mesh& m, const MeshTopology& topo) {
  const BettiNumbers bn = betti(m, topo.ops);
  json surface = json::array();
  for (int q = 0; q < topo.surface.size(); ++q) {
    surface.push_back({{"closing_edge", topo.surface.closing_edges[q]},
                       {"boundary_component", topo.surface.component[q]},
                       {"edges", chain_json(m, topo.surface.cycles[q])}});
  }
  json cycles = json::array();
  for (const auto& sigma : topo.homology.cycles) cycles.push_back(chain_json(m, sigma));
  json components = json::array();
  for (int r = 0; r <= topo.p(); ++r) {
    const auto& comp = topo.boundary.components[topo.boundary.component_of(r)];
    components.push_back({{"index", r},
                          {"faces", comp.faces.size()},
                          {"edges", comp.edges.size()},
                          {"vertices", comp.vertices.size()}});
  }
  json j = {{"counts", mesh_counts(m)},
            {"euler_characteristic", m.euler_characteristic()},
            {"betti", {bn.b0, bn.b1, bn.b2}},
            {"p", topo.p()},
            {"g", topo.g()},
            {"n_Q", topo.tree.n_Q()},
            {"dim_W0", topo.tree.n_Q() - topo.g()},
            {"dim_V0", m.num_vertices() - 1},
            {"tree_edges", topo.tree.tree_edges.size()},
            {"boundary_components", components},
            {"surface_cycles", surface},
            {"A", topo.homology.A},
            {"kernel_vectors", topo.homology.kernel_integer},
            {"homology_cycles", cycles}};
  return j.dump(2);
}

std::string topology_report(const std::string& mesh_path) {
  const GmshData data = read_gmsh(mesh_path);
  return topology_report(data.mesh, analyze_topology(data.mesh));
}

}  // namespace curldiv
