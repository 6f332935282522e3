#include "curldiv/errors.hpp"
#include "curldiv/workflow.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>

using namespace curldiv;
using nlohmann::json;
using testing_support::fixture;
using testing_support::load;

TEST(Config, Defaults) {
  const ProblemConfig c = parse_config("{}");
  EXPECT_EQ(c.formulation, Formulation::Tangential);
  EXPECT_FALSE(c.case_name);
  EXPECT_FALSE(c.strict);
  EXPECT_EQ(c.solver.tol, 1e-10);
  EXPECT_EQ(c.coefficient.kind(), CoefficientField::Kind::Identity);
}

TEST(Config, FullConstantData) {
  const ProblemConfig c = parse_config(R"({
    "formulation": "normal",
    "coefficient": {"kind": "per-region", "regions": {"2": [[2,0,0],[0,2,0],[0,0,2]]}},
    "data": {"J": [0, 0, 0], "g": 1.5, "b": 0.5},
    "beta": [0.25],
    "solver": {"tol": 1e-9, "maxit": 500, "quadrature_degree": 3},
    "strict": true
  })");
  EXPECT_EQ(c.formulation, Formulation::Normal);
  EXPECT_EQ(c.coefficient.kind(), CoefficientField::Kind::PerRegion);
  EXPECT_EQ(c.coefficient(2, Point3::Zero())(1, 1), 2.0);
  EXPECT_EQ(c.coefficient(7, Point3::Zero())(1, 1), 1.0);
  EXPECT_EQ(c.g, 1.5);
  EXPECT_EQ(c.b, 0.5);
  ASSERT_TRUE(c.beta);
  EXPECT_EQ(*c.beta, std::vector<double>{0.25});
  EXPECT_EQ(c.solver.maxit, 500);
  EXPECT_EQ(c.solver.quadrature_degree, 3);
  EXPECT_TRUE(c.strict);
}

TEST(Config, CoefficientKinds) {
  EXPECT_EQ(parse_config(R"({"coefficient": {"kind": "scalar", "value": 3}})").coefficient(0, Point3::Zero())(2, 2),
            3.0);
  EXPECT_EQ(parse_config(R"({"coefficient": {"kind": "analytic", "name": "smooth"}})").coefficient.kind(),
            CoefficientField::Kind::Analytic);
  EXPECT_EQ(parse_config(R"({"coefficient": {"kind": "constant", "matrix": [[2,1,0],[1,2,0],[0,0,1]]}})")
                .coefficient.kind(),
            CoefficientField::Kind::Constant);
}

TEST(Config, Errors) {
  EXPECT_THROW(parse_config("{ not json"), ParseError);
  EXPECT_THROW(parse_config(R"({"unknown": 1})"), DataError);
  EXPECT_THROW(parse_config(R"({"formulation": "mixed"})"), DataError);
  EXPECT_THROW(parse_config(R"({"case": "nope"})"), DataError);
  EXPECT_THROW(parse_config(R"({"case": "mms1", "data": {}})"), DataError);
  EXPECT_THROW(parse_config(R"({"case": "mms1", "coefficient": {"kind": "identity"}})"), DataError);
  EXPECT_THROW(parse_config(R"({"data": {"J": [1, 2]}})"), DataError);
  EXPECT_THROW(parse_config(R"({"data": {"x": 1}})"), DataError);
  EXPECT_THROW(parse_config(R"({"solver": {"tol": -1}})"), DataError);
  EXPECT_THROW(parse_config(R"({"solver": {"quadrature_degree": 99}})"), DataError);
  EXPECT_THROW(parse_config(R"({"coefficient": {"kind": "constant", "matrix": [[1,2,0],[0,1,0],[0,0,1]]}})"),
               DataError);
  EXPECT_THROW(parse_config(R"({"coefficient": {"kind": "scalar", "value": -1}})"), DataError);
  EXPECT_THROW(parse_config(R"({"strict": "yes"})"), DataError);
  EXPECT_THROW(read_config(fixture("missing.json")), IoError);
}

TEST(Config, LengthMismatchIsRejected) {
  const Mesh m = load("solid_torus.msh");
  const MeshTopology topo = analyze_topology(m);
  const ProblemConfig c = parse_config(R"({"formulation": "normal", "beta": [1, 2]})");
  EXPECT_THROW(make_normal_problem(c, m, topo), DataError);
  const ProblemConfig t = parse_config(R"({"alpha": [1]})");
  EXPECT_THROW(make_tangential_problem(t, m, topo), DataError);
}

TEST(Solve, CaseReportContainsErrors) {
  const Mesh m = load("cube_n2.msh");
  const SolveOutcome o = run_solve(m, parse_config(R"({"case": "constant", "formulation": "normal"})"));
  EXPECT_TRUE(o.ok);
  ASSERT_TRUE(o.errors);
  EXPECT_LE(o.errors->graph, 1e-10);
  const json r = json::parse(o.report_json);
  EXPECT_EQ(r["formulation"], "normal");
  EXPECT_EQ(r["case"], "constant");
  EXPECT_EQ(r["mesh"]["tets"], m.num_tets());
  EXPECT_TRUE(r["ok"].get<bool>());
}

TEST(Solve, StrictModeFailsOnIncompatibleData) {
  const Mesh m = load("cube_n2.msh");
  // Constant J and a: the trace condition J.n = div_tau a fails on the boundary.
  const char* cfg = R"({"data": {"J": [0, 0, 1], "a": [0, 0, 0]}, "strict": true})";
  const SolveOutcome o = run_solve(m, parse_config(cfg));
  EXPECT_FALSE(o.validation.ok());
  EXPECT_FALSE(o.ok);
}

TEST(Solve, FilesAreWritten) {
  const auto dir = std::filesystem::temp_directory_path() / "curldiv_workflow_test";
  std::filesystem::create_directories(dir);
  const std::string config = (dir / "cfg.json").string();
  std::ofstream(config) << R"({"case": "linear"})";
  const std::string out = (dir / "result.vtk").string();
  const SolveOutcome o = run_solve_files(fixture("cube_n2.msh"), config, out);
  EXPECT_TRUE(o.ok);
  EXPECT_TRUE(std::filesystem::exists(out));
  EXPECT_TRUE(std::filesystem::exists(dir / "result.json"));
  std::filesystem::remove_all(dir);
}

TEST(Topology, Reports) {
  const json cube = json::parse(topology_report(fixture("cube6.msh")));
  EXPECT_EQ(cube["dim_W0"], 12);
  EXPECT_EQ(cube["g"], 0);
  EXPECT_EQ(cube["p"], 0);
  EXPECT_EQ(cube["betti"], json({1, 0, 0}));
  const json torus = json::parse(topology_report(fixture("solid_torus.msh")));
  EXPECT_EQ(torus["g"], 1);
  EXPECT_EQ(torus["surface_cycles"].size(), 2u);
  EXPECT_EQ(torus["homology_cycles"].size(), 1u);
  EXPECT_EQ(torus["kernel_vectors"].size(), 1u);
  const json ball = json::parse(topology_report(fixture("hollow_ball.msh")));
  EXPECT_EQ(ball["p"], 1);
  EXPECT_EQ(ball["betti"], json({1, 0, 1}));
  EXPECT_EQ(ball["boundary_components"].size(), 2u);
  EXPECT_THROW(topology_report(fixture("missing.msh")), IoError);
}

TEST(Convergence, ConstantCaseIsExact) {
  const ConvergenceReport r = run_convergence("constant-aniso", Formulation::Tangential, 2, 1);
  ASSERT_EQ(r.levels.size(), 2u);
  EXPECT_TRUE(r.exact);
  EXPECT_EQ(r.levels[0].n, 2);
  EXPECT_EQ(r.levels[1].n, 4);
  EXPECT_NE(r.to_text().find("exact"), std::string::npos);
  const json j = json::parse(r.to_json());
  EXPECT_EQ(j["levels"][1]["rate_l2"], "exact");
}

TEST(Convergence, SmoothCaseRates) {
  const ConvergenceReport r = run_convergence("mms1", Formulation::Normal, 2, 1);
  EXPECT_FALSE(r.exact);
  ASSERT_TRUE(r.levels[1].rate_graph);
  EXPECT_GT(*r.levels[1].rate_graph, 0.8);
  EXPECT_FALSE(r.levels[0].rate_graph);
  EXPECT_LT(r.levels[1].graph, r.levels[0].graph);
}

TEST(Convergence, RejectsBadArguments) {
  EXPECT_THROW(run_convergence("mms1", Formulation::Tangential, 0), DataError);
  EXPECT_THROW(run_convergence("mms1", Formulation::Tangential, 3, 6), DataError);
  EXPECT_THROW(run_convergence("none", Formulation::Tangential, 1), DataError);
}
