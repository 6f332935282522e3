#include "curldiv/errors.hpp"
#include "curldiv/workflow.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

enum Exit { kOk = 0, kDataFailure = 1, kIoFailure = 2 };

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw curldiv::IoError("cannot write '" + path + "'");
  out << text;
  if (!out) throw curldiv::IoError("failed writing '" + path + "'");
}

int run_solve(const std::string& mesh, const std::string& config, const std::string& out) {
  const auto outcome = curldiv::run_solve_files(mesh, config, out);
  std::cout << outcome.report_json << "\n";
  for (const auto& w : outcome.validation.warnings) std::cerr << "warning: " << w << "\n";
  return outcome.ok ? kOk : kDataFailure;
}

int run_topology(const std::string& mesh, const std::string& out) {
  const std::string report = curldiv::topology_report(mesh);
  if (out.empty()) {
    std::cout << report << "\n";
  } else {
    write_file(out, report + "\n");
  }
  return kOk;
}

int run_convergence(const std::string& name, int levels, int first, const std::string& formulation,
                    const std::string& out, double min_rate) {
  std::vector<curldiv::Formulation> kinds;
  if (formulation == "tangential" || formulation == "both") kinds.push_back(curldiv::Formulation::Tangential);
  if (formulation == "normal" || formulation == "both") kinds.push_back(curldiv::Formulation::Normal);
  bool ok = true;
  std::string text, json = "[\n";
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    const auto report = curldiv::run_convergence(name, kinds[i], levels, first);
    text += report.to_text() + "\n";
    json += report.to_json() + (i + 1 < kinds.size() ? ",\n" : "\n");
    const auto& last = report.levels.back();
    if (min_rate > 0.0 && !report.exact && (!last.rate_graph || *last.rate_graph < min_rate)) ok = false;
  }
  json += "]\n";
  std::cout << text;
  if (!out.empty()) {
    write_file(out + ".txt", text);
    write_file(out + ".json", json);
  }
  return ok ? kOk : kDataFailure;
}

int run_generate(const std::string& kind, int n, const std::string& out) {
  if (kind == "cube") {
    curldiv::write_gmsh(curldiv::structured_cube_mesh(n), out);
  } else if (kind == "torus") {
    curldiv::write_gmsh(curldiv::solid_torus_mesh(n), out);
  } else {
    curldiv::write_gmsh(curldiv::hollow_ball_mesh(n), out);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Curl-div solver on tetrahedral meshes"};
  app.require_subcommand(1);

  std::string mesh, config, out;
  auto* solve = app.add_subcommand("solve", "Solve the problem described by a JSON configuration");
  solve->add_option("--mesh", mesh, "Gmsh 2.2 ASCII mesh")->required();
  solve->add_option("--config", config, "JSON problem configuration")->required();
  solve->add_option("--out", out, "VTK output; the JSON report is written alongside")->required();

  std::string topo_mesh, topo_out;
  auto* topology = app.add_subcommand("topology", "Report counts, Betti numbers and homology cycles");
  topology->add_option("--mesh", topo_mesh, "Gmsh 2.2 ASCII mesh")->required();
  topology->add_option("--out", topo_out, "Write the JSON report here instead of stdout");

  std::string case_name, formulation = "both", conv_out;
  int levels = 3, first_level = 0;
  double min_rate = 0.0;
  auto* convergence = app.add_subcommand("convergence", "Refinement study on structured cubes");
  convergence->add_option("--case", case_name, "Manufactured case")->required();
  convergence->add_option("--levels", levels, "Number of meshes, n = 2^k")->required()->check(CLI::Range(1, 8));
  convergence->add_option("--first-level", first_level, "Exponent k of the coarsest mesh")->check(CLI::Range(0, 7));
  convergence->add_option("--formulation", formulation)->check(CLI::IsMember({"tangential", "normal", "both"}));
  convergence->add_option("--out", conv_out, "Write <out>.txt and <out>.json");
  convergence->add_option("--min-rate", min_rate, "Fail unless the last graph-norm rate reaches this value");

  std::string kind = "cube", gen_out;
  int n = 1;
  auto* generate = app.add_subcommand("generate", "Write a structured mesh as Gmsh 2.2 ASCII");
  generate->add_option("--kind", kind)->check(CLI::IsMember({"cube", "torus", "hollow-ball"}));
  generate->add_option("--n", n, "Subdivisions per block")->check(CLI::Range(1, 64));
  generate->add_option("--out", gen_out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kIoFailure;
  }

  try {
    if (*solve) return run_solve(mesh, config, out);
    if (*topology) return run_topology(topo_mesh, topo_out);
    if (*convergence) return run_convergence(case_name, levels, first_level, formulation, conv_out, min_rate);
    if (*generate) return run_generate(kind, n, gen_out);
  } catch (const curldiv::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIoFailure;
  } catch (const curldiv::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIoFailure;
  } catch (const curldiv::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataFailure;
  }
  return kOk;
}
