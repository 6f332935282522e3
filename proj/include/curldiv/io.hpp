#pragma once

#include "curldiv/mesh.hpp"
#include "curldiv/whitney.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace curldiv {

/// Contents of a Gmsh file: the mesh (unused nodes dropped, tetrahedra
/// tagged with their physical group), tags of boundary triangles, and the
/// physical group names.
struct GmshData {
  Mesh mesh;
  std::map<int, int> face_tags;            // face index -> physical tag
  std::map<int, std::string> physical_names;
  std::vector<int> node_ids;               // file id of each mesh vertex
};

/// Reads a Gmsh MSH 2.2 ASCII file. Throws IoError if the file cannot be
/// opened, ParseError for unsupported versions, malformed sections (with the
/// line number) and files without tetrahedra, MeshError for invalid cells.
GmshData read_gmsh(const std::string& path);
GmshData parse_gmsh(const std::string& text, const std::string& source = "<string>");

/// Writes a Gmsh MSH 2.2 ASCII file, region tags as physical groups.
void write_gmsh(const Mesh& m, const std::string& path);

/// Unit cube split into n^3 subcubes of 6 tetrahedra each, all sharing the
/// (0,0,0)-(1,1,1) diagonal direction.
Mesh structured_cube_mesh(int n);

/// Kuhn-split block of nx*ny*nz cells of size h, keeping the cells for which
/// `keep(i, j, k)` is true. Vertices not used by kept cells are dropped.
Mesh block_mesh(int nx, int ny, int nz, double h, const std::function<bool(int, int, int)>& keep);

/// 3x3x1 block with the middle column removed, each block split into k^3
/// cells: a solid torus (g = 1, p = 0).
Mesh solid_torus_mesh(int k = 1);

/// 3x3x3 block with the middle block removed, each block split into k^3
/// cells: a hollow ball (g = 0, p = 1).
Mesh hollow_ball_mesh(int k = 1);

/// Legacy ASCII VTK unstructured grid. The field (N_h or RT_h) is evaluated
/// at cell centroids and written as CELL_DATA vectors named "u"; each extra
/// array is written as a CELL_DATA scalar. Numbers use 17 significant digits.
/// Throws IoError on write failure.
void write_vtk(const Mesh& m, const FEFunction& u, const std::string& path,
               const std::vector<std::pair<std::string, Eigen::VectorXd>>& cell_scalars = {});

}  // namespace curldiv
