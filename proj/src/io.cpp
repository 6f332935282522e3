#include "curldiv/io.hpp"

#include "curldiv/errors.hpp"

#include <array>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <unordered_map>

namespace curldiv {

namespace {

class LineReader {
 public:
  LineReader(const std::string& text, std::string source) : in_(text), source_(std::move(source)) {}

  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++line_no_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") != std::string::npos) return true;
    }
    return false;
  }

  std::string expect(const std::string& section) {
    std::string line;
    if (!next(line)) fail("unexpected end of file in section " + section);
    return line;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(source_ + ":" + std::to_string(line_no_) + ": " + what);
  }

  int line_no() const { return line_no_; }

 private:
  std::istringstream in_;
  std::string source_;
  int line_no_ = 0;
};

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t");
  const auto b = s.find_last_not_of(" \t");
  return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("failed reading '" + path + "'");
  return ss.str();
}

template <typename T>
T parse_count(LineReader& r, const std::string& line, const std::string& section) {
  std::istringstream ls(line);
  T value{};
  std::string extra;
  if (!(ls >> value) || (ls >> extra) || value < 0) r.fail("invalid count in section " + section);
  return value;
}

void skip_section(LineReader& r, const std::string& name) {
  const std::string end = "$End" + name.substr(1);
  std::string line;
  while (r.next(line)) {
    if (trim(line) == end) return;
  }
  r.fail("unterminated section " + name);
}

void expect_end(LineReader& r, const std::string& section) {
  const std::string line = trim(r.expect(section));
  if (line != "$End" + section.substr(1)) r.fail("expected $End" + section.substr(1) + " in section " + section);
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << std::setprecision(17);
  return out;
}

void finish_output(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace

GmshData parse_gmsh(const std::string& text, const std::string& source) {
  LineReader r(text, source);
  bool have_format = false;
  bool have_nodes = false;
  bool have_elements = false;
  std::unordered_map<long, Point3> nodes;
  std::vector<std::array<long, 4>> tets;
  std::vector<int> tet_tags;
  std::vector<std::pair<std::array<long, 3>, int>> triangles;
  std::map<int, std::string> names;

  std::string line;
  while (r.next(line)) {
    const std::string section = trim(line);
    if (section == "$MeshFormat") {
      std::istringstream ls(r.expect(section));
      double version = 0.0;
      int file_type = -1, data_size = 0;
      if (!(ls >> version >> file_type >> data_size)) r.fail("malformed format line in section $MeshFormat");
      if (version < 2.0 || version >= 3.0)
        r.fail("unsupported MSH version " + std::to_string(version) + " (2.2 ASCII expected)");
      if (file_type != 0) r.fail("binary MSH files are not supported");
      expect_end(r, section);
      have_format = true;
    } else if (section == "$PhysicalNames") {
      const int n = parse_count<int>(r, r.expect(section), section);
      for (int i = 0; i < n; ++i) {
        std::istringstream ls(r.expect(section));
        int dim = 0, tag = 0;
        std::string name;
        if (!(ls >> dim >> tag)) r.fail("malformed entry in section $PhysicalNames");
        std::getline(ls, name);
        name = trim(name);
        if (name.size() >= 2 && name.front() == '"' && name.back() == '"') name = name.substr(1, name.size() - 2);
        names[tag] = name;
      }
      expect_end(r, section);
    } else if (section == "$Nodes") {
      if (!have_format) r.fail("$Nodes before $MeshFormat");
      const long n = parse_count<long>(r, r.expect(section), section);
      nodes.reserve(n);
      for (long i = 0; i < n; ++i) {
        std::istringstream ls(r.expect(section));
        long id = 0;
        double x = 0, y = 0, z = 0;
        if (!(ls >> id >> x >> y >> z)) r.fail("malformed node in section $Nodes");
        if (!nodes.emplace(id, Point3(x, y, z)).second) r.fail("duplicate node id " + std::to_string(id));
      }
      expect_end(r, section);
      have_nodes = true;
    } else if (section == "$Elements") {
      if (!have_nodes) r.fail("$Elements before $Nodes");
      const long n = parse_count<long>(r, r.expect(section), section);
      for (long i = 0; i < n; ++i) {
        std::istringstream ls(r.expect(section));
        long id = 0;
        int type = 0, ntags = 0;
        if (!(ls >> id >> type >> ntags) || ntags < 0) r.fail("malformed element in section $Elements");
        std::vector<int> tags(ntags);
        for (int& t : tags) {
          if (!(ls >> t)) r.fail("malformed element tags in section $Elements");
        }
        const int physical = ntags > 0 ? tags[0] : 0;
        auto read_nodes = [&](auto& out) {
          for (auto& v : out) {
            if (!(ls >> v)) r.fail("malformed element nodes in section $Elements");
            if (!nodes.count(v)) r.fail("element references unknown node " + std::to_string(v));
          }
        };
        if (type == 4) {
          std::array<long, 4> v{};
          read_nodes(v);
          tets.push_back(v);
          tet_tags.push_back(physical);
        } else if (type == 2) {
          std::array<long, 3> v{};
          read_nodes(v);
          triangles.emplace_back(v, physical);
        }
      }
      expect_end(r, section);
      have_elements = true;
    } else if (!section.empty() && section[0] == '$') {
      skip_section(r, section);
    } else {
      r.fail("unexpected content outside of a section");
    }
  }
  if (!have_format) throw ParseError(source + ": missing $MeshFormat section");
  if (!have_nodes) throw ParseError(source + ": missing $Nodes section");
  if (!have_elements) throw ParseError(source + ": missing $Elements section");
  if (tets.empty()) throw ParseError(source + ": file contains no tetrahedra");

  // Keep only nodes used by tetrahedra, in increasing file-id order.
  std::map<long, int> index;
  for (const auto& t : tets)
    for (long v : t) index.emplace(v, 0);
  std::vector<Point3> coords;
  std::vector<int> node_ids;
  coords.reserve(index.size());
  for (auto& [id, k] : index) {
    k = static_cast<int>(coords.size());
    coords.push_back(nodes.at(id));
    node_ids.push_back(static_cast<int>(id));
  }
  std::vector<std::array<int, 4>> cells;
  cells.reserve(tets.size());
  for (const auto& t : tets) cells.push_back({index[t[0]], index[t[1]], index[t[2]], index[t[3]]});

  GmshData data{Mesh::build(std::move(coords), cells, std::move(tet_tags)), {}, std::move(names),
                std::move(node_ids)};
  for (const auto& [tri, tag] : triangles) {
    auto a = index.find(tri[0]), b = index.find(tri[1]), c = index.find(tri[2]);
    if (a == index.end() || b == index.end() || c == index.end()) continue;
    const int f = data.mesh.find_face(a->second, b->second, c->second);
    if (f >= 0) data.face_tags[f] = tag;
  }
  return data;
}

GmshData read_gmsh(const std::string& path) { return parse_gmsh(read_file(path), path); }

void write_gmsh(const Mesh& m, const std::string& path) {
  auto out = open_output(path);
  out << "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n";
  out << "$Nodes\n" << m.num_vertices() << "\n";
  for (int v = 0; v < m.num_vertices(); ++v) {
    const auto& p = m.vertex(v);
    out << v + 1 << ' ' << p.x() << ' ' << p.y() << ' ' << p.z() << "\n";
  }
  out << "$EndNodes\n$Elements\n" << m.num_tets() << "\n";
  for (int t = 0; t < m.num_tets(); ++t) {
    const auto& c = m.tet(t);
    out << t + 1 << " 4 2 " << m.tag(t) << ' ' << m.tag(t);
    for (int v : c) out << ' ' << v + 1;
    out << "\n";
  }
  out << "$EndElements\n";
  finish_output(out, path);
}

Mesh block_mesh(int nx, int ny, int nz, double h, const std::function<bool(int, int, int)>& keep) {
  if (nx < 1 || ny < 1 || nz < 1) throw MeshError("block dimensions must be positive");
  auto lattice = [&](int i, int j, int k) { return (k * (ny + 1) + j) * (nx + 1) + i; };
  static constexpr std::array<std::array<int, 3>, 6> kPermutations = {
      {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};

  std::vector<std::array<int, 4>> cells;
  for (int k = 0; k < nz; ++k) {
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        if (!keep(i, j, k)) continue;
        for (const auto& perm : kPermutations) {
          std::array<int, 3> c = {i, j, k};
          std::array<int, 4> tet{};
          tet[0] = lattice(c[0], c[1], c[2]);
          for (int s = 0; s < 3; ++s) {
            ++c[perm[s]];
            tet[s + 1] = lattice(c[0], c[1], c[2]);
          }
          cells.push_back(tet);
        }
      }
    }
  }
  std::vector<int> index((nx + 1) * (ny + 1) * (nz + 1), -1);
  for (const auto& t : cells)
    for (int v : t) index[v] = 0;
  std::vector<Point3> coords;
  for (int k = 0; k <= nz; ++k) {
    for (int j = 0; j <= ny; ++j) {
      for (int i = 0; i <= nx; ++i) {
        const int v = lattice(i, j, k);
        if (index[v] < 0) continue;
        index[v] = static_cast<int>(coords.size());
        coords.emplace_back(i * h, j * h, k * h);
      }
    }
  }
  for (auto& t : cells)
    for (int& v : t) v = index[v];
  return Mesh::build(std::move(coords), cells);
}

Mesh structured_cube_mesh(int n) {
  if (n < 1) throw MeshError("structured cube needs n >= 1");
  return block_mesh(n, n, n, 1.0 / n, [](int, int, int) { return true; });
}

Mesh solid_torus_mesh(int k) {
  if (k < 1) throw MeshError("refinement factor must be positive");
  return block_mesh(3 * k, 3 * k, k, 1.0 / k, [k](int i, int j, int) {
    return !(i / k == 1 && j / k == 1);
  });
}

Mesh hollow_ball_mesh(int k) {
  if (k < 1) throw MeshError("refinement factor must be positive");
  return block_mesh(3 * k, 3 * k, 3 * k, 1.0 / k, [k](int i, int j, int l) {
    return !(i / k == 1 && j / k == 1 && l / k == 1);
  });
}

void write_vtk(const Mesh& m, const FEFunction& u, const std::string& path,
               const std::vector<std::pair<std::string, Eigen::VectorXd>>& cell_scalars) {
  if (u.space != Space::Edge && u.space != Space::Face)
    throw std::invalid_argument("write_vtk expects an edge or face field");
  for (const auto& [name, values] : cell_scalars) {
    if (values.size() != m.num_tets()) throw std::invalid_argument("cell array '" + name + "' has wrong size");
  }
  auto out = open_output(path);
  out << "# vtk DataFile Version 3.0\ncurldiv field\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << m.num_vertices() << " double\n";
  for (const auto& p : m.vertices()) out << p.x() << ' ' << p.y() << ' ' << p.z() << "\n";
  out << "CELLS " << m.num_tets() << ' ' << 5 * m.num_tets() << "\n";
  for (int t = 0; t < m.num_tets(); ++t) {
    const auto& c = m.tet(t);
    out << "4 " << c[0] << ' ' << c[1] << ' ' << c[2] << ' ' << c[3] << "\n";
  }
  out << "CELL_TYPES " << m.num_tets() << "\n";
  for (int t = 0; t < m.num_tets(); ++t) out << "10\n";
  out << "CELL_DATA " << m.num_tets() << "\nVECTORS u double\n";
  for (int t = 0; t < m.num_tets(); ++t) {
    const Vector3 v = eval_vector(m, u, t, m.geometry(t).centroid());
    out << v.x() << ' ' << v.y() << ' ' << v.z() << "\n";
  }
  for (const auto& [name, values] : cell_scalars) {
    out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (int t = 0; t < m.num_tets(); ++t) out << values[t] << "\n";
  }
  finish_output(out, path);
}

}  // namespace curldiv
