#pragma once

#include "curldiv/io.hpp"
#include "curldiv/topology.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace testing_support {

inline std::string fixture(const std::string& name) { return std::string(CURLDIV_FIXTURE_DIR) + "/" + name; }

/// The fixtures every property is checked on.
inline std::vector<std::string> fixture_names() {
  return {"single_tet.msh", "cube6.msh", "cube_n2.msh", "solid_torus.msh", "hollow_ball.msh", "double_torus.msh"};
}

inline curldiv::Mesh load(const std::string& name) { return curldiv::read_gmsh(fixture(name)).mesh; }

/// Rank of a dense integer matrix modulo a large prime. Agrees with the rank
/// over Q unless the prime divides a nonzero maximal minor.
inline int rank_mod_p(std::vector<std::vector<std::int64_t>> a) {
  constexpr std::int64_t p = 2147483647;
  auto mod = [&](std::int64_t x) { return ((x % p) + p) % p; };
  auto power = [&](std::int64_t b, std::int64_t e) {
    std::int64_t r = 1;
    b = mod(b);
    while (e) {
      if (e & 1) r = static_cast<std::int64_t>((__int128)r * b % p);
      b = static_cast<std::int64_t>((__int128)b * b % p);
      e >>= 1;
    }
    return r;
  };
  for (auto& row : a)
    for (auto& x : row) x = mod(x);
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  int rank = 0;
  for (std::size_t c = 0; c < cols && rank < static_cast<int>(rows); ++c) {
    std::size_t piv = rank;
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[rank]);
    const std::int64_t inv = power(a[rank][c], p - 2);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == static_cast<std::size_t>(rank) || a[r][c] == 0) continue;
      const std::int64_t f = static_cast<std::int64_t>((__int128)a[r][c] * inv % p);
      for (std::size_t k = c; k < cols; ++k)
        a[r][k] = mod(a[r][k] - static_cast<std::int64_t>((__int128)f * a[rank][k] % p));
    }
    ++rank;
  }
  return rank;
}

inline std::vector<std::vector<std::int64_t>> dense(const curldiv::IntSparse& s) {
  std::vector<std::vector<std::int64_t>> d(s.rows(), std::vector<std::int64_t>(s.cols(), 0));
  for (int r = 0; r < s.outerSize(); ++r)
    for (curldiv::IntSparse::InnerIterator it(s, r); it; ++it) d[it.row()][it.col()] = it.value();
  return d;
}

/// Four-point degree-2 rule on a tetrahedron, in barycentric coordinates.
inline std::vector<Eigen::Vector4d> keast4_points() {
  const double a = 0.5854101966249685, b = 0.1381966011250105;
  return {Eigen::Vector4d(a, b, b, b), Eigen::Vector4d(b, a, b, b), Eigen::Vector4d(b, b, a, b),
          Eigen::Vector4d(b, b, b, a)};
}

/// Raviart-Thomas mass matrix from the classical vertex formula
/// phi_i(x) = s_i (x - v_i) / (3 |T|), unit flux through face i, where s_i = +1
/// iff the global normal of face i points away from v_i.
inline Eigen::MatrixXd rt_mass_oracle(const curldiv::Mesh& m) {
  Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(m.num_faces(), m.num_faces());
  for (int t = 0; t < m.num_tets(); ++t) {
    const auto& c = m.tet(t);
    std::array<Eigen::Vector3d, 4> v;
    for (int i = 0; i < 4; ++i) v[i] = m.vertex(c[i]);
    const double vol = std::abs((v[1] - v[0]).cross(v[2] - v[0]).dot(v[3] - v[0])) / 6.0;
    std::array<int, 4> faces{};
    std::array<double, 4> scale{};
    for (int i = 0; i < 4; ++i) {
      std::array<int, 3> fv{};
      int k = 0;
      for (int j = 0; j < 4; ++j)
        if (j != i) fv[k++] = c[j];
      faces[i] = m.find_face(fv[0], fv[1], fv[2]);
      const Eigen::Vector3d n = (m.vertex(fv[1]) - m.vertex(fv[0])).cross(m.vertex(fv[2]) - m.vertex(fv[0]));
      const double s = n.dot(m.vertex(fv[0]) - v[i]) > 0 ? 1.0 : -1.0;
      scale[i] = s / (3.0 * vol);
    }
    for (const auto& lam : keast4_points()) {
      const Eigen::Vector3d x = lam[0] * v[0] + lam[1] * v[1] + lam[2] * v[2] + lam[3] * v[3];
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          mass(faces[i], faces[j]) += 0.25 * vol * scale[i] * scale[j] * (x - v[i]).dot(x - v[j]);
    }
  }
  return mass;
}

}  // namespace testing_support
