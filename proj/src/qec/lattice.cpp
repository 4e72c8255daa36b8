#include "gkp/qec/lattice.hpp"

#include "gkp/error.hpp"

namespace gkp::qec {

int RhgLattice::cell(int x, int y, int z) const {
  auto wrap = [this](int v) { return ((v % d) + d) % d; };
  return wrap(x) + d * (wrap(y) + d * wrap(z));
}

std::array<int, 3> RhgLattice::coords(int c) const { return {c % d, (c / d) % d, c / (d * d)}; }

RhgLattice build_rhg(int d) {
  if (d != 3 && d != 5 && d != 7) throw Error(ErrorKind::InvalidParameter, "distance must be 3, 5 or 7");
  RhgLattice lat;
  lat.d = d;
  const int n = d * d * d;
  lat.cube_faces.resize(n);
  lat.face_cubes.resize(3 * n);
  lat.face_edges.resize(3 * n);

  for (int c = 0; c < n; ++c) {
    const auto [x, y, z] = lat.coords(c);
    const int up[3] = {lat.cell(x + 1, y, z), lat.cell(x, y + 1, z), lat.cell(x, y, z + 1)};
    for (int dir = 0; dir < 3; ++dir) {
      lat.cube_faces[c][dir] = 3 * c + dir;
      lat.cube_faces[c][3 + dir] = 3 * up[dir] + dir;
    }
    int down[3] = {lat.cell(x - 1, y, z), lat.cell(x, y - 1, z), lat.cell(x, y, z - 1)};
    for (int dir = 0; dir < 3; ++dir) {
      const int f = 3 * c + dir;
      lat.face_cubes[f] = {c, down[dir]};
      // spanning directions a < b
      const int a = dir == 0 ? 1 : 0;
      const int b = dir == 2 ? 1 : 2;
      lat.face_edges[f] = {3 * c + a, 3 * c + b, 3 * up[b] + a, 3 * up[a] + b};
    }
    if (x == 0) lat.logical_sheet.push_back(3 * c);
  }
  return lat;
}

}  // namespace gkp::qec
