#pragma once

// RHG lattice on a periodic L x L x L torus (L = d).  Cells are indexed
// c = x + L (y + L z).  Every cell owns three faces (normal x, y, z at its
// lower boundary) and three edges (along x, y, z from its lower corner):
// face/edge index = 3 c + dir.  Primal checks are the L^3 cubes.

#include <array>
#include <vector>

namespace gkp::qec {

struct RhgLattice {
  int d = 0;
  std::vector<std::array<int, 6>> cube_faces;
  std::vector<std::array<int, 2>> face_cubes;
  std::vector<std::array<int, 4>> face_edges;
  std::vector<int> logical_sheet;  // x-normal faces at x = 0

  int cells() const { return d * d * d; }
  int faces() const { return 3 * cells(); }
  int edges() const { return 3 * cells(); }
  int cubes() const { return cells(); }

  int cell(int x, int y, int z) const;
  std::array<int, 3> coords(int cell) const;
};

RhgLattice build_rhg(int d);

}  // namespace gkp::qec
