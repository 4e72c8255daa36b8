#include <algorithm>
#include <cmath>
#include <vector>

#include "gkp/fock.hpp"
#include "gkp/simd/kernels.hpp"

namespace gkp {

double PhaseSpaceGrid::q_at(int i) const {
  return q_points == 1 ? q_min : q_min + (q_max - q_min) * i / (q_points - 1);
}

double PhaseSpaceGrid::p_at(int j) const {
  return p_points == 1 ? p_min : p_min + (p_max - p_min) * j / (p_points - 1);
}

double PhaseSpaceGrid::cell_area() const {
  const double dq = q_points > 1 ? (q_max - q_min) / (q_points - 1) : 1.0;
  const double dp = p_points > 1 ? (p_max - p_min) / (p_points - 1) : 1.0;
  return dq * dp;
}

WignerMap wigner_map(const FockState& state, const PhaseSpaceGrid& grid) {
  if (state.modes() != 1) throw Error(ErrorKind::InvalidDimension, "Wigner map needs a single-mode state");
  if (grid.q_points < 1 || grid.p_points < 1)
    throw Error(ErrorKind::InvalidParameter, "empty phase-space grid");

  const std::size_t npts = static_cast<std::size_t>(grid.q_points) * grid.p_points;
  std::vector<double> qs(npts), ps(npts), w(npts);
  for (int j = 0; j < grid.p_points; ++j)
    for (int i = 0; i < grid.q_points; ++i) {
      const std::size_t k = static_cast<std::size_t>(j) * grid.q_points + i;
      qs[k] = grid.q_at(i);
      ps[k] = grid.p_at(j);
    }

  const CVector psi = state.vector();
  simd::kernels().wigner(psi.data(), state.cutoff(), qs.data(), ps.data(), w.data(), npts);

  WignerMap out;
  out.grid = grid;
  out.values.resize(grid.p_points, grid.q_points);
  double sum = 0.0, peak = 0.0;
  for (int j = 0; j < grid.p_points; ++j)
    for (int i = 0; i < grid.q_points; ++i) {
      const double v = w[static_cast<std::size_t>(j) * grid.q_points + i];
      out.values(j, i) = v;
      sum += v;
      peak = std::max(peak, std::abs(v));
    }
  out.integral = sum * grid.cell_area();

  double border = 0.0;
  for (int i = 0; i < grid.q_points; ++i)
    border = std::max({border, std::abs(out.values(0, i)), std::abs(out.values(grid.p_points - 1, i))});
  for (int j = 0; j < grid.p_points; ++j)
    border = std::max({border, std::abs(out.values(j, 0)), std::abs(out.values(j, grid.q_points - 1))});
  out.coverage_warning = border > 1e-3 * peak;
  return out;
}

double wigner_at(const FockState& state, double q, double p) {
  if (state.modes() != 1) throw Error(ErrorKind::InvalidDimension, "Wigner value needs a single-mode state");
  const CVector psi = state.vector();
  double w = 0.0;
  simd::scalar_kernels().wigner(psi.data(), state.cutoff(), &q, &p, &w, 1);
  return w;
}

}  // namespace gkp
