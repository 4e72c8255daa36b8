#include "gkp/catfit.hpp"

#include <algorithm>
#include <cmath>

namespace gkp {
namespace {

double cat_fidelity(const CVector& psi, double alpha, double r, Parity parity) {
  const CVector c = cat_amplitudes(alpha, r, parity, static_cast<int>(psi.size()));
  return std::norm(c.dot(psi));
}

}  // namespace

CatFit fit_squeezed_cat(const FockState& state, const CatFitSearch& s) {
  if (state.modes() != 1) throw Error(ErrorKind::InvalidDimension, "cat fit needs a single-mode state");
  if (s.alpha_points < 2 || s.r_points < 2 || !(s.alpha_max > 0.0) || !(s.r_max > s.r_min))
    throw Error(ErrorKind::InvalidParameter, "degenerate cat-fit search box");
  const CVector psi = state.vector().normalized();

  CatFit fit;
  fit.parity = parity(state) >= 0.0 ? Parity::Even : Parity::Odd;

  const double da = s.alpha_max / (s.alpha_points - 1);
  const double dr = (s.r_max - s.r_min) / (s.r_points - 1);
  double best = -1.0, ba = 0.0, br = 0.0;
  for (int i = 0; i < s.alpha_points; ++i)
    for (int j = 0; j < s.r_points; ++j) {
      const double a = i * da, r = s.r_min + j * dr;
      const double f = cat_fidelity(psi, a, r, fit.parity);
      if (f > best) {
        best = f;
        ba = a;
        br = r;
      }
    }

  // Pattern search around the best grid point; steps halve until both fall
  // below a scale where fidelity changes are below the tolerance.
  double sa = da, sr = dr;
  const double floor_step = std::sqrt(s.refine_tolerance) * 1e-2;
  while (sa > floor_step || sr > floor_step) {
    bool moved = false;
    const double cand[4][2] = {{ba + sa, br}, {ba - sa, br}, {ba, br + sr}, {ba, br - sr}};
    for (const auto& c : cand) {
      if (c[0] < 0.0) continue;
      const double f = cat_fidelity(psi, c[0], c[1], fit.parity);
      if (f > best) {
        best = f;
        ba = c[0];
        br = c[1];
        moved = true;
      }
    }
    if (!moved) {
      sa *= 0.5;
      sr *= 0.5;
    }
  }

  fit.alpha = ba;
  fit.r_prime = br;
  fit.fidelity = std::clamp(best, 0.0, 1.0);
  fit.alpha_c = corrected_amplitude(ba, br);
  fit.accepted = fit.fidelity >= kFitAcceptance;
  return fit;
}

}  // namespace gkp
