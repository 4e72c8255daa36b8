#pragma once

#include "gkp/fock.hpp"

namespace gkp {

struct CatFit {
  double alpha = 0.0;
  double r_prime = 0.0;
  Parity parity = Parity::Even;
  double fidelity = 0.0;
  double alpha_c = 0.0;
  bool accepted = false;
};

inline constexpr double kFitAcceptance = 0.9;

struct CatFitSearch {
  double alpha_max = 8.0;
  double r_min = -1.5, r_max = 1.5;
  int alpha_points = 60;
  int r_points = 40;
  double refine_tolerance = 1e-4;
};

/// Best squeezed cat |cat(alpha, r', P)> for the state; parity is taken from
/// the sign of the parity expectation before the search.
CatFit fit_squeezed_cat(const FockState& state, const CatFitSearch& search = {});

}  // namespace gkp
