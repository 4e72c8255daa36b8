#pragma once

// Homodyne projection and photon subtraction behind a beam splitter.

#include <vector>

#include "gkp/fock.hpp"
#include "gkp/harness/rng.hpp"

namespace gkp {

/// Hermite function psi_n(x) (position-space number state).
double quadrature_wavefunction(int n, double x);

/// psi_0(x) .. psi_{count-1}(x) in one recurrence pass.
Eigen::VectorXd quadrature_wavefunctions(int count, double x);

struct HomodyneResult {
  FockState post_state;  // surviving mode, normalized
  double density;        // unnormalized projection density
};

/// Measure the quadrature q cos(theta) + p sin(theta) of `mode` and keep the
/// other mode.  theta = 0 is q-homodyne, theta = pi/2 is p-homodyne.
HomodyneResult homodyne_project(const FockState& state, int mode, double theta, double outcome);

/// O_n = ((1 - t^2)^{n/2} / sqrt(n!)) t^{a^dag a} a^n with t = e^{-beta}.
class KrausFamily {
 public:
  KrausFamily(double beta, int cutoff);

  static KrausFamily from_angle_degrees(double theta_bs, int cutoff);

  double beta() const { return beta_; }
  double transmittance() const { return t_; }
  int cutoff() const { return cutoff_; }

  CMatrix op(int n) const;  // dense D x D matrix of O_n

  /// O_n applied to one mode, unnormalized.
  FockState apply(int n, const FockState& state, int mode = 0) const;

  /// P(n) = ||O_n psi||^2 / ||psi||^2 for n = 0 .. D-1.
  Eigen::VectorXd probabilities(const FockState& state, int mode = 0) const;

 private:
  double beta_, t_;
  int cutoff_;
  std::vector<double> log_fact_;
};

KrausFamily subtraction_kraus(double beta, int cutoff);

struct SubtractionOutcome {
  int n = 0;
  double probability = 0.0;
  FockState post_state;
  bool truncation_flag = false;
  bool saturated = false;  // n >= kPnrSaturation
};

inline constexpr int kPnrSaturation = 10;

SubtractionOutcome sample_subtraction(const FockState& state, int mode, double theta_bs_degrees, Rng& rng);

}  // namespace gkp
