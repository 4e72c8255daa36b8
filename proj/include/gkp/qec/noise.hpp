#pragma once

// GKP displacement noise on the RHG lattice.
//
// Every node (face or edge) is a macronode of four modes; each mode is one
// half of a Bell pair of GKP states A and B and carries q-noise variance
// Dq_A^2 + Dp_B^2 (sigma = sqrt2 Delta per state, halved by the 50:50
// coupler).  Conditioning on the three ancilla homodynes of the 4-splitter
// leaves the harmonic mean of the four mode variances on the survivor.
// Controlled-Z links add each boundary edge's q-noise to a face's measured
// value, so faces sharing an edge are correlated.

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "gkp/harness/rng.hpp"
#include "gkp/qec/lattice.hpp"

namespace gkp::qec {

/// Delta = 10^{-dB/20} / 2 (vacuum reads 0 dB).
double delta_from_db(double db);

struct NoiseModel {
  enum class Source { Empirical, Gaussian };
  Source source = Source::Gaussian;
  std::vector<std::pair<double, double>> samples;  // (dq_db, dp_db), empirical
  double mu_q_db = 10.0, mu_p_db = 10.0, sigma_db = 0.0;

  static NoiseModel gaussian(double mu_q_db, double mu_p_db, double sigma_db);
  static NoiseModel empirical(std::vector<std::pair<double, double>> samples);
  void validate() const;
};

struct NoiseDraw {
  std::vector<double> node_var_face;  // survivor variances
  std::vector<double> node_var_edge;
  std::vector<double> face_shift;     // true displacement on each face's measured value
  std::vector<double> x;              // homodyne record: face_shift / sqrt(pi)
};

NoiseDraw draw_noise(const RhgLattice& lat, const NoiseModel& model, Rng& rng);

/// Scaled (1/pi) covariance of the three faces owned by `cell`.
Eigen::Matrix3d face_block_covariance(const RhgLattice& lat, const NoiseDraw& draw, int cell);

/// Full scaled covariance over all faces (dense; tests and small d only).
Eigen::MatrixXd face_covariance(const RhgLattice& lat, const NoiseDraw& draw);

}  // namespace gkp::qec
