#pragma once

// Inner (GKP binning) and outer (matching) decoding on the RHG lattice.

#include <Eigen/Dense>
#include <vector>

#include "gkp/qec/lattice.hpp"
#include "gkp/qec/noise.hpp"

namespace gkp::qec {

struct HomodyneRecord {
  std::vector<double> x;       // measured values / sqrt(pi)
  std::vector<int> q_binned;
  std::vector<double> flip_prob;
  int flagged = 0;             // flip probabilities that fell back to 1/2
};

inline int bit_of(int q) { return q & 1; }

/// Most likely integer vector under N(q, sigma): argmin (x-q)^T sigma^-1 (x-q).
/// Exact ties resolve to the lexicographically smallest q (toward the floor).
Eigen::VectorXi correlated_bin(const Eigen::VectorXd& x, const Eigen::MatrixXd& sigma);

/// Probability that coordinate i was binned across an odd number of cells,
/// summing shifts k in [-K, K] along e_i.  Sets *flagged and returns 1/2 when
/// every term underflows.
double flip_probability(int i, const Eigen::VectorXd& x, const Eigen::VectorXi& q, const Eigen::MatrixXd& sigma,
                        bool* flagged = nullptr);

inline constexpr int kFlipWindow = 6;

/// Bin every face using the 3x3 covariance block of its owning cell.
HomodyneRecord decode_inner(const RhgLattice& lat, const NoiseDraw& draw);

/// Cubes whose six face bits XOR to one.
std::vector<int> extract_syndrome(const std::vector<int>& q_binned, const RhgLattice& lat);

struct MatchingGraph {
  std::vector<int> defects;                    // cube indices
  std::vector<std::vector<double>> weight;     // defect x defect path costs
  std::vector<std::vector<int>> pred_face;     // per defect: face used to reach each cube, -1 at source
};

/// Per-face cost ln((1-p)/p), clamped to [1e-12, 20].
double face_cost(double p);

MatchingGraph matching_graph(const std::vector<int>& defects, const HomodyneRecord& rec, const RhgLattice& lat);

/// Face-flip correction from a min-weight perfect matching of the defects.
std::vector<int> correction(const MatchingGraph& g, const RhgLattice& lat);

/// Parity of (binned bits XOR correction) over the logical sheet.
int logical_parity(const std::vector<int>& q_binned, const std::vector<int>& corr, const RhgLattice& lat);

}  // namespace gkp::qec
