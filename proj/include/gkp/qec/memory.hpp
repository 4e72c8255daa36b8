#pragma once

// Memory experiment, logical error rates and threshold estimation.

#include <cstdint>
#include <optional>
#include <vector>

#include "gkp/qec/lattice.hpp"
#include "gkp/qec/noise.hpp"

namespace gkp::qec {

struct TrialOutcome {
  bool failure = false;
  int defects = 0;
  int flagged = 0;
};

TrialOutcome run_memory_trial(const RhgLattice& lat, const NoiseModel& model, Rng& rng);

struct Interval {
  double low = 0.0, high = 0.0;
};

/// 95% Wilson score interval for k successes in n trials.
Interval wilson_interval(std::int64_t k, std::int64_t n, double z = 1.959963984540054);

struct RateResult {
  std::int64_t trials = 0, failures = 0;
  double rate = 0.0;
  Interval ci;
  int flagged = 0;
};

/// Trials use Stage::QecNoise streams (trial index, lane = d) so any
/// partition across threads reproduces the same counts.
RateResult logical_rate(int d, const NoiseModel& model, std::int64_t trials, std::uint64_t master_seed,
                        int threads = 1, std::uint32_t lane_salt = 0);

struct RatePoint {
  double r_db;
  int d;
  std::int64_t trials, failures;
};

struct ThresholdResult {
  std::optional<double> r_th;
  std::optional<Interval> ci;  // bootstrap percentile interval
  int bootstrap_valid = 0;
  int bootstrap_total = 0;
};

/// Crossing of log-rate curves between adjacent distances (linear
/// interpolation in r), averaged over distance pairs.  No sign change in
/// the scanned range gives an empty r_th.
std::optional<double> rate_crossing(const std::vector<RatePoint>& points);

ThresholdResult threshold_estimate(const std::vector<RatePoint>& points, int bootstrap, std::uint64_t master_seed);

struct BoundaryCurve {
  double sigma_db;
  std::vector<double> mu_p_db;
  std::vector<std::optional<double>> mu_q_db;  // smallest correctable mu_q per mu_p row
};

struct SweepSpec {
  std::vector<double> mu_q_db, mu_p_db, sigma_db;
  int d_small = 3, d_large = 5;
  std::int64_t trials = 1000;
  std::uint64_t master_seed = 1;
  int threads = 1;
};

/// A grid point is correctable when rate(d_large) < rate(d_small).
std::vector<BoundaryCurve> gaussian_boundary_sweep(const SweepSpec& spec);

/// Interpolated mu_q of a boundary at a given mu_p (nullopt outside range or
/// where the row had no correctable point).
std::optional<double> boundary_at(const BoundaryCurve& c, double mu_p_db);

}  // namespace gkp::qec
