#pragma once

// Adaptive breeding of PhANTM cats into GKP states.

#include <cstdint>
#include <utility>
#include <vector>

#include "gkp/catfit.hpp"
#include "gkp/fock.hpp"
#include "gkp/harness/rng.hpp"
#include "gkp/teleport.hpp"

namespace gkp {

struct LowerBounds {
  double alpha_db;      // r'_{alpha_lb}
  double two_alpha_db;  // r'_{2 alpha_lb}
};

/// Lower-bound table indexed by cluster squeezing in dB; linear
/// interpolation between rows, clamped at the ends.
LowerBounds table_lower_bounds(double r_db);

struct BreedConfig {
  int rounds = 3;
  double amplitude_unit = 2.5066282746310002;  // sqrt(2 pi)
  LowerBounds lower_bounds = table_lower_bounds(11.5);
  SqueezingValue r = SqueezingValue::from_db(11.5);
  NoiseArgument noise_argument = NoiseArgument::Source;
  int cutoff = 65;
  double u_q = 2.5066282746310002;
  double u_p = 2.5066282746310002;

  double alpha_b() const;
  int inputs() const { return 1 << rounds; }
  SqueezingValue r0() const { return channel_r0(r, noise_argument); }
  void validate() const;
};

enum class BreedAction { RescaleToAlphaB, RescaleTo2AlphaB, ReplaceWithSqueezedVacuum };

const char* to_string(BreedAction a);

struct RescaledSqueezing {
  double alpha_b_db;
  double two_alpha_b_db;
};

/// Squeezing of the fitted cat after the exact amplitude map to alpha_b and
/// 2 alpha_b: r' + ln(alpha/target) = ln(alpha_c/target).
RescaledSqueezing rescaled_squeezing(const CatFit& fit, double alpha_b);

struct Decision {
  BreedAction action;
  bool flagged = false;
};

/// Decision chain on already rescaled squeezing levels (dB).
BreedAction breed_action(const RescaledSqueezing& rs, const LowerBounds& lb);

Decision rescale_decision(const CatFit& fit, const BreedConfig& cfg);

/// teleport_squeeze with r_a = ln(fit.alpha / target).  Throws Truncation
/// when the output leaks above the cutoff.
FockState rescale_state(const FockState& state, const CatFit& fit, double target_alpha, SqueezingValue r0);

/// Odd cats get the phase e^{i u q}, u = pi/(2 sqrt2 alpha), flipping the
/// relative sign of the two components; even cats pass through.
FockState parity_align(const FockState& state, Parity parity, double alpha);

/// 50:50 beam splitter then p-homodyne of the second output at 0.
FockState breed_pair(const FockState& s1, const FockState& s2);

struct GkpSample {
  double dq_db = 0.0;
  double dp_db = 0.0;
  int substitutions = 0;
  std::uint64_t seed = 0;
  int flags = 0;
};

struct BreedResult {
  FockState state;
  GkpSample sample;
};

BreedResult breed_tree(const std::vector<FockState>& inputs, const BreedConfig& cfg);

/// Zero-pad or truncate a single-mode state to a new cutoff.
FockState resize_cutoff(const FockState& state, int cutoff);

/// Rescale/replace/align one PhANTM output ready for the tree.
struct PreparedInput {
  FockState state;
  BreedAction action;
  bool flagged;
};

PreparedInput prepare_input(const FockState& cat, const CatFit& fit, const BreedConfig& cfg);

struct GkpTrial {
  GkpSample sample;
  std::vector<CatFit> fits;
  std::vector<int> photons;
  int retries = 0;
  bool saturated = false;
  int truncation_events = 0;
};

/// Eight PhANTM runs (lanes 0..7 of the trial stream), fit, prepare, breed.
GkpTrial run_gkp_trial(const PhantmConfig& phantm, const BreedConfig& cfg, std::uint64_t master_seed,
                       std::uint32_t trial);

}  // namespace gkp
