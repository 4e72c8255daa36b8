#pragma once

// Teleportation-based squeezing with finite-squeezing noise and the
// two-mode PhANTM cat-growing step.

#include <string>
#include <vector>

#include "gkp/fock.hpp"
#include "gkp/harness/rng.hpp"

namespace gkp {

/// Finite-squeezing damping exp(-eps q^2/2) exp(-eps p^2/(2 tanh^2 2r0)),
/// eps = sech(2 r0), followed by renormalization.
FockState noise_channel(const FockState& state, SqueezingValue r0);

/// normalize(N(r0) S(r_a) state); S(r_a) with r_a > 0 squeezes q.
FockState teleport_squeeze(const FockState& state, SqueezingValue r0, double r_a);

/// Anti-squeezing gate: stretches q (the cat axis) by e^{r_a}.
FockState antisqueeze_gate(const FockState& state, SqueezingValue r0, double r_a);

struct SubtractionStats {
  double p0;
  double n_mean;
};

/// Photon statistics of one subtraction at theta_bs on the bare state.
SubtractionStats subtraction_statistics(const FockState& state, double theta_bs_degrees);

/// Same after the anti-squeezing gate S(r0, r_a).
SubtractionStats subtraction_statistics(const FockState& state, SqueezingValue r0, double r_a,
                                        double theta_bs_degrees);

std::vector<double> schedule_angles(double theta0, double a, double b, int count);

/// Which squeezing value enters eps = sech(2 r0) and the C_Z weight.
/// Cluster: the cluster squeezing r itself.  Source: r0 = acosh(e^{2r})/2.
enum class NoiseArgument { Cluster, Source };

SqueezingValue channel_r0(SqueezingValue r, NoiseArgument arg);

struct PhantmConfig {
  SqueezingValue r = SqueezingValue::from_db(11.5);  // cluster squeezing
  NoiseArgument noise_argument = NoiseArgument::Source;
  int n_steps = 10;
  int subtractors_per_step = 8;
  double theta0 = 18.0;
  double grad_a = 0.75;
  double grad_b = 0.35;
  SqueezingValue ra1 = SqueezingValue::from_db(2.39);
  SqueezingValue ra2 = SqueezingValue::from_db(0.43);
  int t_ph = 55;
  int cutoff = 60;
  bool antisqueeze_enabled = true;

  SqueezingValue r0() const { return channel_r0(r, noise_argument); }
  void validate() const;
};

struct StepOutcome {
  FockState post_state;
  std::vector<int> photons;
  double homodyne_m = 0.0;
  bool reset_applied = false;
  int antisqueeze_level = 0;  // 0 = no gate, 1 or 2
  bool saturated = false;
  bool truncation_flag = false;
};

/// Fresh cluster input: p-squeezed vacuum S(-r)|0>.
FockState cluster_input_state(SqueezingValue r, int cutoff);

/// One reduced two-mode PhANTM step on a cluster with squeezing r and
/// channel parameter r0.  Throws ZeroProbability when the post-selected
/// homodyne branch vanishes.
StepOutcome phantm_step(const FockState& state, SqueezingValue r, SqueezingValue r0,
                        const std::vector<double>& angles, Rng& rng);

struct CatRunRecord {
  FockState final_state;
  std::vector<StepOutcome> per_step;
  int total_photons = 0;
  std::uint64_t seed = 0;
  int retries = 0;
  std::vector<std::string> truncation_flags;
  bool saturated = false;
};

CatRunRecord run_phantm(const PhantmConfig& config, Rng& rng);

}  // namespace gkp
