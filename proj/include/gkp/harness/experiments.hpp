#pragma once

// Experiment drivers shared by the CLI and the acceptance run.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gkp/breeding.hpp"
#include "gkp/catfit.hpp"
#include "gkp/harness/config.hpp"
#include "gkp/harness/csv.hpp"
#include "gkp/harness/manifest.hpp"
#include "gkp/qec/memory.hpp"
#include "gkp/teleport.hpp"

namespace gkp {

/// Runs fn(i) for i in [0, n) on `threads` workers.  Work is interleaved by
/// index and every result lands in its own slot, so output never depends
/// on scheduling.  The first exception is rethrown after all workers join.
void parallel_for(std::int64_t n, int threads, const std::function<void(std::int64_t)>& fn);

PhantmConfig phantm_config(const Config& c);
PhantmConfig phantm_config(const Config& c, double r_db);
BreedConfig breed_config(const Config& c, double r_db);

struct CatTrialResult {
  std::uint32_t trial;
  std::uint64_t seed;
  double r_db;
  CatRunRecord run;
  CatFit fit;
  int flags;  // truncation events + saturation
};

/// Trial i uses the Stage::Phantm stream (seed, i, lane 0).
std::vector<CatTrialResult> run_cat_trials(const PhantmConfig& cfg, std::int64_t trials, std::uint64_t seed,
                                           int threads, const CatFitSearch& search = {});

std::vector<GkpTrial> run_gkp_trials(const PhantmConfig& phantm, const BreedConfig& breed, std::int64_t trials,
                                     std::uint64_t seed, int threads);

std::vector<std::vector<std::string>> cat_rows(const std::vector<CatTrialResult>& r);
std::vector<std::vector<std::string>> gkp_rows(const std::vector<GkpTrial>& r, double r_db);

/// (detector_index 1..8, n, count) over every step of every run.
std::vector<std::vector<std::string>> photon_hist_rows(const std::vector<CatTrialResult>& r);

std::vector<std::string> qec_row(const std::string& source, double r_or_mu, double sigma, int d,
                                 const qec::RateResult& rate, std::uint64_t seed);

/// (dq_db, dp_db) pairs from a gkp_samples table.
std::vector<std::pair<double, double>> gkp_pairs(const Table& t);

/// alpha_c of the accepted fits only; rejected fits stay in the CSV.
std::vector<double> accepted_alpha_c(const std::vector<CatTrialResult>& r);

FlagCounters count_flags(const std::vector<CatTrialResult>& r);
FlagCounters count_flags(const std::vector<GkpTrial>& r);

struct Crossover {
  std::vector<double> r_a, p0_gate, n_gate;
  double p0_base = 0.0, n_base = 0.0;
  std::optional<double> p0_cross, n_cross;  // first r_a where the gated curve meets the baseline
};

Crossover antisqueeze_crossover(double alpha, double r_prime, SqueezingValue r, NoiseArgument arg, double theta_deg,
                                double ra_max, int points, int cutoff);

struct MeanSem {
  double mean = 0.0, sd = 0.0, sem = 0.0;
};

MeanSem mean_sem(const std::vector<double>& v);

}  // namespace gkp
