#include "gkp/qec/memory.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include "gkp/error.hpp"
#include "gkp/qec/decoder.hpp"

namespace gkp::qec {

TrialOutcome run_memory_trial(const RhgLattice& lat, const NoiseModel& model, Rng& rng) {
  const NoiseDraw draw = draw_noise(lat, model, rng);
  const HomodyneRecord rec = decode_inner(lat, draw);
  const std::vector<int> defects = extract_syndrome(rec.q_binned, lat);
  const MatchingGraph g = matching_graph(defects, rec, lat);
  const std::vector<int> corr = correction(g, lat);
  TrialOutcome out;
  out.defects = static_cast<int>(defects.size());
  out.flagged = rec.flagged;
  out.failure = logical_parity(rec.q_binned, corr, lat) != 0;
  return out;
}

Interval wilson_interval(std::int64_t k, std::int64_t n, double z) {
  if (n <= 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double den = 1.0 + z2 / nn;
  const double mid = (p + z2 / (2.0 * nn)) / den;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / den;
  return {std::max(0.0, mid - half), std::min(1.0, mid + half)};
}

RateResult logical_rate(int d, const NoiseModel& model, std::int64_t trials, std::uint64_t master_seed, int threads,
                        std::uint32_t lane_salt) {
  if (trials <= 0) throw Error(ErrorKind::InvalidParameter, "trial count must be positive");
  model.validate();
  const RhgLattice lat = build_rhg(d);
  const int nt = std::max(1, std::min<int>(threads, static_cast<int>(std::min<std::int64_t>(trials, 64))));
  std::vector<std::int64_t> fails(nt, 0);
  std::vector<int> flags(nt, 0);
  auto work = [&](int t) {
    for (std::int64_t i = t; i < trials; i += nt) {
      Rng rng = seed_plan(master_seed, Stage::QecNoise, static_cast<std::uint32_t>(i),
                          static_cast<std::uint32_t>(d) + (lane_salt << 4));
      const TrialOutcome o = run_memory_trial(lat, model, rng);
      fails[t] += o.failure ? 1 : 0;
      flags[t] += o.flagged;
    }
  };
  if (nt == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nt; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  RateResult r;
  r.trials = trials;
  for (int t = 0; t < nt; ++t) {
    r.failures += fails[t];
    r.flagged += flags[t];
  }
  r.rate = static_cast<double>(r.failures) / static_cast<double>(trials);
  r.ci = wilson_interval(r.failures, trials);
  return r;
}

namespace {

constexpr std::int64_t kExactBinomial = 1000000;

// Continuity-corrected log rate so empty cells stay finite.
double log_rate(std::int64_t k, std::int64_t n) {
  return std::log((static_cast<double>(k) + 0.5) / (static_cast<double>(n) + 1.0));
}

}  // namespace

std::optional<double> rate_crossing(const std::vector<RatePoint>& points) {
  std::vector<int> ds;
  for (const auto& p : points) ds.push_back(p.d);
  std::sort(ds.begin(), ds.end());
  ds.erase(std::unique(ds.begin(), ds.end()), ds.end());
  if (ds.size() < 2) return std::nullopt;

  double sum = 0.0;
  int count = 0;
  for (std::size_t k = 0; k + 1 < ds.size(); ++k) {
    // diff(r) = log rate(d_large) - log rate(d_small) on the shared r grid
    std::vector<std::pair<double, double>> diff;
    for (const auto& a : points) {
      if (a.d != ds[k]) continue;
      for (const auto& b : points)
        if (b.d == ds[k + 1] && b.r_db == a.r_db)
          diff.emplace_back(a.r_db, log_rate(b.failures, b.trials) - log_rate(a.failures, a.trials));
    }
    std::sort(diff.begin(), diff.end());
    for (std::size_t i = 0; i + 1 < diff.size(); ++i) {
      const auto [r0, f0] = diff[i];
      const auto [r1, f1] = diff[i + 1];
      if (f0 == 0.0) {
        sum += r0;
        ++count;
        break;
      }
      if ((f0 > 0.0) != (f1 > 0.0)) {
        sum += r0 + (r1 - r0) * f0 / (f0 - f1);
        ++count;
        break;
      }
    }
  }
  if (count == 0) return std::nullopt;
  return sum / count;
}

ThresholdResult threshold_estimate(const std::vector<RatePoint>& points, int bootstrap, std::uint64_t master_seed) {
  for (const auto& p : points)
    if (p.trials <= 0 || p.failures < 0 || p.failures > p.trials)
      throw Error(ErrorKind::InvalidParameter, "rate table entry out of range");
  ThresholdResult out;
  out.r_th = rate_crossing(points);
  out.bootstrap_total = bootstrap;
  if (!out.r_th || bootstrap <= 0) return out;

  Rng rng = seed_plan(master_seed, Stage::Bootstrap, 0);
  std::vector<double> est;
  std::vector<RatePoint> resampled = points;
  for (int b = 0; b < bootstrap; ++b) {
    for (std::size_t i = 0; i < points.size(); ++i) {
      const std::int64_t n = points[i].trials;
      const double p = static_cast<double>(points[i].failures) / static_cast<double>(n);
      std::int64_t k = 0;
      if (n <= kExactBinomial) {
        for (std::int64_t t = 0; t < n; ++t) k += rng.uniform() < p ? 1 : 0;
      } else {
        // normal approximation for very large tables
        const double mean = p * static_cast<double>(n), sd = std::sqrt(mean * (1.0 - p));
        k = std::clamp<std::int64_t>(std::llround(mean + sd * rng.normal()), 0, n);
      }
      resampled[i].failures = k;
    }
    if (const auto r = rate_crossing(resampled)) est.push_back(*r);
  }
  out.bootstrap_valid = static_cast<int>(est.size());
  if (est.size() >= 2) {
    std::sort(est.begin(), est.end());
    auto pct = [&](double q) {
      const double pos = q * static_cast<double>(est.size() - 1);
      const auto lo = static_cast<std::size_t>(std::floor(pos));
      const auto hi = std::min(lo + 1, est.size() - 1);
      return est[lo] + (pos - static_cast<double>(lo)) * (est[hi] - est[lo]);
    };
    out.ci = Interval{pct(0.025), pct(0.975)};
  }
  return out;
}

std::vector<BoundaryCurve> gaussian_boundary_sweep(const SweepSpec& spec) {
  if (spec.mu_q_db.empty() || spec.mu_p_db.empty() || spec.sigma_db.empty())
    throw Error(ErrorKind::InvalidParameter, "empty sweep grid");
  if (spec.d_small >= spec.d_large) throw Error(ErrorKind::InvalidParameter, "sweep needs d_small < d_large");
  std::vector<double> mq = spec.mu_q_db;
  std::sort(mq.begin(), mq.end());
  std::vector<BoundaryCurve> out;
  std::uint32_t salt = 0;
  for (double sigma : spec.sigma_db) {
    BoundaryCurve c;
    c.sigma_db = sigma;
    c.mu_p_db = spec.mu_p_db;
    for (double mp : spec.mu_p_db) {
      std::optional<double> first;
      for (double q : mq) {
        const NoiseModel m = NoiseModel::gaussian(q, mp, sigma);
        ++salt;
        const RateResult a = logical_rate(spec.d_small, m, spec.trials, spec.master_seed, spec.threads, salt);
        const RateResult b = logical_rate(spec.d_large, m, spec.trials, spec.master_seed, spec.threads, salt);
        if (b.failures < a.failures || (a.failures == 0 && b.failures == 0)) {
          first = q;
          break;
        }
      }
      c.mu_q_db.push_back(first);
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::optional<double> boundary_at(const BoundaryCurve& c, double mu_p_db) {
  for (std::size_t i = 0; i + 1 < c.mu_p_db.size(); ++i) {
    const double a = c.mu_p_db[i], b = c.mu_p_db[i + 1];
    if ((mu_p_db - a) * (mu_p_db - b) > 0.0) continue;
    if (!c.mu_q_db[i] || !c.mu_q_db[i + 1]) return std::nullopt;
    const double t = b == a ? 0.0 : (mu_p_db - a) / (b - a);
    return *c.mu_q_db[i] + t * (*c.mu_q_db[i + 1] - *c.mu_q_db[i]);
  }
  if (c.mu_p_db.size() == 1 && c.mu_p_db[0] == mu_p_db) return c.mu_q_db[0];
  return std::nullopt;
}

}  // namespace gkp::qec
