#include "gkp/harness/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

#include "gkp/error.hpp"

namespace gkp {

void parallel_for(std::int64_t n, int threads, const std::function<void(std::int64_t)>& fn) {
  const int nt = static_cast<int>(std::clamp<std::int64_t>(threads, 1, std::max<std::int64_t>(n, 1)));
  if (nt == 1) {
    for (std::int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr err;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (int t = 0; t < nt; ++t)
    pool.emplace_back([&, t] {
      try {
        for (std::int64_t i = t; i < n; i += nt) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!err) err = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

PhantmConfig phantm_config(const Config& c) { return phantm_config(c, c.num("phantm.r_db")); }

PhantmConfig phantm_config(const Config& c, double r_db) {
  PhantmConfig p;
  p.r = SqueezingValue::from_db(r_db);
  const std::string arg = c.str("phantm.noise_argument");
  if (arg == "source") p.noise_argument = NoiseArgument::Source;
  else if (arg == "cluster") p.noise_argument = NoiseArgument::Cluster;
  else throw Error(ErrorKind::Config, "phantm.noise_argument must be 'source' or 'cluster'");
  p.n_steps = static_cast<int>(c.integer("phantm.n_steps"));
  p.subtractors_per_step = static_cast<int>(c.integer("phantm.subtractors"));
  p.theta0 = c.num("phantm.theta0");
  p.grad_a = c.num("phantm.grad_a");
  p.grad_b = c.num("phantm.grad_b");
  p.ra1 = SqueezingValue::from_db(c.num("phantm.ra1_db"));
  p.ra2 = SqueezingValue::from_db(c.num("phantm.ra2_db"));
  p.t_ph = static_cast<int>(c.integer("phantm.t_ph"));
  p.cutoff = static_cast<int>(c.integer("phantm.cutoff"));
  p.antisqueeze_enabled = c.flag("phantm.antisqueeze");
  p.validate();
  return p;
}

BreedConfig breed_config(const Config& c, double r_db) {
  BreedConfig b;
  b.r = SqueezingValue::from_db(r_db);
  b.rounds = static_cast<int>(c.integer("breed.rounds"));
  b.cutoff = static_cast<int>(c.integer("breed.cutoff"));
  b.noise_argument = phantm_config(c, r_db).noise_argument;
  b.lower_bounds = table_lower_bounds(r_db);
  if (c.str("breed.lb_alpha_db") != "table") b.lower_bounds.alpha_db = c.num("breed.lb_alpha_db");
  if (c.str("breed.lb_2alpha_db") != "table") b.lower_bounds.two_alpha_db = c.num("breed.lb_2alpha_db");
  b.validate();
  return b;
}

std::vector<CatTrialResult> run_cat_trials(const PhantmConfig& cfg, std::int64_t trials, std::uint64_t seed,
                                           int threads, const CatFitSearch& search) {
  cfg.validate();
  std::vector<std::optional<CatTrialResult>> slots(trials);
  parallel_for(trials, threads, [&](std::int64_t i) {
    Rng rng = seed_plan(seed, Stage::Phantm, static_cast<std::uint32_t>(i));
    CatRunRecord run = run_phantm(cfg, rng);
    const CatFit fit = fit_squeezed_cat(run.final_state, search);
    const int flags = static_cast<int>(run.truncation_flags.size()) + (run.saturated ? 1 : 0);
    slots[i] = CatTrialResult{static_cast<std::uint32_t>(i), seed, cfg.r.db(), std::move(run), fit, flags};
  });
  std::vector<CatTrialResult> out;
  out.reserve(trials);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

std::vector<GkpTrial> run_gkp_trials(const PhantmConfig& phantm, const BreedConfig& breed, std::int64_t trials,
                                     std::uint64_t seed, int threads) {
  std::vector<GkpTrial> out(trials);
  parallel_for(trials, threads, [&](std::int64_t i) {
    out[i] = run_gkp_trial(phantm, breed, seed, static_cast<std::uint32_t>(i));
  });
  return out;
}

namespace {

std::string str(std::int64_t v) { return std::to_string(v); }
std::string str_u(std::uint64_t v) { return std::to_string(v); }

}  // namespace

std::vector<std::vector<std::string>> cat_rows(const std::vector<CatTrialResult>& r) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& t : r)
    rows.push_back({str(t.trial), str_u(t.seed), format_double(t.r_db), str(t.run.total_photons),
                    format_double(t.fit.alpha), format_double(t.fit.r_prime),
                    t.fit.parity == Parity::Even ? "even" : "odd", format_double(t.fit.fidelity),
                    format_double(t.fit.alpha_c), t.fit.accepted ? "1" : "0", str(t.flags)});
  return rows;
}

std::vector<std::vector<std::string>> gkp_rows(const std::vector<GkpTrial>& r, double r_db) {
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const GkpSample& s = r[i].sample;
    rows.push_back({str(static_cast<std::int64_t>(i)), str_u(s.seed), format_double(r_db), format_double(s.dq_db),
                    format_double(s.dp_db), str(s.substitutions), str(s.flags)});
  }
  return rows;
}

std::vector<std::vector<std::string>> photon_hist_rows(const std::vector<CatTrialResult>& r) {
  std::map<std::pair<int, int>, std::int64_t> counts;
  int detectors = 0;
  for (const auto& t : r)
    for (const auto& step : t.run.per_step) {
      detectors = std::max(detectors, static_cast<int>(step.photons.size()));
      for (std::size_t k = 0; k < step.photons.size(); ++k) ++counts[{static_cast<int>(k) + 1, step.photons[k]}];
    }
  std::vector<std::vector<std::string>> rows;
  for (const auto& [key, n] : counts) rows.push_back({str(key.first), str(key.second), str(n)});
  return rows;
}

std::vector<std::string> qec_row(const std::string& source, double r_or_mu, double sigma, int d,
                                 const qec::RateResult& rate, std::uint64_t seed) {
  return {source,
          format_double(r_or_mu),
          format_double(sigma),
          str(d),
          str(rate.trials),
          str(rate.failures),
          format_double(rate.rate),
          format_double(rate.ci.low),
          format_double(rate.ci.high),
          str_u(seed)};
}

std::vector<std::pair<double, double>> gkp_pairs(const Table& t) {
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i < t.rows.size(); ++i) out.emplace_back(t.num(i, "dq_db"), t.num(i, "dp_db"));
  return out;
}

FlagCounters count_flags(const std::vector<CatTrialResult>& r) {
  FlagCounters f;
  for (const auto& t : r) {
    ++f.trials;
    f.truncation += static_cast<std::int64_t>(t.run.truncation_flags.size());
    f.saturation += t.run.saturated ? 1 : 0;
    f.retries += t.run.retries;
    f.rejected_fits += t.fit.accepted ? 0 : 1;
    f.flagged_trials += t.flags > 0 ? 1 : 0;
  }
  return f;
}

FlagCounters count_flags(const std::vector<GkpTrial>& r) {
  FlagCounters f;
  for (const auto& t : r) {
    ++f.trials;
    f.truncation += t.truncation_events;
    f.saturation += t.saturated ? 1 : 0;
    f.retries += t.retries;
    for (const auto& fit : t.fits) f.rejected_fits += fit.accepted ? 0 : 1;
    f.flagged_trials += (t.truncation_events > 0 || t.saturated) ? 1 : 0;
  }
  return f;
}

Crossover antisqueeze_crossover(double alpha, double r_prime, SqueezingValue r, NoiseArgument arg, double theta_deg,
                                double ra_max, int points, int cutoff) {
  if (points < 2) throw Error(ErrorKind::InvalidParameter, "crossover scan needs at least two points");
  const FockState cat = make_cat(alpha, r_prime, Parity::Even, cutoff);
  const SqueezingValue r0 = channel_r0(r, arg);
  Crossover c;
  const SubtractionStats base = subtraction_statistics(cat, theta_deg);
  c.p0_base = base.p0;
  c.n_base = base.n_mean;
  for (int i = 0; i < points; ++i) {
    const double ra = ra_max * i / (points - 1);
    const SubtractionStats s = subtraction_statistics(cat, r0, ra, theta_deg);
    c.r_a.push_back(ra);
    c.p0_gate.push_back(s.p0);
    c.n_gate.push_back(s.n_mean);
  }
  auto cross = [&](const std::vector<double>& y, double base_v) -> std::optional<double> {
    for (std::size_t i = 0; i + 1 < y.size(); ++i) {
      const double f0 = y[i] - base_v, f1 = y[i + 1] - base_v;
      if (f0 == 0.0) return c.r_a[i];
      if ((f0 > 0.0) != (f1 > 0.0)) return c.r_a[i] + (c.r_a[i + 1] - c.r_a[i]) * f0 / (f0 - f1);
    }
    return std::nullopt;
  };
  c.p0_cross = cross(c.p0_gate, c.p0_base);
  c.n_cross = cross(c.n_gate, c.n_base);
  return c;
}

std::vector<double> accepted_alpha_c(const std::vector<CatTrialResult>& r) {
  std::vector<double> out;
  for (const auto& t : r)
    if (t.fit.accepted) out.push_back(t.fit.alpha_c);
  return out;
}

MeanSem mean_sem(const std::vector<double>& v) {
  MeanSem m;
  if (v.empty()) return m;
  double s = 0.0;
  for (double x : v) s += x;
  m.mean = s / static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - m.mean) * (x - m.mean);
    m.sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
    m.sem = m.sd / std::sqrt(static_cast<double>(v.size()));
  }
  return m;
}

}  // namespace gkp
