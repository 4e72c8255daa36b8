// gkpsim: command-line driver for the cat, GKP and RHG experiments.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "gkp/error.hpp"
#include "gkp/harness/config.hpp"
#include "gkp/harness/csv.hpp"
#include "gkp/harness/experiments.hpp"
#include "gkp/harness/manifest.hpp"
#include "gkp/qec/memory.hpp"

extern char** environ;

namespace {

using namespace gkp;
namespace fs = std::filesystem;

constexpr int kExitFlagBudget = 3;
constexpr int kExitConfig = 2;

struct Run {
  Config cfg;
  std::string out_dir;
  int threads = 1;
  std::uint64_t seed = 0;
  RunManifest manifest;

  std::string path(const std::string& name) {
    const std::string p = (fs::path(out_dir) / name).string();
    manifest.outputs[name] = p;
    return p;
  }

  void add_flags(const FlagCounters& f) {
    manifest.flags.truncation += f.truncation;
    manifest.flags.saturation += f.saturation;
    manifest.flags.retries += f.retries;
    manifest.flags.rejected_fits += f.rejected_fits;
    manifest.flags.flagged_trials += f.flagged_trials;
    manifest.flags.trials += f.trials;
  }
};

std::string num(double v) { return format_double(v); }

void cmd_phantm(Run& run) {
  const PhantmConfig p = phantm_config(run.cfg);
  const auto res = run_cat_trials(p, run.cfg.integer("phantm.trials"), run.seed, run.threads);
  persist_samples(run.path("cat_runs.csv"), Schema::CatRuns, cat_rows(res));
  persist_samples(run.path("photon_hist.csv"), Schema::PhotonHist, photon_hist_rows(res));
  run.add_flags(count_flags(res));
  const std::vector<double> ac = accepted_alpha_c(res);
  const MeanSem m = mean_sem(ac);
  std::printf("r = %.3f dB  trials = %zu  mean alpha_c = %.4f (sem %.4f) over %zu accepted fits\n", p.r.db(),
              res.size(), m.mean, m.sem, ac.size());
}

void print_gkp_summary(double r_db, const std::vector<GkpTrial>& res) {
  std::vector<double> dq, dp, sum;
  for (const auto& t : res) {
    dq.push_back(t.sample.dq_db);
    dp.push_back(t.sample.dp_db);
    sum.push_back(t.sample.dq_db + t.sample.dp_db);
  }
  const MeanSem a = mean_sem(dq), b = mean_sem(dp), s = mean_sem(sum);
  std::printf("r = %.3f dB  trials = %zu  dq = %.3f (sd %.3f)  dp = %.3f (sd %.3f)  sum = %.3f dB\n", r_db,
              res.size(), a.mean, a.sd, b.mean, b.sd, s.mean);
}

void cmd_breed(Run& run) {
  const double r_db = run.cfg.num("phantm.r_db");
  const auto res = run_gkp_trials(phantm_config(run.cfg, r_db), breed_config(run.cfg, r_db),
                                  run.cfg.integer("breed.trials"), run.seed, run.threads);
  persist_samples(run.path("gkp_samples.csv"), Schema::GkpSamples, gkp_rows(res, r_db));
  Table inputs;
  inputs.columns = {"trial", "lane", "alpha", "r_prime", "parity", "fidelity", "alpha_c", "accepted"};
  for (std::size_t i = 0; i < res.size(); ++i)
    for (std::size_t k = 0; k < res[i].fits.size(); ++k) {
      const CatFit& f = res[i].fits[k];
      inputs.rows.push_back({std::to_string(i), std::to_string(k), num(f.alpha), num(f.r_prime),
                             f.parity == Parity::Even ? "even" : "odd", num(f.fidelity), num(f.alpha_c),
                             f.accepted ? "1" : "0"});
    }
  write_table(run.path("breed_inputs.csv"), inputs);
  run.add_flags(count_flags(res));
  print_gkp_summary(r_db, res);
}

// GKP samples over the r grid; one gkp_samples file per r.
std::map<double, std::vector<GkpTrial>> gkp_over_grid(Run& run, const std::string& trials_key) {
  std::map<double, std::vector<GkpTrial>> out;
  for (double r : run.cfg.list("qec.r_grid")) {
    auto res = run_gkp_trials(phantm_config(run.cfg, r), breed_config(run.cfg, r), run.cfg.integer(trials_key),
                              run.seed, run.threads);
    char name[64];
    std::snprintf(name, sizeof name, "gkp_samples_r%.2f.csv", r);
    persist_samples(run.path(name), Schema::GkpSamples, gkp_rows(res, r));
    run.add_flags(count_flags(res));
    print_gkp_summary(r, res);
    out.emplace(r, std::move(res));
  }
  return out;
}

void cmd_gkp(Run& run) {
  const auto grid = gkp_over_grid(run, "breed.trials");
  std::vector<std::vector<double>> rows;
  for (const auto& [r, res] : grid) {
    std::vector<double> dq, dp;
    for (const auto& t : res) {
      dq.push_back(t.sample.dq_db);
      dp.push_back(t.sample.dp_db);
    }
    const MeanSem a = mean_sem(dq), b = mean_sem(dp);
    rows.push_back({r, a.mean, a.sd, b.mean, b.sd, a.mean + b.mean});
  }
  write_plot(run.path("fig4.csv"), {"r_db", "mean_dq_db", "sd_dq_db", "mean_dp_db", "sd_dp_db", "mean_sum_db"},
             rows);
}

std::vector<int> distances(const Config& c) {
  std::vector<int> ds;
  for (double d : c.list("qec.distances")) ds.push_back(static_cast<int>(d));
  return ds;
}

void cmd_qec_rate(Run& run) {
  const std::string src = run.cfg.str("qec.source");
  qec::NoiseModel model;
  double x = 0.0, sigma = 0.0;
  if (src == "empirical") {
    const std::string path = run.cfg.str("qec.samples");
    if (path.empty()) throw Error(ErrorKind::Config, "qec.samples must name a gkp_samples file for source=empirical");
    const Table t = load_samples(path, Schema::GkpSamples);
    model = qec::NoiseModel::empirical(gkp_pairs(t));
    x = t.rows.empty() ? 0.0 : t.num(0, "r_db");
  } else if (src == "gaussian") {
    model = qec::NoiseModel::gaussian(run.cfg.num("qec.mu_q_db"), run.cfg.num("qec.mu_p_db"),
                                      run.cfg.num("qec.sigma_db"));
    x = 0.5 * (model.mu_q_db + model.mu_p_db);
    sigma = model.sigma_db;
  } else {
    throw Error(ErrorKind::Config, "qec.source must be 'empirical' or 'gaussian'");
  }
  std::vector<std::vector<std::string>> rows;
  for (int d : distances(run.cfg)) {
    const qec::RateResult r = qec::logical_rate(d, model, run.cfg.integer("qec.trials"), run.seed, run.threads);
    rows.push_back(qec_row(src, x, sigma, d, r, run.seed));
    std::printf("d = %d  rate = %.5f  [%.5f, %.5f]  (%lld/%lld)\n", d, r.rate, r.ci.low, r.ci.high,
                static_cast<long long>(r.failures), static_cast<long long>(r.trials));
  }
  persist_samples(run.path("qec_rates.csv"), Schema::QecRates, rows);
}

void report_threshold(Run& run, const std::vector<qec::RatePoint>& pts) {
  const qec::ThresholdResult th =
      qec::threshold_estimate(pts, static_cast<int>(run.cfg.integer("qec.bootstrap")), run.seed);
  Table t;
  t.columns = {"r_th_db", "ci_low", "ci_high", "bootstrap_valid", "bootstrap_total"};
  const double nan = std::numeric_limits<double>::quiet_NaN();
  t.rows.push_back({num(th.r_th.value_or(nan)), num(th.ci ? th.ci->low : nan), num(th.ci ? th.ci->high : nan),
                    std::to_string(th.bootstrap_valid), std::to_string(th.bootstrap_total)});
  write_table(run.path("threshold.csv"), t);
  if (th.r_th)
    std::printf("threshold = %.4f dB  CI = [%.4f, %.4f]\n", *th.r_th, th.ci ? th.ci->low : nan,
                th.ci ? th.ci->high : nan);
  else
    std::printf("no threshold: rate curves do not cross in the scanned range\n");
}

std::vector<qec::RatePoint> points_from_rates(const Table& t) {
  std::vector<qec::RatePoint> pts;
  for (std::size_t i = 0; i < t.rows.size(); ++i)
    pts.push_back({t.num(i, "r_db_or_mu"), static_cast<int>(t.num(i, "distance")),
                   static_cast<std::int64_t>(t.num(i, "trials")), static_cast<std::int64_t>(t.num(i, "failures"))});
  return pts;
}

void threshold_pipeline(Run& run, const std::string& rates_name) {
  const auto grid = gkp_over_grid(run, "qec.gkp_trials");
  std::vector<std::vector<std::string>> rows;
  std::vector<qec::RatePoint> pts;
  std::uint32_t salt = 0;
  for (const auto& [r, res] : grid) {
    std::vector<std::pair<double, double>> pairs;
    for (const auto& t : res) pairs.emplace_back(t.sample.dq_db, t.sample.dp_db);
    const qec::NoiseModel model = qec::NoiseModel::empirical(pairs);
    ++salt;
    for (int d : distances(run.cfg)) {
      const qec::RateResult rr =
          qec::logical_rate(d, model, run.cfg.integer("qec.trials"), run.seed, run.threads, salt);
      rows.push_back(qec_row("empirical", r, 0.0, d, rr, run.seed));
      pts.push_back({r, d, rr.trials, rr.failures});
      std::printf("r = %.3f dB  d = %d  rate = %.5f\n", r, d, rr.rate);
    }
  }
  persist_samples(run.path(rates_name), Schema::QecRates, rows);
  report_threshold(run, pts);
}

void cmd_threshold(Run& run, const std::string& rates_file) {
  if (!rates_file.empty()) {
    report_threshold(run, points_from_rates(load_samples(rates_file, Schema::QecRates)));
    return;
  }
  threshold_pipeline(run, "qec_rates.csv");
}

void cmd_sweep(Run& run, const std::string& name) {
  qec::SweepSpec spec;
  spec.mu_q_db = run.cfg.list("sweep.mu_q_db");
  spec.mu_p_db = run.cfg.list("sweep.mu_p_db");
  spec.sigma_db = run.cfg.list("sweep.sigma_db");
  const auto ds = distances(run.cfg);
  if (ds.size() < 2) throw Error(ErrorKind::Config, "qec.distances needs two entries for a sweep");
  spec.d_small = ds.front();
  spec.d_large = ds.back();
  spec.trials = run.cfg.integer("sweep.trials");
  spec.master_seed = run.seed;
  spec.threads = run.threads;
  const auto curves = qec::gaussian_boundary_sweep(spec);
  std::vector<std::vector<double>> rows;
  for (const auto& c : curves)
    for (std::size_t i = 0; i < c.mu_p_db.size(); ++i)
      rows.push_back({c.sigma_db, c.mu_p_db[i], c.mu_q_db[i].value_or(std::numeric_limits<double>::quiet_NaN())});
  write_plot(run.path(name), {"sigma_db", "mu_p_db", "mu_q_boundary_db"}, rows);
  for (const auto& r : rows) std::printf("sigma %.2f  mu_p %.2f  boundary mu_q %.3f\n", r[0], r[1], r[2]);
}

void fig_2d(Run& run) {
  const Config& c = run.cfg;
  const Crossover x = antisqueeze_crossover(
      c.num("fig2d.alpha"), c.num("fig2d.r_prime"), SqueezingValue::from_db(c.num("fig2d.r_db")),
      phantm_config(c).noise_argument, c.num("fig2d.theta"), c.num("fig2d.ra_max"),
      static_cast<int>(c.integer("fig2d.points")), static_cast<int>(c.integer("fig2d.cutoff")));
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < x.r_a.size(); ++i)
    rows.push_back({x.r_a[i], x.p0_gate[i], x.n_gate[i], x.p0_base, x.n_base});
  write_plot(run.path("fig2d.csv"), {"r_a", "p0_gate", "n_mean_gate", "p0_baseline", "n_mean_baseline"}, rows);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::printf("P0 crossover r_a = %.4f  n crossover r_a = %.4f\n", x.p0_cross.value_or(nan), x.n_cross.value_or(nan));
}

void fig_3b(Run& run) {
  std::vector<std::vector<double>> rows;
  std::vector<std::string> labels;
  for (double r : run.cfg.list("fig3b.r_grid"))
    for (bool gate : {true, false}) {
      PhantmConfig p = phantm_config(run.cfg, r);
      p.antisqueeze_enabled = gate;
      const auto res = run_cat_trials(p, run.cfg.integer("phantm.trials"), run.seed, run.threads);
      run.add_flags(count_flags(res));
      const MeanSem m = mean_sem(accepted_alpha_c(res));
      rows.push_back({r, m.mean, m.sem});
      labels.push_back(gate ? "antisqueeze" : "baseline");
      std::printf("r = %.2f  %-11s  mean alpha_c = %.4f (sem %.4f)\n", r, labels.back().c_str(), m.mean, m.sem);
    }
  write_plot(run.path("fig3b.csv"), {"r_db", "mean_alpha_c", "sem", "variant"}, rows, labels);
}

void fig_9(Run& run) {
  const PhantmConfig p = phantm_config(run.cfg, run.cfg.num("fig9.r_db"));
  const auto res = run_cat_trials(p, run.cfg.integer("phantm.trials"), run.seed, run.threads);
  run.add_flags(count_flags(res));
  persist_samples(run.path("fig9_photon_hist.csv"), Schema::PhotonHist, photon_hist_rows(res));
}

void fig_10(Run& run) {
  const double r = run.cfg.num("fig10.r_db");
  const auto res = run_gkp_trials(phantm_config(run.cfg, r), breed_config(run.cfg, r),
                                  run.cfg.integer("breed.trials"), run.seed, run.threads);
  run.add_flags(count_flags(res));
  persist_samples(run.path("fig10_gkp_samples.csv"), Schema::GkpSamples, gkp_rows(res, r));
  print_gkp_summary(r, res);
}

void dispatch(Run& run, const std::string& command, const std::string& figure, const std::string& rates_file,
              const std::string& stats_file) {
  if (command == "phantm") cmd_phantm(run);
  else if (command == "breed") cmd_breed(run);
  else if (command == "gkp") cmd_gkp(run);
  else if (command == "qec-rate") cmd_qec_rate(run);
  else if (command == "threshold") cmd_threshold(run, rates_file);
  else if (command == "sweep") cmd_sweep(run, "boundary.csv");
  else if (command == "stats") {
    const Table t = read_table(stats_file);
    std::printf("%s: %zu rows\n", stats_file.c_str(), t.rows.size());
    for (const auto& col : t.columns) {
      std::vector<double> v;
      bool numeric = true;
      for (std::size_t i = 0; i < t.rows.size() && numeric; ++i) {
        try {
          v.push_back(t.num(i, col));
        } catch (const Error&) {
          numeric = false;
        }
      }
      if (!numeric || v.empty()) continue;
      const MeanSem m = mean_sem(v);
      std::printf("  %-16s mean %-12.6g sd %-12.6g sem %.6g\n", col.c_str(), m.mean, m.sd, m.sem);
    }
  } else if (command == "reproduce-figure") {
    if (figure == "2d") fig_2d(run);
    else if (figure == "3b") fig_3b(run);
    else if (figure == "4") cmd_gkp(run);
    else if (figure == "5") threshold_pipeline(run, "fig5_qec_rates.csv");
    else if (figure == "6") cmd_sweep(run, "fig6_boundaries.csv");
    else if (figure == "9") fig_9(run);
    else if (figure == "10") fig_10(run);
    else throw Error(ErrorKind::Config, "unknown figure '" + figure + "' (2d, 3b, 4, 5, 6, 9, 10)");
  } else {
    throw Error(ErrorKind::Config, "unknown command " + command);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GKP state generation and RHG threshold simulator"};
  app.require_subcommand(1);

  std::string config_path, out_dir, figure, rates_file, stats_file, manifest_path;
  std::vector<std::string> overrides;
  int threads = 0;
  long long seed = -1;

  auto common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", config_path, "key = value config file")->check(CLI::ExistingFile);
    sub->add_option("-s,--set", overrides, "override, e.g. --set phantm.r_db=12");
    sub->add_option("-o,--out", out_dir, "output directory (run.out_dir)");
    sub->add_option("-j,--threads", threads, "worker threads (run.threads)");
    sub->add_option("--seed", seed, "master seed (run.seed)");
  };

  std::map<std::string, CLI::App*> subs;
  for (const char* name : {"phantm", "breed", "gkp", "qec-rate", "sweep"}) {
    subs[name] = app.add_subcommand(name);
    common(subs[name]);
  }
  subs["phantm"]->description("PhANTM cat generation: cat_runs.csv and photon_hist.csv");
  subs["breed"]->description("Full cat-to-GKP pipeline at phantm.r_db: gkp_samples.csv");
  subs["gkp"]->description("GKP effective squeezing over qec.r_grid");
  subs["qec-rate"]->description("Logical error rates for qec.distances");
  subs["sweep"]->description("Gaussian-sigma correctability boundaries");

  CLI::App* thr = app.add_subcommand("threshold", "Threshold from a qec_rates file or the full pipeline");
  common(thr);
  thr->add_option("--rates", rates_file, "existing qec_rates CSV")->check(CLI::ExistingFile);
  subs["threshold"] = thr;

  CLI::App* fig = app.add_subcommand("reproduce-figure", "Emit plot data for one figure");
  common(fig);
  fig->add_option("figure", figure, "2d, 3b, 4, 5, 6, 9 or 10")->required();
  subs["reproduce-figure"] = fig;

  CLI::App* stats = app.add_subcommand("stats", "Summarize the numeric columns of a CSV");
  stats->add_option("file", stats_file)->required()->check(CLI::ExistingFile);
  subs["stats"] = stats;

  CLI::App* replay = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  replay->add_option("manifest", manifest_path)->required()->check(CLI::ExistingFile);
  replay->add_option("-o,--out", out_dir, "output directory");
  replay->add_option("-j,--threads", threads, "worker threads");

  CLI11_PARSE(app, argc, argv);

  try {
    Run run;
    std::string command, arg;
    if (replay->parsed()) {
      const RunManifest m = read_manifest(manifest_path);
      run.cfg = Config::from_text(m.config);
      std::istringstream cs(m.command);
      cs >> command >> arg;
      if (command == "reproduce-figure") figure = arg;
    } else {
      for (const auto& [name, sub] : subs)
        if (sub->parsed()) command = name;
      if (!config_path.empty()) run.cfg = Config::from_file(config_path);
      run.cfg.apply_env(environ);
      run.cfg.apply_overrides(overrides);
    }
    if (!out_dir.empty()) run.cfg.set("run.out_dir", out_dir);
    if (threads > 0) run.cfg.set("run.threads", std::to_string(threads));
    if (seed >= 0) run.cfg.set("run.seed", std::to_string(seed));

    run.out_dir = run.cfg.str("run.out_dir");
    run.threads = static_cast<int>(run.cfg.integer("run.threads"));
    run.seed = static_cast<std::uint64_t>(run.cfg.integer("run.seed"));
    run.manifest.command = command == "reproduce-figure" ? command + " " + figure : command;
    run.manifest.config = run.cfg.canonical();
    run.manifest.master_seed = run.seed;

    dispatch(run, command, figure, rates_file, stats_file);
    if (command == "stats") return 0;

    write_manifest((fs::path(run.out_dir) / "manifest.json").string(), run.manifest);
    const FlagCounters& f = run.manifest.flags;
    std::printf("manifest %s  flagged trials %lld/%lld\n", run.manifest.hash().c_str(),
                static_cast<long long>(f.flagged_trials), static_cast<long long>(f.trials));
    if (f.trials > 0 &&
        static_cast<double>(f.flagged_trials) > run.cfg.num("run.flag_budget") * static_cast<double>(f.trials)) {
      std::fprintf(stderr, "numerical flag budget exceeded: %lld of %lld trials flagged (run.flag_budget = %s)\n",
                   static_cast<long long>(f.flagged_trials), static_cast<long long>(f.trials),
                   run.cfg.str("run.flag_budget").c_str());
      return kExitFlagBudget;
    }
    return 0;
  } catch (const Error& e) {
    std::fprintf(stderr, "gkpsim: %s\n", e.what());
    return e.kind() == ErrorKind::Config ? kExitConfig : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "gkpsim: %s\n", e.what());
    return 1;
  }
}
