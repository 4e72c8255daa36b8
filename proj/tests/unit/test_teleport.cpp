#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gkp/catfit.hpp"
#include "gkp/error.hpp"
#include "gkp/measurement.hpp"
#include "gkp/teleport.hpp"

using namespace gkp;

TEST(NoiseChannel, VanishesAtLargeSqueezing) {
  const FockState cat = make_cat(2.0, 0.3, Parity::Even, 50);
  double prev = 0.0;
  for (double db : {10.0, 15.0, 20.0, 25.0, 30.0}) {
    const double f = fidelity(noise_channel(cat, SqueezingValue::from_db(db)), cat);
    EXPECT_GT(f, prev) << db;
    prev = f;
  }
  EXPECT_GE(fidelity(noise_channel(cat, SqueezingValue::from_db(90.0)), cat), 1.0 - 1e-9);
}

TEST(NoiseChannel, VacuumGaussianAction) {
  // exp(-k p^2/2) first turns vacuum into q-variance (1 + k)/2, k = eps/tanh^2;
  // exp(-eps q^2/2) then maps V to V / (1 + 2 eps V).
  const SqueezingValue r0 = SqueezingValue::from_nats(0.6);
  const double eps = 1.0 / std::cosh(1.2), th = std::tanh(1.2);
  const double v = 0.5 * (1.0 + eps / (th * th));
  const FockState out = noise_channel(FockState::vacuum(60), r0);
  EXPECT_NEAR(quadrature_variance(out, 'q'), v / (1.0 + 2.0 * eps * v), 1e-8);
  EXPECT_NEAR(out.norm(), 1.0, 1e-12);
}

TEST(NoiseChannel, DegenerateAtZeroSqueezing) {
  try {
    noise_channel(FockState::vacuum(10), SqueezingValue::from_nats(0.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateChannel);
  }
}

TEST(TeleportSqueeze, ZeroGateIsBareChannel) {
  const FockState cat = make_cat(2.0, 0.5, Parity::Odd, 50);
  const SqueezingValue r0 = SqueezingValue::from_db(11.5);
  EXPECT_GE(fidelity(teleport_squeeze(cat, r0, 0.0), noise_channel(cat, r0)), 1.0 - 1e-14);
}

TEST(TeleportSqueeze, AntisqueezingRaisesPhotonNumber) {
  const FockState cat = make_cat(2.0, 0.3, Parity::Even, 60);
  const SqueezingValue r0 = SqueezingValue::from_db(11.5);
  EXPECT_GT(mean_photon_number(antisqueeze_gate(cat, r0, 0.275)), mean_photon_number(teleport_squeeze(cat, r0, 0.0)));
  // the gate stretches q
  EXPECT_GT(quadrature_variance(antisqueeze_gate(cat, r0, 0.275), 'q'),
            quadrature_variance(teleport_squeeze(cat, r0, 0.0), 'q'));
}

TEST(SubtractionStatistics, VacuumAndBruteForce) {
  const SubtractionStats v = subtraction_statistics(FockState::vacuum(20), 18.0);
  EXPECT_NEAR(v.p0, 1.0, 1e-14);
  EXPECT_NEAR(v.n_mean, 0.0, 1e-14);

  const FockState cat = make_cat(3.0, 0.5, Parity::Even, 50);
  const SqueezingValue r0 = SqueezingValue::from_db(11.5);
  const SubtractionStats s = subtraction_statistics(cat, r0, 0.2, 18.0);
  const FockState gated = antisqueeze_gate(cat, r0, 0.2);
  const KrausFamily k = KrausFamily::from_angle_degrees(18.0, 50);
  double n_mean = 0.0, total = 0.0;
  for (int n = 0; n < 50; ++n) {
    const double p = (k.op(n) * gated.vector()).squaredNorm();
    n_mean += n * p;
    total += p;
  }
  EXPECT_NEAR(s.n_mean, n_mean / total, 1e-10);
  EXPECT_NEAR(s.p0, (k.op(0) * gated.vector()).squaredNorm() / total, 1e-12);
}

TEST(SubtractionStatistics, P0FallsWithGateStrength) {
  const FockState cat = make_cat(3.0, 0.5, Parity::Even, 50);
  const SqueezingValue r0 = SqueezingValue::from_db(11.5);
  double prev = 2.0;
  for (double ra = 0.1; ra <= 0.4001; ra += 0.05) {
    const double p0 = subtraction_statistics(cat, r0, ra, 18.0).p0;
    EXPECT_LT(p0, prev);
    prev = p0;
  }
}

TEST(Schedule, GradientAngles) {
  const auto th = schedule_angles(18.0, 0.75, 0.35, 8);
  ASSERT_EQ(th.size(), 8u);
  EXPECT_DOUBLE_EQ(th[0], 18.0);
  EXPECT_NEAR(th[1], 18.75, 1e-12);
  EXPECT_NEAR(th[2], 18.75 + 0.75 * std::exp(0.35), 1e-12);
  EXPECT_NEAR(th[2], 19.814, 1e-3);
  for (double t : schedule_angles(20.0, 0.0, 0.35, 5)) EXPECT_DOUBLE_EQ(t, 20.0);
  try {
    schedule_angles(80.0, 5.0, 0.5, 8);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ScheduleOverflow);
  }
}

TEST(PhantmStep, OutputParityFollowsPhotonCount) {
  const SqueezingValue r = SqueezingValue::from_db(11.5);
  const SqueezingValue r0 = channel_r0(r, NoiseArgument::Source);
  const auto angles = schedule_angles(18.0, 0.75, 0.35, 8);
  const FockState in = cluster_input_state(r, 40);
  int checked = 0;
  for (std::uint32_t t = 0; t < 40; ++t) {
    Rng rng = seed_plan(5, Stage::Test, t);
    try {
      const StepOutcome o = phantm_step(in, r, r0, angles, rng);
      int n = 0;
      for (int k : o.photons) n += k;
      EXPECT_EQ(o.photons.size(), angles.size());
      EXPECT_NEAR(parity(o.post_state), n % 2 ? -1.0 : 1.0, 1e-8) << "photons " << n;
      ++checked;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::ZeroProbability);
    }
  }
  EXPECT_GT(checked, 30);
}

TEST(PhantmStep, NoClickReturnsDampedInput) {
  const SqueezingValue r = SqueezingValue::from_db(11.5);
  const SqueezingValue r0 = channel_r0(r, NoiseArgument::Source);
  Rng rng = seed_plan(6, Stage::Test, 0);
  const StepOutcome o = phantm_step(cluster_input_state(r, 40), r, r0, {1e-3}, rng);
  ASSERT_EQ(o.photons[0], 0);
  // only the channel damping separates the output from the input
  EXPECT_GE(fidelity(o.post_state, cluster_input_state(r, 40)), 0.99);
  EXPECT_NEAR(quadrature_mean(o.post_state, 'q'), 0.0, 1e-9);
  EXPECT_NEAR(quadrature_mean(o.post_state, 'p'), 0.0, 1e-9);
}

TEST(PhantmStep, DegenerateWithoutSourceSqueezing) {
  Rng rng = seed_plan(7, Stage::Test, 0);
  const SqueezingValue r = SqueezingValue::from_db(11.5);
  EXPECT_THROW(phantm_step(cluster_input_state(r, 40), r, SqueezingValue::from_nats(0.0), {18.0}, rng), Error);
}

TEST(RunPhantm, ForcedResetsReturnFreshState) {
  PhantmConfig cfg;
  cfg.theta0 = 1e-4;
  cfg.grad_a = 0.0;
  cfg.n_steps = 3;
  cfg.cutoff = 40;
  Rng rng = seed_plan(8, Stage::Test, 0);
  const CatRunRecord rec = run_phantm(cfg, rng);
  ASSERT_EQ(rec.per_step.size(), 3u);
  for (const auto& s : rec.per_step) {
    EXPECT_TRUE(s.reset_applied);
    EXPECT_EQ(s.antisqueeze_level, 0);
  }
  EXPECT_EQ(rec.total_photons, 0);
  EXPECT_GE(fidelity(rec.final_state, cluster_input_state(cfg.r, 40)), 1.0 - 1e-14);
}

TEST(RunPhantm, Bookkeeping) {
  PhantmConfig cfg;
  cfg.r = SqueezingValue::from_db(12.0);
  for (std::uint32_t t = 0; t < 6; ++t) {
    Rng rng = seed_plan(9, Stage::Test, t);
    const CatRunRecord rec = run_phantm(cfg, rng);
    int total = 0, cumulative = 0, switches = 0, last_level = 0;
    for (const auto& s : rec.per_step) {
      int n = 0;
      for (int k : s.photons) n += k;
      if (s.reset_applied) {
        EXPECT_EQ(cumulative, 0);
      } else {
        cumulative += n;
        EXPECT_EQ(s.antisqueeze_level, cumulative >= cfg.t_ph ? 2 : 1);
        EXPECT_GE(s.antisqueeze_level, last_level);
        if (last_level == 1 && s.antisqueeze_level == 2) ++switches;
        last_level = s.antisqueeze_level;
      }
      total += n;
    }
    EXPECT_EQ(total, rec.total_photons);
    EXPECT_LE(switches, 1);
    EXPECT_NEAR(std::abs(parity(rec.final_state)), 1.0, 1e-6);
    EXPECT_GT(parity(rec.final_state) * (rec.total_photons % 2 ? -1.0 : 1.0), 0.0);
  }
}

TEST(RunPhantm, AntisqueezingShiftsPhotonCountsUp) {
  // paired seeds; one-sided Mann-Whitney U with the normal approximation
  PhantmConfig gate, base;
  base.antisqueeze_enabled = false;
  const int n = 100;
  std::vector<double> a, b;
  for (int t = 0; t < n; ++t) {
    Rng r1 = seed_plan(10, Stage::Test, t), r2 = seed_plan(10, Stage::Test, t);
    a.push_back(run_phantm(gate, r1).total_photons);
    b.push_back(run_phantm(base, r2).total_photons);
  }
  double u = 0.0;
  for (double x : a)
    for (double y : b) u += x > y ? 1.0 : (x == y ? 0.5 : 0.0);
  const double mu = n * n / 2.0, sd = std::sqrt(n * n * (2.0 * n + 1.0) / 12.0);
  EXPECT_GT((u - mu) / sd, 1.645);
}
