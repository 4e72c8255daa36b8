#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "gkp/error.hpp"
#include "gkp/measurement.hpp"
#include "gkp/teleport.hpp"

using namespace gkp;

namespace {

constexpr double kPi = std::numbers::pi;

CVector coherent(cplx alpha, int d) {
  CVector v(d);
  for (int n = 0; n < d; ++n) v(n) = std::exp(-0.5 * std::norm(alpha) - 0.5 * std::lgamma(n + 1.0)) * std::pow(alpha, n);
  return v;
}

}  // namespace

TEST(Wavefunction, ValuesAndNormalization) {
  EXPECT_NEAR(quadrature_wavefunction(0, 0.0), std::pow(kPi, -0.25), 1e-15);
  EXPECT_NEAR(quadrature_wavefunction(0, 0.0), 0.751126, 1e-6);
  EXPECT_EQ(quadrature_wavefunction(1, 0.0), 0.0);
  // trapezoid integral of psi_n^2 on [-14, 14]
  for (int n : {0, 1, 7, 30, 59}) {
    const int m = 6000;
    const double h = 28.0 / m;
    double s = 0.0;
    for (int i = 0; i <= m; ++i) {
      const double x = -14.0 + i * h;
      const double v = quadrature_wavefunction(n, x);
      s += (i == 0 || i == m ? 0.5 : 1.0) * v * v;
    }
    EXPECT_NEAR(s * h, 1.0, 1e-9) << "n = " << n;
  }
  const Eigen::VectorXd all = quadrature_wavefunctions(60, 1.3);
  for (int n : {0, 5, 59}) EXPECT_NEAR(all(n), quadrature_wavefunction(n, 1.3), 1e-14);
}

TEST(Homodyne, ProductStateFactorizes) {
  const FockState in = FockState::product(FockState::vacuum(10), FockState::vacuum(10));
  const HomodyneResult r = homodyne_project(in, 0, kPi / 2.0, 0.0);
  EXPECT_NEAR(fidelity(r.post_state, FockState::vacuum(10)), 1.0, 1e-14);
  EXPECT_NEAR(r.post_state.norm(), 1.0, 1e-12);
  EXPECT_NEAR(r.density, 1.0 / std::sqrt(kPi), 1e-12);
}

TEST(Homodyne, NodeOfFirstExcitedState) {
  const FockState in = FockState::product(FockState::number(1, 6), FockState::vacuum(6));
  try {
    homodyne_project(in, 0, 0.0, 0.0);
    FAIL() << "expected a zero-probability branch";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ZeroProbability);
  }
}

TEST(Homodyne, TwoModeSqueezedConditional) {
  // TMSV with parameter s: the q-quadratures have variance cosh(2s)/2 and
  // covariance sinh(2s)/2, so q_2 | q_1 = 0 has variance 1/(2 cosh 2s).
  const int d = 60;
  const double s = 0.6;
  CMatrix psi = CMatrix::Zero(d, d);
  for (int n = 0; n < d; ++n) psi(n, n) = std::pow(std::tanh(s), n) / std::cosh(s);
  const HomodyneResult r = homodyne_project(FockState::two_mode(psi), 0, 0.0, 0.0);
  EXPECT_NEAR(quadrature_variance(r.post_state, 'q'), 1.0 / (2.0 * std::cosh(2.0 * s)), 1e-8);
  EXPECT_NEAR(r.post_state.norm(), 1.0, 1e-12);
  const HomodyneResult off = homodyne_project(FockState::two_mode(psi), 1, 0.3, 0.7);
  EXPECT_NEAR(off.post_state.norm(), 1.0, 1e-12);
}

TEST(Kraus, CompletenessForScheduleAngles) {
  const int d = 40, h = d / 2;
  for (double theta : schedule_angles(18.0, 0.75, 0.35, 8)) {
    const KrausFamily k = KrausFamily::from_angle_degrees(theta, d);
    CMatrix sum = CMatrix::Zero(d, d);
    for (int n = 0; n < d; ++n) {
      const CMatrix o = k.op(n);
      sum += o.adjoint() * o;
    }
    EXPECT_LE((sum - CMatrix::Identity(d, d)).topLeftCorner(h, h).cwiseAbs().maxCoeff(), 1e-10) << theta;
  }
  EXPECT_THROW(KrausFamily(0.0, 10), Error);
}

TEST(Kraus, CoherentStateIsPoisson) {
  const int d = 40;
  const KrausFamily k = KrausFamily::from_angle_degrees(18.0, d);
  const double t = std::cos(18.0 * kPi / 180.0);
  EXPECT_NEAR(k.transmittance(), t, 1e-15);
  EXPECT_NEAR(k.beta(), 0.050182, 1e-6);
  const Eigen::VectorXd p = k.probabilities(FockState::single(coherent(1.0, d)));
  const double mean = 1.0 - t * t;
  EXPECT_NEAR(mean, 0.09549, 1e-5);
  EXPECT_NEAR(p(0), std::exp(-mean), 1e-6);
  EXPECT_NEAR(p(0), 0.90893, 1e-5);
  EXPECT_NEAR(p(2), std::exp(-mean) * mean * mean / 2.0, 1e-9);
  EXPECT_NEAR(p.sum(), 1.0, 1e-12);
}

TEST(Kraus, ProbabilitiesMatchExplicitOperators) {
  const int d = 25;
  const FockState s = make_cat(1.5, 0.2, Parity::Even, d);
  const KrausFamily k(0.2, d);
  const Eigen::VectorXd p = k.probabilities(s);
  for (int n = 0; n < 6; ++n) EXPECT_NEAR(p(n), (k.op(n) * s.vector()).squaredNorm(), 1e-13);
  EXPECT_NEAR(k.apply(3, s).vector().norm(), (k.op(3) * s.vector()).norm(), 1e-13);
}

TEST(Subtraction, VacuumNeverClicks) {
  Rng rng = seed_plan(1, Stage::Test, 0);
  for (int i = 0; i < 20; ++i) {
    const SubtractionOutcome o = sample_subtraction(FockState::vacuum(12), 0, 30.0, rng);
    EXPECT_EQ(o.n, 0);
    EXPECT_NEAR(o.probability, 1.0, 1e-14);
  }
}

TEST(Subtraction, ParityFlipsWithOddCounts) {
  const FockState cat = make_cat(2.0, 0.0, Parity::Even, 40);
  Rng rng = seed_plan(2, Stage::Test, 0);
  int odd_seen = 0;
  for (int i = 0; i < 200; ++i) {
    const SubtractionOutcome o = sample_subtraction(cat, 0, 40.0, rng);
    EXPECT_NEAR(o.post_state.norm(), 1.0, 1e-12);
    EXPECT_NEAR(parity(o.post_state), o.n % 2 ? -1.0 : 1.0, 1e-9);
    odd_seen += o.n % 2;
  }
  EXPECT_GT(odd_seen, 0);
}

TEST(Subtraction, HistogramMatchesDistribution) {
  const int d = 30;
  const FockState s = FockState::single(coherent(cplx(1.5, 0.4), d)).normalized();
  const double theta = 35.0;
  const Eigen::VectorXd p = KrausFamily::from_angle_degrees(theta, d).probabilities(s);
  std::vector<int> counts(d, 0);
  Rng rng = seed_plan(3, Stage::Test, 0);
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) ++counts[sample_subtraction(s, 0, theta, rng).n];
  for (int n = 0; n < 5; ++n) {
    const double sd = std::sqrt(draws * p(n) * (1.0 - p(n)));
    EXPECT_NEAR(counts[n], draws * p(n), 3.0 * sd + 1.0) << "n = " << n;
  }
}

TEST(Subtraction, GaussianNoClickBranchStaysGaussian) {
  // N(beta) on a squeezed vacuum: amplitudes c_{2k} t^{2k} again form a
  // squeezed vacuum with tanh r' = t^2 tanh r.
  const int d = 60;
  const double r = 0.7, theta = 25.0;
  const double t = std::cos(theta * kPi / 180.0);
  const KrausFamily k = KrausFamily::from_angle_degrees(theta, d);
  const FockState out = k.apply(0, make_squeezed_vacuum(r, 0.0, d)).normalized();
  const double r2 = std::atanh(t * t * std::tanh(r));
  EXPECT_GE(fidelity(out, make_squeezed_vacuum(r2, 0.0, d)), 1.0 - 1e-8);
}
