#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <complex>

#include "gkp/catfit.hpp"

using namespace gkp;

TEST(CatFit, RecoversExactCat) {
  const CatFit f = fit_squeezed_cat(make_cat(3.0, 0.2, Parity::Even, 60));
  EXPECT_EQ(f.parity, Parity::Even);
  EXPECT_NEAR(f.alpha, 3.0, 0.02);
  EXPECT_NEAR(f.r_prime, 0.2, 0.02);
  EXPECT_GE(f.fidelity, 0.9999);
  EXPECT_TRUE(f.accepted);
}

TEST(CatFit, RecoversOddCat) {
  const CatFit f = fit_squeezed_cat(make_cat(2.2, -0.3, Parity::Odd, 60));
  EXPECT_EQ(f.parity, Parity::Odd);
  EXPECT_NEAR(f.alpha, 2.2, 0.02);
  EXPECT_NEAR(f.r_prime, -0.3, 0.02);
  EXPECT_GE(f.fidelity, 0.9999);
}

TEST(CatFit, VacuumIsTheDegenerateCat) {
  const CatFit f = fit_squeezed_cat(FockState::vacuum(40));
  EXPECT_EQ(f.parity, Parity::Even);
  EXPECT_LT(f.alpha, 0.2);
  EXPECT_GE(f.fidelity, 0.999);
  const FockState ref = FockState::single(cat_amplitudes(f.alpha, f.r_prime, Parity::Even, 40));
  EXPECT_NEAR(fidelity(ref, FockState::vacuum(40)), f.fidelity, 1e-9);
}

TEST(CatFit, GlobalPhaseInvariance) {
  const FockState cat = make_cat(2.5, 0.4, Parity::Even, 60);
  const FockState rotated = FockState::single(std::polar(1.0, 1.234) * cat.vector());
  const CatFit a = fit_squeezed_cat(cat), b = fit_squeezed_cat(rotated);
  EXPECT_NEAR(a.fidelity, b.fidelity, 1e-12);
  EXPECT_NEAR(a.alpha, b.alpha, 1e-9);
}

TEST(CatFit, AlphaCIsBitExact) {
  const CatFit f = fit_squeezed_cat(make_cat(3.3, 0.35, Parity::Odd, 60));
  EXPECT_EQ(f.alpha_c, corrected_amplitude(f.alpha, f.r_prime));
  EXPECT_NEAR(f.alpha_c, f.alpha * std::exp(f.r_prime), 1e-12);
}

TEST(CatFit, ParityFollowsExpectationSign) {
  // mixtures of even and odd cats with a clear parity bias
  for (double w : {0.2, 0.35, 0.65, 0.8}) {
    const CVector v = std::sqrt(w) * make_cat(2.0, 0.1, Parity::Even, 50).vector() +
                      std::sqrt(1.0 - w) * make_cat(2.0, 0.1, Parity::Odd, 50).vector();
    const FockState s = FockState::single(v).normalized();
    const double p = parity(s);
    ASSERT_GT(std::abs(p), 0.1);
    EXPECT_EQ(fit_squeezed_cat(s).parity, p > 0 ? Parity::Even : Parity::Odd);
  }
}

TEST(CatFit, RefinementBeatsGrid) {
  const CVector v = make_cat(2.7, 0.25, Parity::Even, 50).vector() + 0.3 * FockState::number(4, 50).vector();
  const FockState s = FockState::single(v).normalized();
  CatFitSearch search;
  search.alpha_points = 12;
  search.r_points = 9;
  double grid_best = 0.0;
  for (int i = 0; i < search.alpha_points; ++i)
    for (int j = 0; j < search.r_points; ++j) {
      const double a = search.alpha_max * i / (search.alpha_points - 1);
      const double r = search.r_min + (search.r_max - search.r_min) * j / (search.r_points - 1);
      grid_best = std::max(grid_best, std::norm(cat_amplitudes(a, r, Parity::Even, 50).dot(s.vector())));
    }
  const CatFit f = fit_squeezed_cat(s, search);
  EXPECT_GE(f.fidelity, grid_best);
  EXPECT_EQ(f.accepted, f.fidelity >= kFitAcceptance);
}

TEST(CatFit, Deterministic) {
  const FockState s = make_cat(1.7, 0.6, Parity::Odd, 50);
  const CatFit a = fit_squeezed_cat(s), b = fit_squeezed_cat(s);
  EXPECT_EQ(a.alpha, b.alpha);
  EXPECT_EQ(a.r_prime, b.r_prime);
  EXPECT_EQ(a.fidelity, b.fidelity);
}

TEST(CatFit, RejectsBadSearchBox) {
  CatFitSearch bad;
  bad.r_max = bad.r_min;
  EXPECT_THROW(fit_squeezed_cat(FockState::vacuum(10), bad), Error);
}
