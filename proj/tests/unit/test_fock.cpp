#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gkp/error.hpp"
#include "gkp/fock.hpp"

using namespace gkp;

namespace {

constexpr double kPi = std::numbers::pi;

// Coherent amplitudes from the Poisson form, independent of any matrix exponential.
CVector coherent(cplx alpha, int d) {
  CVector v(d);
  for (int n = 0; n < d; ++n) {
    const double mag = std::exp(-0.5 * std::norm(alpha) - 0.5 * std::lgamma(n + 1.0));
    v(n) = mag * std::pow(alpha, n);
  }
  return v;
}

CVector random_vector(int d, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> g;
  CVector v(d);
  for (int i = 0; i < d; ++i) v(i) = cplx(g(gen), g(gen));
  return v.normalized();
}

double lower_block_deviation(const CMatrix& m, const CMatrix& target) {
  const int h = static_cast<int>(m.rows()) / 2;
  return (m.topLeftCorner(h, h) - target.topLeftCorner(h, h)).cwiseAbs().maxCoeff();
}

}  // namespace

TEST(Ladder, SmallCutoffEntries) {
  const LadderSet l = ladder_and_quadratures(3);
  EXPECT_DOUBLE_EQ(l.a.entries(0, 1).real(), 1.0);
  EXPECT_NEAR(l.a.entries(1, 2).real(), std::sqrt(2.0), 1e-15);
  EXPECT_EQ(l.a.entries(1, 0), cplx(0.0));
  EXPECT_THROW(ladder_and_quadratures(1), Error);
}

TEST(Ladder, VacuumMoments) {
  const LadderSet l = ladder_and_quadratures(10);
  const CVector v = FockState::vacuum(10).vector();
  EXPECT_NEAR(std::abs((v.adjoint() * l.q.entries * v)(0)), 0.0, 1e-15);
  EXPECT_NEAR((v.adjoint() * l.q.entries * l.q.entries * v)(0).real(), 0.5, 1e-15);
}

TEST(Ladder, CanonicalCommutator) {
  const LadderSet l = ladder_and_quadratures(40);
  const CMatrix c = l.q.entries * l.p.entries - l.p.entries * l.q.entries;
  EXPECT_LE(lower_block_deviation(c, cplx(0.0, 1.0) * CMatrix::Identity(40, 40)), 1e-8);
}

TEST(GaussianUnitary, LowerBlockUnitarity) {
  const int d = 40;
  for (const GaussianGate& g : std::vector<GaussianGate>{Displacement{cplx(0.8, 0.3)}, Squeeze{0.4, 0.7},
                                                         Rotation{1.1}}) {
    const CMatrix u = build_gaussian_unitary(g, d).entries;
    EXPECT_LE(lower_block_deviation(u.adjoint() * u, CMatrix::Identity(d, d)), 1e-8);
  }
}

TEST(GaussianUnitary, ZeroParametersAreIdentity) {
  for (const GaussianGate& g : std::vector<GaussianGate>{Displacement{0.0}, Squeeze{0.0}, Rotation{0.0}})
    EXPECT_LE((build_gaussian_unitary(g, 12).entries - CMatrix::Identity(12, 12)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(GaussianUnitary, CoherentStateFromDisplacement) {
  const int d = 40;
  const cplx alpha(1.0, 0.0);
  const CMatrix u = build_gaussian_unitary(Displacement{alpha}, d).entries;
  EXPECT_NEAR(std::abs(u(0, 0)), 0.606531, 1e-6);
  const CVector out = u.col(0);
  const CVector ref = coherent(alpha, d);
  EXPECT_LE((out.head(20) - ref.head(20)).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LE((displacement_elements(cplx(0.6, -0.2), d).col(0) - coherent(cplx(0.6, -0.2), d)).cwiseAbs().maxCoeff(),
            1e-12);
}

TEST(GaussianUnitary, SqueezedVacuumVariance) {
  const int d = 40;
  const CMatrix u = build_gaussian_unitary(Squeeze{0.5}, d).entries;
  const FockState s = FockState::single(u.col(0));
  EXPECT_NEAR(quadrature_variance(s, 'q'), std::exp(-1.0) / 2.0, 1e-8);
  EXPECT_NEAR(quadrature_variance(s, 'p'), std::exp(1.0) / 2.0, 1e-8);
  EXPECT_GE(fidelity(s, make_squeezed_vacuum(0.5, 0.0, d)), 1.0 - 1e-10);
}

TEST(GaussianUnitary, RejectsNonFinite) {
  EXPECT_THROW(build_gaussian_unitary(Squeeze{std::nan("")}, 8), Error);
  EXPECT_THROW(apply_two_mode_gate(FockState::product(FockState::vacuum(4), FockState::vacuum(4)),
                                   ControlledZ{INFINITY}),
               Error);
}

TEST(TwoModeGates, BeamSplitterOnSinglePhoton) {
  const int d = 6;
  const FockState in = FockState::product(FockState::number(1, d), FockState::vacuum(d));
  const GateResult r = apply_two_mode_gate(in, BeamSplitter{kPi / 4.0, 0.0});
  EXPECT_NEAR(std::norm(r.state.matrix()(1, 0)), 0.5, 1e-12);
  EXPECT_NEAR(std::norm(r.state.matrix()(0, 1)), 0.5, 1e-12);
}

TEST(TwoModeGates, AppliedActionMatchesDense) {
  const int d = 8;
  const CVector flat = random_vector(d * d, 11);
  CMatrix psi(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) psi(i, j) = flat(i * d + j);
  const FockState in = FockState::two_mode(psi);

  const BeamSplitter bs{0.7, 0.4};
  const CVector dense_bs = build_gaussian_unitary(bs, d).entries * in.flat();
  EXPECT_LE((apply_two_mode_gate(in, bs).state.flat() - dense_bs).cwiseAbs().maxCoeff(), 1e-8);

  const ControlledZ cz{0.9};
  const CVector dense_cz = build_gaussian_unitary(cz, d).entries * in.flat();
  EXPECT_LE((apply_two_mode_gate(in, cz).state.flat() - dense_cz).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(TwoModeGates, BeamSplitterConservesTotalNumber) {
  const int d = 20;
  CMatrix psi = CMatrix::Zero(d, d);
  const CVector a = random_vector(8, 3), b = random_vector(8, 4);
  psi.topLeftCorner(8, 8) = a * b.transpose();
  const FockState in = FockState::two_mode(psi);
  auto total = [d](const FockState& s) {
    double n = 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) n += (i + j) * std::norm(s.matrix()(i, j));
    return n;
  };
  EXPECT_NEAR(total(apply_two_mode_gate(in, BeamSplitter{0.3, 1.2}).state), total(in), 1e-10);
}

TEST(TwoModeGates, ZeroWeightControlledZ) {
  const FockState in = FockState::product(FockState::single(random_vector(10, 5)), FockState::vacuum(10));
  EXPECT_EQ((apply_two_mode_gate(in, ControlledZ{0.0}).state.flat() - in.flat()).norm(), 0.0);
}

TEST(Wigner, VacuumAndSinglePhoton) {
  const FockState vac = FockState::vacuum(20);
  EXPECT_NEAR(wigner_at(vac, 0.0, 0.0), 1.0 / kPi, 1e-12);
  EXPECT_NEAR(wigner_at(vac, 0.7, -1.1), std::exp(-0.49 - 1.21) / kPi, 1e-12);
  EXPECT_NEAR(wigner_at(FockState::number(1, 20), 0.0, 0.0), -1.0 / kPi, 1e-12);
}

TEST(Wigner, CoherentStateIsShiftedGaussian) {
  const cplx alpha(1.2, -0.5);
  const FockState s = FockState::single(coherent(alpha, 40)).normalized();
  const double q0 = std::sqrt(2.0) * alpha.real(), p0 = std::sqrt(2.0) * alpha.imag();
  for (auto [q, p] : {std::pair{0.3, 0.1}, std::pair{q0, p0}, std::pair{-1.0, 1.0}})
    EXPECT_NEAR(wigner_at(s, q, p), std::exp(-(q - q0) * (q - q0) - (p - p0) * (p - p0)) / kPi, 1e-10);
}

TEST(Wigner, RiemannNormalization) {
  const FockState s = FockState::single(random_vector(20, 9));
  const WignerMap w = wigner_map(s, PhaseSpaceGrid{});
  EXPECT_NEAR(w.integral, 1.0, 1e-3);
  EXPECT_FALSE(w.coverage_warning);
  PhaseSpaceGrid small{-1.0, 1.0, 21, -1.0, 1.0, 21};
  EXPECT_TRUE(wigner_map(s, small).coverage_warning);
}

TEST(Metrics, BasicIdentities) {
  const FockState s = FockState::single(random_vector(15, 2));
  EXPECT_NEAR(fidelity(s, s), 1.0, 1e-14);
  EXPECT_DOUBLE_EQ(parity(FockState::number(1, 5)), -1.0);
  EXPECT_DOUBLE_EQ(parity(FockState::vacuum(5)), 1.0);
  EXPECT_THROW(fidelity(FockState::vacuum(5), FockState::vacuum(6)), Error);
}

TEST(Cats, EvenCatMatchesCoherentSuperposition) {
  const int d = 50;
  const double alpha = 2.0;
  const CVector ref = (coherent(alpha, d) + coherent(-alpha, d)).normalized();
  const FockState cat = make_cat(alpha, 0.0, Parity::Even, d);
  EXPECT_NEAR(std::abs(overlap(FockState::single(ref), cat)), 1.0, 1e-10);
  // <n> of the even superposition: alpha^2 tanh(alpha^2)
  EXPECT_NEAR(mean_photon_number(cat), alpha * alpha * std::tanh(alpha * alpha), 1e-9);
}

TEST(Cats, ParityAndLimits) {
  EXPECT_NEAR(parity(make_cat(2.5, 0.3, Parity::Even, 60)), 1.0, 1e-8);
  EXPECT_NEAR(parity(make_cat(2.5, -0.3, Parity::Odd, 60)), -1.0, 1e-8);
  EXPECT_GE(fidelity(make_cat(0.01, 0.0, Parity::Odd, 20), FockState::number(1, 20)), 0.999);
  EXPECT_GE(fidelity(make_squeezed_vacuum(0.0, 0.0, 20), FockState::vacuum(20)), 1.0 - 1e-15);
  EXPECT_THROW(make_cat(7.0, 0.5, Parity::Even, 40), Error);
}

TEST(Cats, CorrectedAmplitude) {
  EXPECT_NEAR(corrected_amplitude(2.0, 0.5), 3.29744, 1e-5);
  EXPECT_DOUBLE_EQ(corrected_amplitude(3.0, 0.0), 3.0);
  EXPECT_NEAR(corrected_amplitude(2.0, -0.3), 1.48164, 1e-5);
  for (double r : {-1.2, 0.0, 0.37, 2.0})
    EXPECT_NEAR(corrected_amplitude(1.7, r) * corrected_amplitude(1.0, -r), 1.7, 1e-14);
}

TEST(EffectiveSqueezing, VacuumReadsZero) {
  for (double u : {std::sqrt(kPi), std::sqrt(2.0 * kPi)})
    for (Quadrature quad : {Quadrature::Q, Quadrature::P}) {
      const EffectiveSqueezing e = effective_squeezing(FockState::vacuum(40), u, quad);
      EXPECT_NEAR(e.delta, 0.5, 1e-9);
      EXPECT_NEAR(e.db, 0.0, 1e-6);
    }
}

TEST(EffectiveSqueezing, SqueezedVacuum) {
  const EffectiveSqueezing e = effective_squeezing(make_squeezed_vacuum(0.5, 0.0, 60), std::sqrt(2.0 * kPi),
                                                   Quadrature::Q);
  EXPECT_NEAR(e.delta, std::exp(-0.5) / 2.0, 1e-8);
  EXPECT_NEAR(e.db, 4.34, 0.005);
  EXPECT_THROW(effective_squeezing(FockState::vacuum(10), 0.0, Quadrature::Q), Error);
}

TEST(Squeezing, UnitConversions) {
  for (double db : {0.43, 2.39, 11.5, 14.5}) EXPECT_NEAR(SqueezingValue::from_db(db).db(), db, 1e-12);
  EXPECT_NEAR(SqueezingValue::from_nats(1.0).db(), 20.0 * std::log10(std::exp(1.0)), 1e-12);
  const ClusterSqueezing c = cluster_from_source(SqueezingValue::from_db(14.5));
  EXPECT_NEAR(c.cluster.db(), 11.5, 0.05);
  const ClusterSqueezing one = cluster_from_source(SqueezingValue::from_nats(1.0));
  EXPECT_NEAR(one.epsilon, 1.0 / std::cosh(2.0), 1e-12);
  EXPECT_NEAR(one.epsilon, 0.26580, 1e-5);
  EXPECT_NEAR(one.cluster.nats(), 0.66250, 1e-5);
  const ClusterSqueezing zero = cluster_from_source(SqueezingValue::from_nats(1e-9));
  EXPECT_NEAR(zero.epsilon, 1.0, 1e-12);
  EXPECT_NEAR(cluster_from_cluster(one.cluster).source.nats(), 1.0, 1e-10);
}
