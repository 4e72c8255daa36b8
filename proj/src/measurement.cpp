#include "gkp/measurement.hpp"

#include <cmath>
#include <numbers>

namespace gkp {

Eigen::VectorXd quadrature_wavefunctions(int count, double x) {
  Eigen::VectorXd psi(std::max(count, 0));
  if (count <= 0) return psi;
  psi(0) = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
  if (count > 1) psi(1) = std::sqrt(2.0) * x * psi(0);
  for (int n = 2; n < count; ++n)
    psi(n) = std::sqrt(2.0 / n) * x * psi(n - 1) - std::sqrt((n - 1.0) / n) * psi(n - 2);
  return psi;
}

double quadrature_wavefunction(int n, double x) {
  if (n < 0) throw Error(ErrorKind::InvalidParameter, "negative Hermite index");
  return quadrature_wavefunctions(n + 1, x)(n);
}

HomodyneResult homodyne_project(const FockState& state, int mode, double theta, double outcome) {
  if (state.modes() != 2) throw Error(ErrorKind::InvalidDimension, "homodyne projection needs two modes");
  if (mode != 0 && mode != 1) throw Error(ErrorKind::InvalidDimension, "mode index must be 0 or 1");
  const int d = state.cutoff();
  const Eigen::VectorXd psi = quadrature_wavefunctions(d, outcome);
  // R(theta) on the measured mode is the phase e^{-i theta n}; fold it into
  // the projector row.
  CVector bra(d);
  for (int n = 0; n < d; ++n) bra(n) = psi(n) * std::exp(cplx(0.0, -theta * n));
  const CMatrix& m = state.matrix();
  CVector keep = mode == 0 ? CVector(m.transpose() * bra) : CVector(m * bra);
  const double density = keep.squaredNorm() / m.squaredNorm();
  if (density < 1e-14) throw Error(ErrorKind::ZeroProbability, "homodyne branch has vanishing density");
  keep /= keep.norm();
  return {FockState::single(std::move(keep)), density};
}

KrausFamily::KrausFamily(double beta, int cutoff) : beta_(beta), t_(std::exp(-beta)), cutoff_(cutoff) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw Error(ErrorKind::InvalidParameter, "beta must be positive");
  if (cutoff < 2) throw Error(ErrorKind::InvalidDimension, "cutoff must be >= 2");
  log_fact_.resize(cutoff + 1);
  for (int k = 0; k <= cutoff; ++k) log_fact_[k] = std::lgamma(k + 1.0);
}

KrausFamily KrausFamily::from_angle_degrees(double theta_bs, int cutoff) {
  if (!(theta_bs > 0.0 && theta_bs < 90.0))
    throw Error(ErrorKind::InvalidParameter, "beam splitter angle must lie in (0, 90) degrees");
  return KrausFamily(-std::log(std::cos(theta_bs * std::numbers::pi / 180.0)), cutoff);
}

CMatrix KrausFamily::op(int n) const {
  CMatrix o = CMatrix::Zero(cutoff_, cutoff_);
  if (n < 0 || n >= cutoff_) return o;
  const double lr = std::log1p(-t_ * t_);
  for (int j = 0; j + n < cutoff_; ++j) {
    // <j| O_n |j+n>
    const double lg = 0.5 * n * lr + j * std::log(t_) +
                      0.5 * (log_fact_[j + n] - log_fact_[j] - log_fact_[n]);
    o(j, j + n) = std::exp(lg);
  }
  return o;
}

FockState KrausFamily::apply(int n, const FockState& state, int mode) const {
  if (state.cutoff() != cutoff_) throw Error(ErrorKind::InvalidDimension, "Kraus family cutoff mismatch");
  return gkp::apply(op(n), state, mode);
}

Eigen::VectorXd KrausFamily::probabilities(const FockState& state, int mode) const {
  if (state.cutoff() != cutoff_) throw Error(ErrorKind::InvalidDimension, "Kraus family cutoff mismatch");
  Eigen::VectorXd w;
  const CMatrix& m = state.matrix();
  if (state.modes() == 1) {
    w = m.col(0).cwiseAbs2();
  } else if (mode == 0) {
    w = m.cwiseAbs2().rowwise().sum();
  } else {
    w = m.cwiseAbs2().colwise().sum().transpose();
  }
  w /= w.sum();

  const double lr = std::log1p(-t_ * t_);
  const double lt = std::log(t_);
  Eigen::VectorXd p = Eigen::VectorXd::Zero(cutoff_);
  for (int k = 0; k < cutoff_; ++k) {
    if (w(k) == 0.0) continue;
    const double lw = std::log(w(k));
    for (int n = 0; n <= k; ++n)
      p(n) += std::exp(lw + log_fact_[k] - log_fact_[n] - log_fact_[k - n] + n * lr + 2.0 * (k - n) * lt);
  }
  return p;
}

KrausFamily subtraction_kraus(double beta, int cutoff) { return KrausFamily(beta, cutoff); }

SubtractionOutcome sample_subtraction(const FockState& state, int mode, double theta_bs_degrees, Rng& rng) {
  const KrausFamily fam = KrausFamily::from_angle_degrees(theta_bs_degrees, state.cutoff());
  const Eigen::VectorXd p = fam.probabilities(state, mode);
  const double total = p.sum();
  const double u = rng.uniform() * total;
  double acc = 0.0;
  int n = 0;
  for (; n < p.size() - 1; ++n) {
    acc += p(n);
    if (u < acc) break;
  }
  while (p(n) == 0.0 && n > 0) --n;
  SubtractionOutcome out{n, p(n) / total, fam.apply(n, state, mode).normalized(), total < 1.0 - 1e-6,
                         n >= kPnrSaturation};
  return out;
}

}  // namespace gkp
