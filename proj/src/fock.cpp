#include "gkp/fock.hpp"

#include <cmath>
#include <numbers>

namespace gkp {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidDimension: return "invalid-dimension";
    case ErrorKind::InvalidParameter: return "invalid-parameter";
    case ErrorKind::Truncation: return "truncation";
    case ErrorKind::ZeroProbability: return "zero-probability-branch";
    case ErrorKind::UndefinedMetric: return "undefined-metric";
    case ErrorKind::NumericalConsistency: return "numerical-consistency";
    case ErrorKind::DegenerateChannel: return "degenerate-channel";
    case ErrorKind::ScheduleOverflow: return "schedule-overflow";
    case ErrorKind::Model: return "model";
    case ErrorKind::InternalInvariant: return "internal-invariant";
    case ErrorKind::Config: return "config";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

namespace {

void require_cutoff(int cutoff) {
  if (cutoff < 2) throw Error(ErrorKind::InvalidDimension, "cutoff must be >= 2, got " + std::to_string(cutoff));
}

void require_same_shape(const FockState& a, const FockState& b) {
  if (a.cutoff() != b.cutoff() || a.modes() != b.modes())
    throw Error(ErrorKind::InvalidDimension, "states differ in cutoff or mode count");
}

}  // namespace

// ---------------------------------------------------------------------------
// FockState

FockState FockState::vacuum(int cutoff) { return number(0, cutoff); }

FockState FockState::number(int n, int cutoff) {
  require_cutoff(cutoff);
  if (n < 0 || n >= cutoff) throw Error(ErrorKind::InvalidParameter, "photon number outside cutoff");
  CMatrix amps = CMatrix::Zero(cutoff, 1);
  amps(n, 0) = 1.0;
  return FockState(std::move(amps));
}

FockState FockState::single(CVector amplitudes) {
  require_cutoff(static_cast<int>(amplitudes.size()));
  return FockState(CMatrix(std::move(amplitudes)));
}

FockState FockState::two_mode(CMatrix amplitudes) {
  require_cutoff(static_cast<int>(amplitudes.rows()));
  if (amplitudes.rows() != amplitudes.cols())
    throw Error(ErrorKind::InvalidDimension, "two-mode amplitudes must be square");
  return FockState(std::move(amplitudes));
}

FockState FockState::product(const FockState& first, const FockState& second) {
  if (first.modes() != 1 || second.modes() != 1)
    throw Error(ErrorKind::InvalidDimension, "product expects two single-mode states");
  require_same_shape(first, second);
  return FockState(first.amps_.col(0) * second.amps_.col(0).transpose());
}

CVector FockState::vector() const {
  if (modes() != 1) throw Error(ErrorKind::InvalidDimension, "vector() on a two-mode state");
  return amps_.col(0);
}

CVector FockState::flat() const {
  if (modes() == 1) return amps_.col(0);
  const int d = cutoff();
  CVector out(d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) out(i * d + j) = amps_(i, j);
  return out;
}

FockState FockState::normalized() const {
  const double n = norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw Error(ErrorKind::ZeroProbability, "cannot normalize a zero state");
  return FockState(amps_ / n);
}

double FockState::tail_mass(int tail) const {
  const int d = cutoff();
  const int start = std::max(0, d - tail);
  double mass = 0.0;
  const double total = amps_.squaredNorm();
  if (modes() == 1) {
    mass = amps_.col(0).tail(d - start).squaredNorm();
  } else {
    // union of the two tails
    mass = amps_.bottomRows(d - start).squaredNorm() + amps_.topRows(start).rightCols(d - start).squaredNorm();
  }
  return total > 0.0 ? mass / total : 0.0;
}

Eigen::VectorXd FockState::photon_distribution(int mode) const {
  if (modes() == 1) return amps_.col(0).cwiseAbs2();
  if (mode == 0) return amps_.cwiseAbs2().rowwise().sum();
  return amps_.cwiseAbs2().colwise().sum().transpose();
}

// ---------------------------------------------------------------------------
// Operators

LadderSet ladder_and_quadratures(int cutoff) {
  require_cutoff(cutoff);
  CMatrix a = CMatrix::Zero(cutoff, cutoff);
  for (int n = 1; n < cutoff; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  CMatrix adag = a.adjoint();
  const double s = 1.0 / std::numbers::sqrt2;
  CMatrix q = s * (a + adag);
  CMatrix p = cplx(0.0, -s) * (a - adag);
  return {{a, "a"}, {adag, "a^dag"}, {q, "q"}, {p, "p"}};
}

CMatrix q_squared(int cutoff) {
  require_cutoff(cutoff);
  // q^2 = (a^2 + a^dag^2 + 2n + 1)/2
  CMatrix m = CMatrix::Zero(cutoff, cutoff);
  for (int n = 0; n < cutoff; ++n) {
    m(n, n) = n + 0.5;
    if (n + 2 < cutoff) {
      const double v = 0.5 * std::sqrt(static_cast<double>((n + 1) * (n + 2)));
      m(n, n + 2) = v;
      m(n + 2, n) = v;
    }
  }
  return m;
}

CMatrix p_squared(int cutoff) {
  // p^2 = (2n + 1 - a^2 - a^dag^2)/2
  CMatrix m = q_squared(cutoff);
  for (int n = 0; n + 2 < cutoff; ++n) {
    m(n, n + 2) = -m(n, n + 2);
    m(n + 2, n) = -m(n + 2, n);
  }
  return m;
}

CMatrix displacement_elements(cplx alpha, int cutoff) {
  require_cutoff(cutoff);
  CMatrix d = CMatrix::Zero(cutoff, cutoff);
  std::vector<double> sq(cutoff + 1);
  for (int k = 0; k <= cutoff; ++k) sq[k] = std::sqrt(static_cast<double>(k));
  d(0, 0) = std::exp(-0.5 * std::norm(alpha));
  for (int m = 1; m < cutoff; ++m) d(m, 0) = alpha * d(m - 1, 0) / sq[m];
  const cplx mac = -std::conj(alpha);
  for (int m = 0; m < cutoff; ++m) {
    for (int n = 1; n < cutoff; ++n) {
      cplx v = mac * d(m, n - 1);
      if (m > 0) v += sq[m] * d(m - 1, n - 1);
      d(m, n) = v / sq[n];
    }
  }
  return d;
}

FockState apply(const CMatrix& op, const FockState& state, int mode) {
  if (op.rows() != state.cutoff() || op.cols() != state.cutoff())
    throw Error(ErrorKind::InvalidDimension, "operator and state cutoffs differ");
  if (state.modes() == 1) {
    if (mode != 0) throw Error(ErrorKind::InvalidDimension, "single-mode state has only mode 0");
    return FockState::single(op * state.matrix().col(0));
  }
  if (mode == 0) return FockState::two_mode(op * state.matrix());
  if (mode == 1) return FockState::two_mode(state.matrix() * op.transpose());
  throw Error(ErrorKind::InvalidDimension, "mode index must be 0 or 1");
}

// ---------------------------------------------------------------------------
// Metrics

cplx overlap(const FockState& a, const FockState& b) {
  require_same_shape(a, b);
  return (a.matrix().conjugate().cwiseProduct(b.matrix())).sum();
}

double fidelity(const FockState& a, const FockState& b) {
  const cplx o = overlap(a, b);
  return std::norm(o) / (a.matrix().squaredNorm() * b.matrix().squaredNorm());
}

double parity(const FockState& state) {
  const Eigen::VectorXd pn = state.modes() == 1 ? state.photon_distribution() : Eigen::VectorXd();
  double acc = 0.0;
  if (state.modes() == 1) {
    for (int n = 0; n < pn.size(); ++n) acc += (n % 2 == 0 ? 1.0 : -1.0) * pn(n);
  } else {
    const CMatrix& m = state.matrix();
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j) acc += ((i + j) % 2 == 0 ? 1.0 : -1.0) * std::norm(m(i, j));
  }
  return acc / state.matrix().squaredNorm();
}

double mean_photon_number(const FockState& state) {
  const CMatrix& m = state.matrix();
  double acc = 0.0;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) acc += (state.modes() == 1 ? i : i + j) * std::norm(m(i, j));
  return acc / m.squaredNorm();
}

double quadrature_mean(const FockState& state, char quadrature) {
  if (state.modes() != 1) throw Error(ErrorKind::InvalidDimension, "quadrature moments need one mode");
  const LadderSet l = ladder_and_quadratures(state.cutoff());
  const CVector v = state.vector();
  const CMatrix& op = quadrature == 'q' ? l.q.entries : l.p.entries;
  return (v.adjoint() * op * v)(0).real() / v.squaredNorm();
}

double quadrature_variance(const FockState& state, char quadrature) {
  if (state.modes() != 1) throw Error(ErrorKind::InvalidDimension, "quadrature moments need one mode");
  const CVector v = state.vector();
  const CMatrix sq = quadrature == 'q' ? q_squared(state.cutoff()) : p_squared(state.cutoff());
  const double second = (v.adjoint() * sq * v)(0).real() / v.squaredNorm();
  const double mean = quadrature_mean(state, quadrature);
  return second - mean * mean;
}

StateMetrics state_metrics(const FockState& a, const FockState& b) {
  require_same_shape(a, b);
  return {fidelity(a, b), overlap(a, b), parity(a), parity(b), mean_photon_number(a),
          mean_photon_number(b)};
}

// ---------------------------------------------------------------------------
// Constructors

FockState make_squeezed_vacuum(double r, double theta, int cutoff) {
  require_cutoff(cutoff);
  if (!std::isfinite(r) || !std::isfinite(theta))
    throw Error(ErrorKind::InvalidParameter, "non-finite squeezing");
  CVector amps = CVector::Zero(cutoff);
  const cplx ratio = -std::exp(cplx(0.0, theta)) * std::tanh(r);
  amps(0) = 1.0 / std::sqrt(std::cosh(r));
  // c_{2m} = c_{2m-2} * ratio * sqrt((2m-1)/(2m))
  for (int n = 2; n < cutoff; n += 2)
    amps(n) = amps(n - 2) * ratio * std::sqrt(static_cast<double>(n - 1) / n);
  return FockState::single(std::move(amps)).normalized();
}

CVector displaced_squeezed_amplitudes(cplx alpha, double r, int cutoff) {
  require_cutoff(cutoff);
  const double ch = std::cosh(r), sh = std::sinh(r);
  // (a cosh r + a^dag sinh r) annihilates D(alpha)S(r)|0> up to the
  // eigenvalue gamma.
  const cplx gamma = alpha * ch + std::conj(alpha) * sh;
  CVector c(cutoff);
  c(0) = std::exp(-0.5 * std::norm(alpha) - 0.5 * std::conj(alpha) * std::conj(alpha) * std::tanh(r)) /
         std::sqrt(ch);
  if (cutoff > 1) c(1) = gamma * c(0) / ch;
  for (int n = 1; n + 1 < cutoff; ++n)
    c(n + 1) = (gamma * c(n) - sh * std::sqrt(static_cast<double>(n)) * c(n - 1)) /
               (ch * std::sqrt(static_cast<double>(n + 1)));
  const double nrm = c.norm();
  if (nrm > 0.0) c /= nrm;
  return c;
}

CVector cat_amplitudes(double alpha, double r_prime, Parity parity, int cutoff) {
  // the odd cat tends to S(r')|1> as alpha -> 0; keep the linear term alive
  if (parity == Parity::Odd && std::abs(alpha) < 1e-6) alpha = alpha < 0.0 ? -1e-6 : 1e-6;
  CVector plus = displaced_squeezed_amplitudes(alpha, r_prime, cutoff);
  CVector out(cutoff);
  // D(-alpha)S|0> has amplitudes (-1)^n times those of D(alpha)S|0>.
  for (int n = 0; n < cutoff; ++n) {
    const bool keep = (n % 2 == 0) == (parity == Parity::Even);
    out(n) = keep ? plus(n) : cplx(0.0, 0.0);
  }
  const double nrm = out.norm();
  if (nrm > 0.0) out /= nrm;
  return out;
}

FockState make_cat(double alpha, double r_prime, Parity parity, int cutoff, double leak_tol) {
  if (!std::isfinite(alpha) || !std::isfinite(r_prime))
    throw Error(ErrorKind::InvalidParameter, "non-finite cat parameters");
  require_cutoff(cutoff);
  const int extended = cutoff + 60;
  const CVector wide = cat_amplitudes(alpha, r_prime, parity, extended);
  const double leak = wide.tail(extended - std::max(0, cutoff - 5)).squaredNorm();
  if (leak > leak_tol)
    throw Error(ErrorKind::Truncation, "cat support leaks past cutoff (mass " + std::to_string(leak) + ")");
  return FockState::single(cat_amplitudes(alpha, r_prime, parity, cutoff));
}

double corrected_amplitude(double alpha, double r_prime) { return alpha * std::exp(r_prime); }

EffectiveSqueezing effective_squeezing(const FockState& state, double u, Quadrature quadrature) {
  if (state.modes() != 1) throw Error(ErrorKind::InvalidDimension, "effective squeezing needs one mode");
  if (u == 0.0 || !std::isfinite(u)) throw Error(ErrorKind::InvalidParameter, "displacement u must be finite and nonzero");
  // exp(i u q) = D(i u / sqrt2); exp(i u p) = D(-u / sqrt2)
  const cplx alpha = quadrature == Quadrature::Q ? cplx(0.0, u / std::numbers::sqrt2)
                                                 : cplx(-u / std::numbers::sqrt2, 0.0);
  const CVector v = state.vector();
  const CMatrix d = displacement_elements(alpha, state.cutoff());
  const double tr = std::abs((v.adjoint() * d * v)(0)) / v.squaredNorm();
  if (tr == 0.0) throw Error(ErrorKind::UndefinedMetric, "displacement expectation vanishes");
  if (tr > 1.0 + 1e-9) throw Error(ErrorKind::NumericalConsistency, "|Tr(D rho)| exceeds 1");
  const double delta = std::sqrt(std::max(0.0, -std::log(std::min(tr, 1.0)))) / std::abs(u);
  return {delta, -20.0 * std::log10(2.0 * delta)};
}

ClusterSqueezing cluster_from_source(SqueezingValue r0) {
  const double eps = 1.0 / std::cosh(2.0 * r0.nats());
  return {r0, SqueezingValue::from_nats(0.5 * std::log(1.0 / eps)), eps};
}

ClusterSqueezing cluster_from_cluster(SqueezingValue r) {
  const double mag = std::abs(r.nats());
  const double r0 = 0.5 * std::acosh(std::exp(2.0 * mag));
  return {SqueezingValue::from_nats(r0), SqueezingValue::from_nats(mag), std::exp(-2.0 * mag)};
}

}  // namespace gkp
