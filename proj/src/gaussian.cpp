#include <cmath>
#include <map>
#include <mutex>
#include <tuple>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "gkp/fock.hpp"
#include "gkp/simd/kernels.hpp"

namespace gkp {
namespace {

void require_finite(std::initializer_list<double> values) {
  for (double v : values)
    if (!std::isfinite(v)) throw Error(ErrorKind::InvalidParameter, "non-finite gate parameter");
}

std::string fmt(double v) { return std::to_string(v); }

// exp(K) for anti-Hermitian K via the Hermitian eigenproblem of iK.
CMatrix unitary_from_antihermitian(const CMatrix& k) {
  const CMatrix h = cplx(0.0, 1.0) * k;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  const Eigen::VectorXd& lambda = es.eigenvalues();
  CVector phases(lambda.size());
  for (int i = 0; i < lambda.size(); ++i) phases(i) = std::exp(cplx(0.0, -lambda(i)));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

// Per total-photon-number sector blocks of the beam splitter unitary.
struct SectorBlocks {
  std::vector<int> low;  // smallest n1 in sector N
  std::vector<CMatrix> blocks;
};

SectorBlocks build_sectors(int d, double theta, double phi) {
  SectorBlocks sb;
  const int sectors = 2 * d - 1;
  sb.low.resize(sectors);
  sb.blocks.resize(sectors);
  const cplx ep = std::exp(cplx(0.0, phi));
  for (int n = 0; n < sectors; ++n) {
    const int lo = std::max(0, n - (d - 1));
    const int hi = std::min(n, d - 1);
    const int s = hi - lo + 1;
    CMatrix k = CMatrix::Zero(s, s);
    for (int idx = 0; idx < s; ++idx) {
      const int n1 = lo + idx, n2 = n - n1;
      if (idx + 1 < s) k(idx + 1, idx) += theta * ep * std::sqrt(static_cast<double>((n1 + 1) * n2));
      if (idx > 0) k(idx - 1, idx) -= theta * std::conj(ep) * std::sqrt(static_cast<double>(n1 * (n2 + 1)));
    }
    sb.low[n] = lo;
    sb.blocks[n] = unitary_from_antihermitian(k);
  }
  return sb;
}

const SectorBlocks& cached_sectors(int d, double theta, double phi) {
  static std::mutex mu;
  static std::map<std::tuple<int, double, double>, SectorBlocks> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(d, theta, phi);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, build_sectors(d, theta, phi)).first;
  return it->second;
}

GateResult finish(CMatrix amps, const TwoModeOptions& opts) {
  FockState s = FockState::two_mode(std::move(amps));
  const double tail = s.tail_mass(5);
  return {std::move(s), tail, tail > opts.leakage_bound};
}

}  // namespace

OperatorMatrix build_gaussian_unitary(const GaussianGate& gate, int cutoff) {
  if (cutoff < 2) throw Error(ErrorKind::InvalidDimension, "cutoff must be >= 2");
  const LadderSet l = ladder_and_quadratures(cutoff);
  const CMatrix& a = l.a.entries;
  const CMatrix& ad = l.adag.entries;
  return std::visit(
      [&](const auto& g) -> OperatorMatrix {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, Displacement>) {
          require_finite({g.alpha.real(), g.alpha.imag()});
          const CMatrix gen = g.alpha * ad - std::conj(g.alpha) * a;
          return {gen.exp(), "D(" + fmt(g.alpha.real()) + "," + fmt(g.alpha.imag()) + ")"};
        } else if constexpr (std::is_same_v<T, Squeeze>) {
          require_finite({g.r, g.theta});
          const cplx z = g.r * std::exp(cplx(0.0, g.theta));
          const CMatrix gen = 0.5 * (std::conj(z) * (a * a) - z * (ad * ad));
          return {gen.exp(), "S(" + fmt(g.r) + "," + fmt(g.theta) + ")"};
        } else if constexpr (std::is_same_v<T, Rotation>) {
          require_finite({g.theta});
          CMatrix u = CMatrix::Zero(cutoff, cutoff);
          for (int n = 0; n < cutoff; ++n) u(n, n) = std::exp(cplx(0.0, -g.theta * n));
          return {u, "R(" + fmt(g.theta) + ")"};
        } else if constexpr (std::is_same_v<T, BeamSplitter>) {
          require_finite({g.theta, g.phi});
          const cplx ep = std::exp(cplx(0.0, g.phi));
          const CMatrix gen = g.theta * (ep * CMatrix(Eigen::kroneckerProduct(ad, a)) -
                                         std::conj(ep) * CMatrix(Eigen::kroneckerProduct(a, ad)));
          return {gen.exp(), "B(" + fmt(g.theta) + "," + fmt(g.phi) + ")"};
        } else {
          require_finite({g.g});
          const CMatrix gen = cplx(0.0, g.g) * CMatrix(Eigen::kroneckerProduct(l.q.entries, l.q.entries));
          return {gen.exp(), "CZ(" + fmt(g.g) + ")"};
        }
      },
      gate);
}

GateResult apply_two_mode_gate(const FockState& state, const BeamSplitter& gate,
                               const TwoModeOptions& opts) {
  if (state.modes() != 2) throw Error(ErrorKind::InvalidDimension, "beam splitter needs a two-mode state");
  require_finite({gate.theta, gate.phi});
  const int d = state.cutoff();
  const SectorBlocks& sb = cached_sectors(d, gate.theta, gate.phi);
  const CMatrix& in = state.matrix();
  CMatrix out(d, d);
  CVector buf;
  for (int n = 0; n < 2 * d - 1; ++n) {
    const int lo = sb.low[n];
    const CMatrix& u = sb.blocks[n];
    const int s = static_cast<int>(u.rows());
    buf.resize(s);
    for (int k = 0; k < s; ++k) buf(k) = in(lo + k, n - lo - k);
    const CVector res = u * buf;
    for (int k = 0; k < s; ++k) out(lo + k, n - lo - k) = res(k);
  }
  return finish(std::move(out), opts);
}

GateResult apply_two_mode_gate(const FockState& state, const ControlledZ& gate,
                               const TwoModeOptions& opts) {
  if (state.modes() != 2) throw Error(ErrorKind::InvalidDimension, "C_Z needs a two-mode state");
  require_finite({gate.g});
  const int d = state.cutoff();
  if (gate.g == 0.0) return finish(state.matrix(), opts);

  const simd::KernelTable& kt = simd::kernels();
  const auto n = static_cast<std::size_t>(d) * static_cast<std::size_t>(d);

  // 1-norm bound of g q (x) q
  const double col = std::sqrt(0.5 * std::max(0, d - 2)) + std::sqrt(0.5 * (d - 1));
  const double norm_bound = std::abs(gate.g) * col * col;
  constexpr double kStepNorm = 6.0;
  const int steps = std::max(1, static_cast<int>(std::ceil(norm_bound / kStepNorm)));
  const double tol = std::min(opts.tolerance, 1e-12) * 1e-3;

  CMatrix f = state.matrix();
  CMatrix term(d, d), next(d, d), scratch(d, d);
  for (int s = 0; s < steps; ++s) {
    term = f;
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 1; k < 200; ++k) {
      const cplx scale(0.0, gate.g / (static_cast<double>(steps) * k));
      kt.cz_generator(term.data(), next.data(), scratch.data(), d, scale);
      term.swap(next);
      kt.axpy(n, cplx(1.0, 0.0), term.data(), f.data());
      const double t = kt.max_abs(n, term.data());
      if (t + prev <= tol * kt.max_abs(n, f.data())) break;
      prev = t;
    }
  }
  return finish(std::move(f), opts);
}

}  // namespace gkp
