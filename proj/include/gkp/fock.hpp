#pragma once

// Truncated Fock-space states and operators.
//
// Conventions: q = (a + a^dag)/sqrt2, p = (a - a^dag)/(i sqrt2), [q,p] = i,
// vacuum quadrature variance 1/2.  S(r) with real r > 0 squeezes q:
// Var_q(S(r)|0>) = e^{-2r}/2.

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <variant>

#include "gkp/error.hpp"

namespace gkp {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kDbPerNeper = 8.685889638065036;  // 20 log10(e)

/// Squeezing parameter carried in nats with a dB view.
class SqueezingValue {
 public:
  constexpr SqueezingValue() = default;
  static constexpr SqueezingValue from_nats(double r) { return SqueezingValue(r); }
  static constexpr SqueezingValue from_db(double db) { return SqueezingValue(db / kDbPerNeper); }

  constexpr double nats() const { return nats_; }
  constexpr double db() const { return nats_ * kDbPerNeper; }

 private:
  constexpr explicit SqueezingValue(double r) : nats_(r) {}
  double nats_ = 0.0;
};

/// Pure state of one or two truncated bosonic modes.
///
/// Amplitudes are stored as a cutoff x 1 column (one mode) or a
/// cutoff x cutoff matrix psi(n1, n2) (two modes).  Values are immutable;
/// every operation returns a new state.
class FockState {
 public:
  static FockState vacuum(int cutoff);
  static FockState number(int n, int cutoff);
  static FockState single(CVector amplitudes);
  static FockState two_mode(CMatrix amplitudes);
  static FockState product(const FockState& first, const FockState& second);

  int cutoff() const { return static_cast<int>(amps_.rows()); }
  int modes() const { return amps_.cols() == 1 ? 1 : 2; }

  const CMatrix& matrix() const { return amps_; }
  CVector vector() const;  // single-mode amplitudes; throws for two modes

  // Row-major flattening psi[n1 * D + n2] for two modes.
  CVector flat() const;

  double norm() const { return amps_.norm(); }
  FockState normalized() const;

  /// Probability mass on photon indices >= cutoff - tail (any mode).
  double tail_mass(int tail = 5) const;

  /// Photon-number distribution of one mode.
  Eigen::VectorXd photon_distribution(int mode = 0) const;

 private:
  explicit FockState(CMatrix amps) : amps_(std::move(amps)) {}
  CMatrix amps_;
};

struct OperatorMatrix {
  CMatrix entries;
  std::string label;
  int cutoff() const { return static_cast<int>(entries.rows()); }
};

struct LadderSet {
  OperatorMatrix a, adag, q, p;
};

LadderSet ladder_and_quadratures(int cutoff);

/// Truncated matrix of q^2 and p^2 computed from the exact operator
/// (entries are exact on the whole block, including the top row).
CMatrix q_squared(int cutoff);
CMatrix p_squared(int cutoff);

struct Displacement { cplx alpha; };
struct Squeeze { double r; double theta = 0.0; };
struct Rotation { double theta; };
struct BeamSplitter { double theta; double phi = 0.0; };
struct ControlledZ { double g; };

using GaussianGate = std::variant<Displacement, Squeeze, Rotation, BeamSplitter, ControlledZ>;

/// Dense exponential of the truncated generator.  Two-mode kinds return the
/// D^2 x D^2 operator in row-major (n1 * D + n2) ordering; use
/// apply_two_mode_gate for anything beyond small cutoffs.
OperatorMatrix build_gaussian_unitary(const GaussianGate& gate, int cutoff);

/// Exact matrix elements <m|D(alpha)|n> of the untruncated displacement.
CMatrix displacement_elements(cplx alpha, int cutoff);

/// Apply a single-mode operator to the given mode.  No renormalization.
FockState apply(const CMatrix& op, const FockState& state, int mode = 0);

struct GateResult {
  FockState state;
  double tail_mass = 0.0;
  bool truncation_flag = false;
};

struct TwoModeOptions {
  double tolerance = 1e-10;
  double leakage_bound = 1e-6;
};

/// Performance path for the beam splitter (exact per total-photon sector)
/// and C_Z = exp(i g q1 q2) (Taylor applied action of the sparse generator).
GateResult apply_two_mode_gate(const FockState& state, const BeamSplitter& gate,
                               const TwoModeOptions& opts = {});
GateResult apply_two_mode_gate(const FockState& state, const ControlledZ& gate,
                               const TwoModeOptions& opts = {});

// ---------------------------------------------------------------------------
// Wigner function

struct PhaseSpaceGrid {
  double q_min = -8.0, q_max = 8.0;
  int q_points = 161;
  double p_min = -8.0, p_max = 8.0;
  int p_points = 161;

  double q_at(int i) const;
  double p_at(int j) const;
  double cell_area() const;
};

struct WignerMap {
  PhaseSpaceGrid grid;
  Eigen::MatrixXd values;  // values(j, i) = W(q_i, p_j)
  double integral = 0.0;
  bool coverage_warning = false;
};

WignerMap wigner_map(const FockState& state, const PhaseSpaceGrid& grid);
double wigner_at(const FockState& state, double q, double p);

// ---------------------------------------------------------------------------
// Metrics

cplx overlap(const FockState& a, const FockState& b);  // <a|b>
double fidelity(const FockState& a, const FockState& b);
double parity(const FockState& state);
double mean_photon_number(const FockState& state);
double quadrature_mean(const FockState& state, char quadrature);
double quadrature_variance(const FockState& state, char quadrature);

struct StateMetrics {
  double fidelity;
  cplx overlap;
  double parity_a, parity_b;
  double mean_photon_a, mean_photon_b;
};

StateMetrics state_metrics(const FockState& a, const FockState& b);

// ---------------------------------------------------------------------------
// State constructors

FockState make_squeezed_vacuum(double r, double theta, int cutoff);

/// D(alpha) S(r) |0> for real r, from the exact three-term amplitude
/// recurrence, normalized within the cutoff.  No leakage check.
CVector displaced_squeezed_amplitudes(cplx alpha, double r, int cutoff);

enum class Parity { Even, Odd };

/// Normalized (D(alpha) +/- D(-alpha)) S(r') |0> amplitudes; no leakage check.
CVector cat_amplitudes(double alpha, double r_prime, Parity parity, int cutoff);

/// Checked cat constructor: throws Truncation when more than leak_tol of the
/// untruncated state lies on photon indices >= cutoff - 5.
FockState make_cat(double alpha, double r_prime, Parity parity, int cutoff,
                   double leak_tol = 1e-6);

double corrected_amplitude(double alpha, double r_prime);

enum class Quadrature { Q, P };

struct EffectiveSqueezing {
  double delta;
  double db;
};

/// Delta = sqrt(-ln|<exp(i u x)>|)/|u| with x the named quadrature; the dB
/// value -20 log10(2 Delta) reads 0 for vacuum.
EffectiveSqueezing effective_squeezing(const FockState& state, double u, Quadrature quadrature);

struct ClusterSqueezing {
  SqueezingValue source;   // r0, two-mode source squeezing
  SqueezingValue cluster;  // |r| = 1/2 ln cosh(2 r0)
  double epsilon;          // sech(2 r0)
};

ClusterSqueezing cluster_from_source(SqueezingValue r0);
ClusterSqueezing cluster_from_cluster(SqueezingValue r);

}  // namespace gkp
