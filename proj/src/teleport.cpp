#include "gkp/teleport.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>

#include "gkp/measurement.hpp"

namespace gkp {
namespace {

template <typename Key>
class MatrixCache {
 public:
  template <typename Build>
  const CMatrix& get(const Key& key, Build build) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = entries_.find(key);
    if (it == entries_.end()) it = entries_.emplace(key, build()).first;
    return it->second;
  }

 private:
  std::mutex mu_;
  std::map<Key, CMatrix> entries_;
};

CMatrix hermitian_exp(const CMatrix& h, double scale) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  const Eigen::VectorXd e = (scale * es.eigenvalues().array()).exp();
  return es.eigenvectors() * e.asDiagonal() * es.eigenvectors().adjoint();
}

const CMatrix& noise_matrix(int d, double r0) {
  static MatrixCache<std::pair<int, double>> cache;
  return cache.get({d, r0}, [&] {
    const double eps = 1.0 / std::cosh(2.0 * r0);
    const double th = std::tanh(2.0 * r0);
    // exp(-eps q^2/2) exp(-eps p^2/(2 tanh^2)): the p factor acts first
    return CMatrix(hermitian_exp(q_squared(d), -0.5 * eps) * hermitian_exp(p_squared(d), -0.5 * eps / (th * th)));
  });
}

const CMatrix& squeeze_matrix(int d, double r) {
  static MatrixCache<std::pair<int, double>> cache;
  return cache.get({d, r}, [&] { return build_gaussian_unitary(Squeeze{r, 0.0}, d).entries; });
}

CMatrix rotation_matrix(int d, double theta) {
  CMatrix u = CMatrix::Zero(d, d);
  for (int n = 0; n < d; ++n) u(n, n) = std::exp(cplx(0.0, -theta * n));
  return u;
}

void require_single(const FockState& s) {
  if (s.modes() != 1) throw Error(ErrorKind::InvalidDimension, "expected a single-mode state");
}

void require_r0(SqueezingValue r0) {
  if (!(r0.nats() > 0.0) || !std::isfinite(r0.nats()))
    throw Error(ErrorKind::DegenerateChannel, "source squeezing must be positive (eps >= 1)");
}

SubtractionStats stats_of(const FockState& s, double theta) {
  const KrausFamily fam = KrausFamily::from_angle_degrees(theta, s.cutoff());
  const Eigen::VectorXd p = fam.probabilities(s);
  double nm = 0.0;
  for (int n = 0; n < p.size(); ++n) nm += n * p(n);
  return {p(0), nm};
}

}  // namespace

FockState noise_channel(const FockState& state, SqueezingValue r0) {
  require_single(state);
  require_r0(r0);
  return FockState::single(noise_matrix(state.cutoff(), r0.nats()) * state.vector()).normalized();
}

FockState teleport_squeeze(const FockState& state, SqueezingValue r0, double r_a) {
  require_single(state);
  require_r0(r0);
  const int d = state.cutoff();
  CVector v = state.vector();
  if (r_a != 0.0) v = squeeze_matrix(d, r_a) * v;
  return FockState::single(noise_matrix(d, r0.nats()) * v).normalized();
}

FockState antisqueeze_gate(const FockState& state, SqueezingValue r0, double r_a) {
  return teleport_squeeze(state, r0, -r_a);
}

SubtractionStats subtraction_statistics(const FockState& state, double theta_bs_degrees) {
  require_single(state);
  return stats_of(state, theta_bs_degrees);
}

SubtractionStats subtraction_statistics(const FockState& state, SqueezingValue r0, double r_a,
                                        double theta_bs_degrees) {
  return stats_of(antisqueeze_gate(state, r0, r_a), theta_bs_degrees);
}

std::vector<double> schedule_angles(double theta0, double a, double b, int count) {
  if (count < 1) throw Error(ErrorKind::InvalidParameter, "schedule needs at least one angle");
  std::vector<double> th(count);
  th[0] = theta0;
  for (int x = 0; x + 1 < count; ++x) th[x + 1] = th[x] + a * std::exp(b * x);
  for (double v : th)
    if (v >= 90.0 || v <= 0.0) throw Error(ErrorKind::ScheduleOverflow, "schedule angle outside (0, 90) degrees");
  return th;
}

SqueezingValue channel_r0(SqueezingValue r, NoiseArgument arg) {
  return arg == NoiseArgument::Cluster ? r : cluster_from_cluster(r).source;
}

void PhantmConfig::validate() const {
  if (n_steps < 1) throw Error(ErrorKind::InvalidParameter, "n_steps must be >= 1");
  if (subtractors_per_step < 1) throw Error(ErrorKind::InvalidParameter, "subtractors_per_step must be >= 1");
  if (cutoff < 40) throw Error(ErrorKind::InvalidParameter, "cutoff must be >= 40");
  if (t_ph < 0) throw Error(ErrorKind::InvalidParameter, "T_ph must be >= 0");
  require_r0(r);
  schedule_angles(theta0, grad_a, grad_b, subtractors_per_step);
}

FockState cluster_input_state(SqueezingValue r, int cutoff) {
  return make_squeezed_vacuum(-std::abs(r.nats()), 0.0, cutoff);
}

StepOutcome phantm_step(const FockState& state, SqueezingValue r, SqueezingValue r0,
                        const std::vector<double>& angles, Rng& rng) {
  require_single(state);
  require_r0(r0);
  const int d = state.cutoff();
  const double r_anc = std::abs(r.nats()) * std::tanh(r0.nats()) / std::numbers::sqrt2;
  const double g = std::tanh(2.0 * r0.nats()) / std::numbers::sqrt2;

  StepOutcome out{state, {}, 0.0, false, 0, false, false};
  const FockState ancilla = make_squeezed_vacuum(-r_anc, 0.0, d);
  GateResult cz = apply_two_mode_gate(FockState::product(state, ancilla), ControlledZ{g});
  out.truncation_flag = cz.truncation_flag;
  FockState two = std::move(cz.state);

  for (double theta : angles) {
    SubtractionOutcome s = sample_subtraction(two, 0, theta, rng);
    out.photons.push_back(s.n);
    out.saturated = out.saturated || s.saturated;
    out.truncation_flag = out.truncation_flag || s.truncation_flag;
    two = std::move(s.post_state);
  }

  HomodyneResult h = homodyne_project(two, 0, std::numbers::pi / 2.0, 0.0);
  // G = R^dag(pi/2) S^dag(ln g): undo the teleport's q-scaling, then rotate back
  CVector v = squeeze_matrix(d, -std::log(g)) * h.post_state.vector();
  v = rotation_matrix(d, -std::numbers::pi / 2.0) * v;
  out.post_state = FockState::single(std::move(v)).normalized();
  return out;
}

CatRunRecord run_phantm(const PhantmConfig& cfg, Rng& rng) {
  cfg.validate();
  const std::vector<double> angles = schedule_angles(cfg.theta0, cfg.grad_a, cfg.grad_b, cfg.subtractors_per_step);
  const SqueezingValue r0 = cfg.r0();
  const FockState fresh = cluster_input_state(cfg.r, cfg.cutoff);

  CatRunRecord rec{fresh, {}, 0, rng.seed(), 0, {}, false};
  FockState state = fresh;
  for (int step = 0; step < cfg.n_steps; ++step) {
    std::optional<StepOutcome> outcome;
    for (int attempt = 0; !outcome; ++attempt) {
      try {
        Rng local = attempt == 0 ? rng : rng.split(static_cast<std::uint32_t>(1000 * step + attempt));
        outcome = phantm_step(state, cfg.r, r0, angles, local);
        rng = local;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::ZeroProbability || attempt >= 8) throw;
        ++rec.retries;
      }
    }
    StepOutcome o = std::move(*outcome);
    int photons = 0;
    for (int n : o.photons) photons += n;
    if (o.truncation_flag) rec.truncation_flags.push_back("step" + std::to_string(step) + ":phantm");
    rec.saturated = rec.saturated || o.saturated;

    if (rec.total_photons == 0 && photons == 0) {
      o.reset_applied = true;
      o.post_state = fresh;
    } else {
      rec.total_photons += photons;
      if (cfg.antisqueeze_enabled) {
        o.antisqueeze_level = rec.total_photons >= cfg.t_ph ? 2 : 1;
        const double ra = (o.antisqueeze_level == 1 ? cfg.ra1 : cfg.ra2).nats();
        o.post_state = antisqueeze_gate(o.post_state, r0, ra);
      }
      if (o.post_state.tail_mass(5) > 1e-6)
        rec.truncation_flags.push_back("step" + std::to_string(step) + ":tail");
    }
    state = o.post_state;
    rec.per_step.push_back(std::move(o));
  }
  rec.final_state = state;
  return rec;
}

}  // namespace gkp
