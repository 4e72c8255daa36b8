#include "gkp/breeding.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "gkp/measurement.hpp"

namespace gkp {
namespace {

struct TableRow {
  double r_db, alpha_db, two_alpha_db;
};

constexpr std::array<TableRow, 7> kLowerBounds{{
    {11.00, 6.08, 7.82},
    {11.25, 5.21, 6.95},
    {11.50, 4.34, 6.08},
    {11.75, 0.45, 5.65},
    {12.00, 3.91, 6.08},
    {12.25, 4.78, 6.51},
    {12.50, 4.78, 6.51},
}};

}  // namespace

LowerBounds table_lower_bounds(double r_db) {
  if (r_db <= kLowerBounds.front().r_db) return {kLowerBounds.front().alpha_db, kLowerBounds.front().two_alpha_db};
  if (r_db >= kLowerBounds.back().r_db) return {kLowerBounds.back().alpha_db, kLowerBounds.back().two_alpha_db};
  for (std::size_t i = 1; i < kLowerBounds.size(); ++i) {
    const TableRow& hi = kLowerBounds[i];
    if (r_db > hi.r_db) continue;
    const TableRow& lo = kLowerBounds[i - 1];
    const double w = (r_db - lo.r_db) / (hi.r_db - lo.r_db);
    return {lo.alpha_db + w * (hi.alpha_db - lo.alpha_db), lo.two_alpha_db + w * (hi.two_alpha_db - lo.two_alpha_db)};
  }
  return {kLowerBounds.back().alpha_db, kLowerBounds.back().two_alpha_db};
}

double BreedConfig::alpha_b() const { return std::pow(2.0, 0.5 * (rounds - 3)) * amplitude_unit; }

void BreedConfig::validate() const {
  if (rounds < 1 || rounds > 6) throw Error(ErrorKind::InvalidParameter, "breeding rounds must be in [1, 6]");
  if (!(amplitude_unit > 0.0)) throw Error(ErrorKind::InvalidParameter, "amplitude_unit must be positive");
  if (cutoff < 20) throw Error(ErrorKind::InvalidParameter, "breeding cutoff must be >= 20");
  if (!(u_q > 0.0) || !(u_p > 0.0)) throw Error(ErrorKind::InvalidParameter, "metric displacements must be positive");
}

const char* to_string(BreedAction a) {
  switch (a) {
    case BreedAction::RescaleToAlphaB: return "alpha_b";
    case BreedAction::RescaleTo2AlphaB: return "2alpha_b";
    case BreedAction::ReplaceWithSqueezedVacuum: return "replace";
  }
  return "unknown";
}

RescaledSqueezing rescaled_squeezing(const CatFit& fit, double alpha_b) {
  const double r1 = std::log(fit.alpha_c / alpha_b);
  return {r1 * kDbPerNeper, (r1 - std::numbers::ln2) * kDbPerNeper};
}

BreedAction breed_action(const RescaledSqueezing& rs, const LowerBounds& lb) {
  if (rs.alpha_b_db > rs.two_alpha_b_db && rs.alpha_b_db > lb.alpha_db) return BreedAction::RescaleToAlphaB;
  if (rs.two_alpha_b_db > lb.two_alpha_db) return BreedAction::RescaleTo2AlphaB;
  return BreedAction::ReplaceWithSqueezedVacuum;
}

Decision rescale_decision(const CatFit& fit, const BreedConfig& cfg) {
  if (!fit.accepted) return {BreedAction::ReplaceWithSqueezedVacuum, true};
  if (!(fit.alpha_c > 0.0) || !std::isfinite(fit.alpha_c)) return {BreedAction::ReplaceWithSqueezedVacuum, true};
  return {breed_action(rescaled_squeezing(fit, cfg.alpha_b()), cfg.lower_bounds), false};
}

FockState rescale_state(const FockState& state, const CatFit& fit, double target_alpha, SqueezingValue r0) {
  if (!(target_alpha > 0.0) || !(fit.alpha > 0.0))
    throw Error(ErrorKind::InvalidParameter, "rescale needs positive amplitudes");
  const FockState out = teleport_squeeze(state, r0, std::log(fit.alpha / target_alpha));
  if (out.tail_mass(5) > 1e-6) throw Error(ErrorKind::Truncation, "rescaled cat leaks above the cutoff");
  return out;
}

FockState parity_align(const FockState& state, Parity parity, double alpha) {
  if (parity == Parity::Even) return state;
  if (!(alpha > 0.0)) throw Error(ErrorKind::InvalidParameter, "parity alignment needs alpha > 0");
  // e^{iuq} = D(i u / sqrt2)
  const double u = std::numbers::pi / (2.0 * std::numbers::sqrt2 * alpha);
  const CMatrix d = displacement_elements(cplx(0.0, u / std::numbers::sqrt2), state.cutoff());
  return FockState::single(d * state.vector()).normalized();
}

FockState breed_pair(const FockState& s1, const FockState& s2) {
  if (s1.modes() != 1 || s2.modes() != 1 || s1.cutoff() != s2.cutoff())
    throw Error(ErrorKind::InvalidDimension, "breeding needs two single-mode states of equal cutoff");
  const GateResult bs = apply_two_mode_gate(FockState::product(s1, s2), BeamSplitter{std::numbers::pi / 4.0, 0.0});
  return homodyne_project(bs.state, 1, std::numbers::pi / 2.0, 0.0).post_state;
}

FockState resize_cutoff(const FockState& state, int cutoff) {
  if (state.modes() != 1) throw Error(ErrorKind::InvalidDimension, "resize needs a single-mode state");
  CVector v = CVector::Zero(cutoff);
  const int keep = std::min(cutoff, state.cutoff());
  v.head(keep) = state.vector().head(keep);
  return FockState::single(std::move(v)).normalized();
}

BreedResult breed_tree(const std::vector<FockState>& inputs, const BreedConfig& cfg) {
  cfg.validate();
  if (static_cast<int>(inputs.size()) != cfg.inputs())
    throw Error(ErrorKind::InvalidParameter, "breeding tree needs exactly 2^M inputs");
  std::vector<FockState> level = inputs;
  for (int round = 0; round < cfg.rounds; ++round) {
    std::vector<FockState> next;
    for (std::size_t i = 0; i + 1 < level.size(); i += 2) next.push_back(breed_pair(level[i], level[i + 1]));
    level = std::move(next);
  }
  BreedResult res{level.front(), {}};
  res.sample.dq_db = effective_squeezing(res.state, cfg.u_q, Quadrature::Q).db;
  res.sample.dp_db = effective_squeezing(res.state, cfg.u_p, Quadrature::P).db;
  return res;
}

PreparedInput prepare_input(const FockState& cat, const CatFit& fit, const BreedConfig& cfg) {
  const FockState padded = resize_cutoff(cat, cfg.cutoff);
  const FockState vacuum = make_squeezed_vacuum(std::abs(cfg.r.nats()), 0.0, cfg.cutoff);
  const Decision dec = rescale_decision(fit, cfg);
  if (dec.action == BreedAction::ReplaceWithSqueezedVacuum) return {vacuum, dec.action, dec.flagged};

  const double target = dec.action == BreedAction::RescaleToAlphaB ? cfg.alpha_b() : 2.0 * cfg.alpha_b();
  // the cluster cannot supply more squeezing than it carries
  if (std::abs(std::log(fit.alpha / target)) > std::abs(cfg.r.nats()))
    return {vacuum, BreedAction::ReplaceWithSqueezedVacuum, true};
  try {
    FockState s = rescale_state(padded, fit, target, cfg.r0());
    return {parity_align(s, fit.parity, target), dec.action, false};
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Truncation) throw;
    return {vacuum, BreedAction::ReplaceWithSqueezedVacuum, true};
  }
}

GkpTrial run_gkp_trial(const PhantmConfig& phantm, const BreedConfig& cfg, std::uint64_t master_seed,
                       std::uint32_t trial) {
  GkpTrial out;
  out.sample.seed = master_seed;
  std::vector<FockState> inputs;
  for (int lane = 0; lane < cfg.inputs(); ++lane) {
    Rng rng = seed_plan(master_seed, Stage::Breeding, trial, static_cast<std::uint32_t>(lane));
    const CatRunRecord rec = run_phantm(phantm, rng);
    out.retries += rec.retries;
    out.saturated = out.saturated || rec.saturated;
    out.truncation_events += static_cast<int>(rec.truncation_flags.size());
    out.photons.push_back(rec.total_photons);
    const CatFit fit = fit_squeezed_cat(rec.final_state);
    out.fits.push_back(fit);
    PreparedInput p = prepare_input(rec.final_state, fit, cfg);
    if (p.action == BreedAction::ReplaceWithSqueezedVacuum) ++out.sample.substitutions;
    if (p.flagged) ++out.sample.flags;
    inputs.push_back(std::move(p.state));
  }
  BreedResult br = breed_tree(inputs, cfg);
  out.sample.dq_db = br.sample.dq_db;
  out.sample.dp_db = br.sample.dp_db;
  return out;
}

}  // namespace gkp
