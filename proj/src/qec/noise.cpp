#include "gkp/qec/noise.hpp"

#include <cmath>
#include <numbers>

#include "gkp/error.hpp"

namespace gkp::qec {

double delta_from_db(double db) { return 0.5 * std::pow(10.0, -db / 20.0); }

NoiseModel NoiseModel::gaussian(double mu_q_db, double mu_p_db, double sigma_db) {
  NoiseModel m;
  m.source = Source::Gaussian;
  m.mu_q_db = mu_q_db;
  m.mu_p_db = mu_p_db;
  m.sigma_db = sigma_db;
  return m;
}

NoiseModel NoiseModel::empirical(std::vector<std::pair<double, double>> samples) {
  NoiseModel m;
  m.source = Source::Empirical;
  m.samples = std::move(samples);
  return m;
}

void NoiseModel::validate() const {
  if (source == Source::Empirical && samples.empty()) throw Error(ErrorKind::Model, "empirical noise model has no samples");
  if (source == Source::Gaussian && !(sigma_db >= 0.0)) throw Error(ErrorKind::Model, "sigma must be non-negative");
}

namespace {

std::pair<double, double> draw_pair(const NoiseModel& m, Rng& rng) {
  if (m.source == NoiseModel::Source::Empirical) {
    const auto k = static_cast<std::size_t>(rng.uniform() * m.samples.size());
    return m.samples[std::min(k, m.samples.size() - 1)];
  }
  if (m.sigma_db == 0.0) return {m.mu_q_db, m.mu_p_db};
  return {m.mu_q_db + m.sigma_db * rng.normal(), m.mu_p_db + m.sigma_db * rng.normal()};
}

double node_variance(const NoiseModel& m, Rng& rng) {
  double inv = 0.0;
  for (int mode = 0; mode < 4; ++mode) {
    const double dq = delta_from_db(draw_pair(m, rng).first);
    const double dp = delta_from_db(draw_pair(m, rng).second);
    inv += 1.0 / (dq * dq + dp * dp);
  }
  return 4.0 / inv;
}

}  // namespace

NoiseDraw draw_noise(const RhgLattice& lat, const NoiseModel& model, Rng& rng) {
  model.validate();
  NoiseDraw out;
  const int nf = lat.faces(), ne = lat.edges();
  out.node_var_face.resize(nf);
  out.node_var_edge.resize(ne);
  std::vector<double> xi_edge(ne);
  for (int e = 0; e < ne; ++e) {
    out.node_var_edge[e] = node_variance(model, rng);
    xi_edge[e] = std::sqrt(out.node_var_edge[e]) * rng.normal();
  }
  out.face_shift.resize(nf);
  out.x.resize(nf);
  const double scale = 1.0 / std::sqrt(std::numbers::pi);
  for (int f = 0; f < nf; ++f) {
    out.node_var_face[f] = node_variance(model, rng);
    double s = std::sqrt(out.node_var_face[f]) * rng.normal();
    for (int e : lat.face_edges[f]) s += xi_edge[e];
    out.face_shift[f] = s;
    out.x[f] = s * scale;
  }
  return out;
}

Eigen::MatrixXd face_covariance(const RhgLattice& lat, const NoiseDraw& draw) {
  const int nf = lat.faces();
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(nf, nf);
  std::vector<std::vector<int>> edge_faces(lat.edges());
  for (int f = 0; f < nf; ++f) {
    s(f, f) += draw.node_var_face[f];
    for (int e : lat.face_edges[f]) edge_faces[e].push_back(f);
  }
  for (int e = 0; e < lat.edges(); ++e)
    for (int f : edge_faces[e])
      for (int g : edge_faces[e]) s(f, g) += draw.node_var_edge[e];
  return s / std::numbers::pi;
}

Eigen::Matrix3d face_block_covariance(const RhgLattice& lat, const NoiseDraw& draw, int cell) {
  Eigen::Matrix3d s = Eigen::Matrix3d::Zero();
  for (int i = 0; i < 3; ++i) {
    const int f = 3 * cell + i;
    s(i, i) += draw.node_var_face[f];
    for (int j = 0; j < 3; ++j) {
      const int g = 3 * cell + j;
      for (int e : lat.face_edges[f])
        for (int e2 : lat.face_edges[g])
          if (e == e2) s(i, j) += draw.node_var_edge[e];
    }
  }
  return s / std::numbers::pi;
}

}  // namespace gkp::qec
