#include "gkp/qec/decoder.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>

#include "gkp/error.hpp"
#include "gkp/qec/blossom.hpp"

namespace gkp::qec {
namespace {

Eigen::MatrixXd precision(const Eigen::MatrixXd& sigma) {
  if (sigma.rows() != sigma.cols()) throw Error(ErrorKind::InvalidDimension, "covariance must be square");
  Eigen::LDLT<Eigen::MatrixXd> ldlt(sigma);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || ldlt.vectorD().minCoeff() <= 0.0) {
    const Eigen::MatrixXd ridged = sigma + 1e-9 * Eigen::MatrixXd::Identity(sigma.rows(), sigma.cols());
    return ridged.inverse();
  }
  return ldlt.solve(Eigen::MatrixXd::Identity(sigma.rows(), sigma.cols()));
}

}  // namespace

Eigen::VectorXi correlated_bin(const Eigen::VectorXd& x, const Eigen::MatrixXd& sigma) {
  const int n = static_cast<int>(x.size());
  if (sigma.rows() != n) throw Error(ErrorKind::InvalidDimension, "covariance does not match record");
  if (n > 8) throw Error(ErrorKind::InvalidDimension, "binning block too large");
  const Eigen::MatrixXd p = precision(sigma);

  // Candidates floor(x) + {-1, 0, 1, 2} per coordinate, visited in
  // lexicographic order so a strict comparison keeps the smallest tie.
  Eigen::VectorXi base(n);
  for (int i = 0; i < n; ++i) base(i) = static_cast<int>(std::floor(x(i))) - 1;
  Eigen::VectorXi best = base, cur = base;
  double best_cost = std::numeric_limits<double>::infinity();
  Eigen::VectorXd r(n);
  int total = 1;
  for (int i = 0; i < n; ++i) total *= 4;
  for (int code = 0; code < total; ++code) {
    int c = code;
    for (int i = n - 1; i >= 0; --i) {
      cur(i) = base(i) + c % 4;
      c /= 4;
    }
    for (int i = 0; i < n; ++i) r(i) = x(i) - cur(i);
    const double cost = r.dot(p * r);
    if (cost < best_cost) {
      best_cost = cost;
      best = cur;
    }
  }
  return best;
}

double flip_probability(int i, const Eigen::VectorXd& x, const Eigen::VectorXi& q, const Eigen::MatrixXd& sigma,
                        bool* flagged) {
  const int n = static_cast<int>(x.size());
  if (i < 0 || i >= n || q.size() != n) throw Error(ErrorKind::InvalidDimension, "flip index out of range");
  const Eigen::MatrixXd p = precision(sigma);
  const Eigen::VectorXd r0 = x - q.cast<double>();
  // E_k = 1/2 (r0 - k e_i)^T P (r0 - k e_i) = E_0 - k b + k^2 a / 2
  const double b = p.row(i).dot(r0);
  const double a = p(i, i);
  std::array<double, 2 * kFlipWindow + 1> e{};
  double emin = std::numeric_limits<double>::infinity();
  for (int k = -kFlipWindow; k <= kFlipWindow; ++k) {
    e[k + kFlipWindow] = -k * b + 0.5 * k * k * a;
    emin = std::min(emin, e[k + kFlipWindow]);
  }
  double odd = 0.0, all = 0.0;
  for (int k = -kFlipWindow; k <= kFlipWindow; ++k) {
    const double w = std::exp(-(e[k + kFlipWindow] - emin));
    all += w;
    if (k % 2 != 0) odd += w;
  }
  if (!(all > 0.0) || !std::isfinite(all)) {
    if (flagged) *flagged = true;
    return 0.5;
  }
  return odd / all;
}

HomodyneRecord decode_inner(const RhgLattice& lat, const NoiseDraw& draw) {
  HomodyneRecord rec;
  rec.x = draw.x;
  rec.q_binned.resize(lat.faces());
  rec.flip_prob.resize(lat.faces());
  Eigen::VectorXd xb(3);
  for (int c = 0; c < lat.cells(); ++c) {
    const Eigen::MatrixXd s = face_block_covariance(lat, draw, c);
    for (int i = 0; i < 3; ++i) xb(i) = draw.x[3 * c + i];
    const Eigen::VectorXi q = correlated_bin(xb, s);
    for (int i = 0; i < 3; ++i) {
      bool flag = false;
      rec.q_binned[3 * c + i] = q(i);
      rec.flip_prob[3 * c + i] = flip_probability(i, xb, q, s, &flag);
      rec.flagged += flag ? 1 : 0;
    }
  }
  return rec;
}

std::vector<int> extract_syndrome(const std::vector<int>& q_binned, const RhgLattice& lat) {
  if (static_cast<int>(q_binned.size()) != lat.faces())
    throw Error(ErrorKind::InvalidDimension, "record does not cover every face");
  std::vector<int> defects;
  for (int c = 0; c < lat.cubes(); ++c) {
    int parity = 0;
    for (int f : lat.cube_faces[c]) parity ^= bit_of(q_binned[f]);
    if (parity) defects.push_back(c);
  }
  return defects;
}

double face_cost(double p) {
  const double pc = std::clamp(p, 1e-300, 0.5);
  return std::clamp(std::log((1.0 - pc) / pc), 1e-12, 20.0);
}

MatchingGraph matching_graph(const std::vector<int>& defects, const HomodyneRecord& rec, const RhgLattice& lat) {
  MatchingGraph g;
  g.defects = defects;
  const int nd = static_cast<int>(defects.size());
  std::vector<double> cost(lat.faces());
  for (int f = 0; f < lat.faces(); ++f) cost[f] = face_cost(rec.flip_prob[f]);

  g.weight.assign(nd, std::vector<double>(nd, 0.0));
  g.pred_face.assign(nd, {});
  using Item = std::pair<double, int>;
  for (int s = 0; s < nd; ++s) {
    std::vector<double> dist(lat.cubes(), std::numeric_limits<double>::infinity());
    std::vector<int>& pred = g.pred_face[s];
    pred.assign(lat.cubes(), -1);
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[defects[s]] = 0.0;
    pq.push({0.0, defects[s]});
    while (!pq.empty()) {
      const auto [du, u] = pq.top();
      pq.pop();
      if (du > dist[u]) continue;
      for (int f : lat.cube_faces[u]) {
        const auto& fc = lat.face_cubes[f];
        const int v = fc[0] == u ? fc[1] : fc[0];
        const double dv = du + cost[f];
        if (dv < dist[v]) {
          dist[v] = dv;
          pred[v] = f;
          pq.push({dv, v});
        }
      }
    }
    for (int t = 0; t < nd; ++t) g.weight[s][t] = dist[defects[t]];
  }
  return g;
}

std::vector<int> correction(const MatchingGraph& g, const RhgLattice& lat) {
  const int nd = static_cast<int>(g.defects.size());
  std::vector<int> corr(lat.faces(), 0);
  if (nd == 0) return corr;
  // Integer weights for the exact solver; 1e6 resolution on costs <= 20 per face.
  std::vector<std::vector<std::int64_t>> w(nd, std::vector<std::int64_t>(nd, 0));
  for (int i = 0; i < nd; ++i)
    for (int j = 0; j < nd; ++j) w[i][j] = std::llround(0.5 * (g.weight[i][j] + g.weight[j][i]) * 1e6);
  for (const auto& [a, b] : min_weight_perfect_matching(w)) {
    int cube = g.defects[b];
    while (cube != g.defects[a]) {
      const int f = g.pred_face[a][cube];
      if (f < 0) throw Error(ErrorKind::InternalInvariant, "broken shortest-path tree");
      corr[f] ^= 1;
      const auto& fc = lat.face_cubes[f];
      cube = fc[0] == cube ? fc[1] : fc[0];
    }
  }
  return corr;
}

int logical_parity(const std::vector<int>& q_binned, const std::vector<int>& corr, const RhgLattice& lat) {
  int parity = 0;
  for (int f : lat.logical_sheet) parity ^= bit_of(q_binned[f]) ^ corr[f];
  return parity;
}

}  // namespace gkp::qec
