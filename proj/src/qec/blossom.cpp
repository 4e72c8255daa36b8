#include "gkp/qec/blossom.hpp"

#include <algorithm>
#include <functional>

#include "gkp/error.hpp"

namespace gkp::qec {
namespace {

class Matcher {
 public:
  Matcher(int n, const std::vector<WeightedEdge>& edges, bool maxcard)
      : nv_(n), ne_(static_cast<int>(edges.size())), maxcard_(maxcard) {
    // Doubled weights keep every dual update integral.
    for (const auto& e : edges) edges_.push_back({e.u, e.v, 2 * e.w});
    std::int64_t maxw = 0;
    for (const auto& e : edges_) maxw = std::max(maxw, e.w);
    endpoint_.resize(2 * ne_);
    for (int p = 0; p < 2 * ne_; ++p) endpoint_[p] = p % 2 == 0 ? edges_[p / 2].u : edges_[p / 2].v;
    neighbend_.resize(nv_);
    for (int k = 0; k < ne_; ++k) {
      neighbend_[edges_[k].u].push_back(2 * k + 1);
      neighbend_[edges_[k].v].push_back(2 * k);
    }
    mate_.assign(nv_, -1);
    label_.assign(2 * nv_, 0);
    labelend_.assign(2 * nv_, -1);
    inblossom_.resize(nv_);
    for (int i = 0; i < nv_; ++i) inblossom_[i] = i;
    blossomparent_.assign(2 * nv_, -1);
    blossomchilds_.assign(2 * nv_, {});
    blossombase_.assign(2 * nv_, -1);
    for (int i = 0; i < nv_; ++i) blossombase_[i] = i;
    blossomendps_.assign(2 * nv_, {});
    bestedge_.assign(2 * nv_, -1);
    blossombestedges_.assign(2 * nv_, {});
    hasbestedges_.assign(2 * nv_, false);
    for (int b = 2 * nv_ - 1; b >= nv_; --b) unused_.push_back(b);
    dualvar_.assign(2 * nv_, 0);
    for (int i = 0; i < nv_; ++i) dualvar_[i] = maxw;
    allowedge_.assign(ne_, false);
  }

  std::vector<int> run();

 private:
  std::int64_t slack(int k) const {
    const auto& e = edges_[k];
    return dualvar_[e.u] + dualvar_[e.v] - 2 * e.w;
  }

  void leaves(int b, std::vector<int>& out) const {
    if (b < nv_) {
      out.push_back(b);
      return;
    }
    for (int t : blossomchilds_[b]) leaves(t, out);
  }

  std::vector<int> leaves(int b) const {
    std::vector<int> out;
    leaves(b, out);
    return out;
  }

  void assign_label(int w, int t, int p);
  int scan_blossom(int v, int w);
  void add_blossom(int base, int k);
  void expand_blossom(int b, bool endstage);
  void augment_blossom(int b, int v);
  void augment_matching(int k);

  int nv_, ne_;
  bool maxcard_;
  std::vector<WeightedEdge> edges_;
  std::vector<int> endpoint_;
  std::vector<std::vector<int>> neighbend_;
  std::vector<int> mate_, label_, labelend_, inblossom_, blossomparent_;
  std::vector<std::vector<int>> blossomchilds_, blossomendps_, blossombestedges_;
  std::vector<bool> hasbestedges_;
  std::vector<int> blossombase_, bestedge_, unused_;
  std::vector<std::int64_t> dualvar_;
  std::vector<bool> allowedge_;
  std::vector<int> queue_;
};

void Matcher::assign_label(int w, int t, int p) {
  const int b = inblossom_[w];
  label_[w] = label_[b] = t;
  labelend_[w] = labelend_[b] = p;
  bestedge_[w] = bestedge_[b] = -1;
  if (t == 1) {
    leaves(b, queue_);
  } else if (t == 2) {
    const int base = blossombase_[b];
    assign_label(endpoint_[mate_[base]], 1, mate_[base] ^ 1);
  }
}

int Matcher::scan_blossom(int v, int w) {
  std::vector<int> path;
  int base = -1;
  while (v != -1 || w != -1) {
    int b = inblossom_[v];
    if (label_[b] & 4) {
      base = blossombase_[b];
      break;
    }
    path.push_back(b);
    label_[b] = 5;
    if (labelend_[b] == -1) {
      v = -1;
    } else {
      v = endpoint_[labelend_[b]];
      b = inblossom_[v];
      v = endpoint_[labelend_[b]];
    }
    if (w != -1) std::swap(v, w);
  }
  for (int b : path) label_[b] = 1;
  return base;
}

void Matcher::add_blossom(int base, int k) {
  int v = edges_[k].u, w = edges_[k].v;
  const int bb = inblossom_[base];
  int bv = inblossom_[v], bw = inblossom_[w];
  const int b = unused_.back();
  unused_.pop_back();
  blossombase_[b] = base;
  blossomparent_[b] = -1;
  blossomparent_[bb] = b;
  std::vector<int> path, endps;
  while (bv != bb) {
    blossomparent_[bv] = b;
    path.push_back(bv);
    endps.push_back(labelend_[bv]);
    v = endpoint_[labelend_[bv]];
    bv = inblossom_[v];
  }
  path.push_back(bb);
  std::reverse(path.begin(), path.end());
  std::reverse(endps.begin(), endps.end());
  endps.push_back(2 * k);
  while (bw != bb) {
    blossomparent_[bw] = b;
    path.push_back(bw);
    endps.push_back(labelend_[bw] ^ 1);
    w = endpoint_[labelend_[bw]];
    bw = inblossom_[w];
  }
  blossomchilds_[b] = path;
  blossomendps_[b] = endps;
  label_[b] = 1;
  labelend_[b] = labelend_[bb];
  dualvar_[b] = 0;
  for (int leaf : leaves(b)) {
    if (label_[inblossom_[leaf]] == 2) queue_.push_back(leaf);
    inblossom_[leaf] = b;
  }
  std::vector<int> bestedgeto(2 * nv_, -1);
  for (int sub : path) {
    std::vector<std::vector<int>> nblists;
    if (!hasbestedges_[sub]) {
      for (int leaf : leaves(sub)) {
        std::vector<int> l;
        for (int p : neighbend_[leaf]) l.push_back(p / 2);
        nblists.push_back(std::move(l));
      }
    } else {
      nblists.push_back(blossombestedges_[sub]);
    }
    for (const auto& nblist : nblists)
      for (int kk : nblist) {
        int i = edges_[kk].u, j = edges_[kk].v;
        if (inblossom_[j] == b) std::swap(i, j);
        const int bj = inblossom_[j];
        if (bj != b && label_[bj] == 1 && (bestedgeto[bj] == -1 || slack(kk) < slack(bestedgeto[bj])))
          bestedgeto[bj] = kk;
      }
    blossombestedges_[sub].clear();
    hasbestedges_[sub] = false;
    bestedge_[sub] = -1;
  }
  blossombestedges_[b].clear();
  for (int kk : bestedgeto)
    if (kk != -1) blossombestedges_[b].push_back(kk);
  hasbestedges_[b] = true;
  bestedge_[b] = -1;
  for (int kk : blossombestedges_[b])
    if (bestedge_[b] == -1 || slack(kk) < slack(bestedge_[b])) bestedge_[b] = kk;
}

void Matcher::expand_blossom(int b, bool endstage) {
  for (int s : blossomchilds_[b]) {
    blossomparent_[s] = -1;
    if (s < nv_) {
      inblossom_[s] = s;
    } else if (endstage && dualvar_[s] == 0) {
      expand_blossom(s, endstage);
    } else {
      for (int leaf : leaves(s)) inblossom_[leaf] = s;
    }
  }
  if (!endstage && label_[b] == 2) {
    const auto& childs = blossomchilds_[b];
    const auto& endps = blossomendps_[b];
    const int len = static_cast<int>(childs.size());
    auto at = [len](const std::vector<int>& vec, int idx) { return vec[((idx % len) + len) % len]; };
    const int entrychild = inblossom_[endpoint_[labelend_[b] ^ 1]];
    int j = static_cast<int>(std::find(childs.begin(), childs.end(), entrychild) - childs.begin());
    int jstep, endptrick;
    if (j & 1) {
      j -= len;
      jstep = 1;
      endptrick = 0;
    } else {
      jstep = -1;
      endptrick = 1;
    }
    int p = labelend_[b];
    while (j != 0) {
      label_[endpoint_[p ^ 1]] = 0;
      label_[endpoint_[at(endps, j - endptrick) ^ endptrick ^ 1]] = 0;
      assign_label(endpoint_[p ^ 1], 2, p);
      allowedge_[at(endps, j - endptrick) / 2] = true;
      j += jstep;
      p = at(endps, j - endptrick) ^ endptrick;
      allowedge_[p / 2] = true;
      j += jstep;
    }
    int bv = at(childs, j);
    label_[endpoint_[p ^ 1]] = label_[bv] = 2;
    labelend_[endpoint_[p ^ 1]] = labelend_[bv] = p;
    bestedge_[bv] = -1;
    j += jstep;
    while (at(childs, j) != entrychild) {
      bv = at(childs, j);
      if (label_[bv] == 1) {
        j += jstep;
        continue;
      }
      int found = -1;
      for (int leaf : leaves(bv))
        if (label_[leaf] != 0) {
          found = leaf;
          break;
        }
      if (found != -1) {
        label_[found] = 0;
        label_[endpoint_[mate_[blossombase_[bv]]]] = 0;
        assign_label(found, 2, labelend_[found]);
      }
      j += jstep;
    }
  }
  label_[b] = labelend_[b] = -1;
  blossomchilds_[b].clear();
  blossomendps_[b].clear();
  blossombase_[b] = -1;
  blossombestedges_[b].clear();
  hasbestedges_[b] = false;
  bestedge_[b] = -1;
  unused_.push_back(b);
}

void Matcher::augment_blossom(int b, int v) {
  int t = v;
  while (blossomparent_[t] != b) t = blossomparent_[t];
  if (t >= nv_) augment_blossom(t, v);
  auto& childs = blossomchilds_[b];
  auto& endps = blossomendps_[b];
  const int len = static_cast<int>(childs.size());
  auto at = [len](const std::vector<int>& vec, int idx) { return vec[((idx % len) + len) % len]; };
  const int i = static_cast<int>(std::find(childs.begin(), childs.end(), t) - childs.begin());
  int j = i, jstep, endptrick;
  if (i & 1) {
    j -= len;
    jstep = 1;
    endptrick = 0;
  } else {
    jstep = -1;
    endptrick = 1;
  }
  while (j != 0) {
    j += jstep;
    t = at(childs, j);
    const int p = at(endps, j - endptrick) ^ endptrick;
    if (t >= nv_) augment_blossom(t, endpoint_[p]);
    j += jstep;
    t = at(childs, j);
    if (t >= nv_) augment_blossom(t, endpoint_[p ^ 1]);
    mate_[endpoint_[p]] = p ^ 1;
    mate_[endpoint_[p ^ 1]] = p;
  }
  std::rotate(childs.begin(), childs.begin() + i, childs.end());
  std::rotate(endps.begin(), endps.begin() + i, endps.end());
  blossombase_[b] = blossombase_[childs[0]];
}

void Matcher::augment_matching(int k) {
  const int v = edges_[k].u, w = edges_[k].v;
  const std::pair<int, int> starts[2] = {{v, 2 * k + 1}, {w, 2 * k}};
  for (auto [s, p] : starts) {
    while (true) {
      const int bs = inblossom_[s];
      if (bs >= nv_) augment_blossom(bs, s);
      mate_[s] = p;
      if (labelend_[bs] == -1) break;
      const int t = endpoint_[labelend_[bs]];
      const int bt = inblossom_[t];
      s = endpoint_[labelend_[bt]];
      const int j = endpoint_[labelend_[bt] ^ 1];
      if (bt >= nv_) augment_blossom(bt, j);
      mate_[j] = labelend_[bt];
      p = labelend_[bt] ^ 1;
    }
  }
}

std::vector<int> Matcher::run() {
  for (int stage = 0; stage < nv_; ++stage) {
    std::fill(label_.begin(), label_.end(), 0);
    std::fill(bestedge_.begin(), bestedge_.end(), -1);
    for (int b = nv_; b < 2 * nv_; ++b) {
      blossombestedges_[b].clear();
      hasbestedges_[b] = false;
    }
    std::fill(allowedge_.begin(), allowedge_.end(), false);
    queue_.clear();
    for (int v = 0; v < nv_; ++v)
      if (mate_[v] == -1 && label_[inblossom_[v]] == 0) assign_label(v, 1, -1);

    bool augmented = false;
    while (true) {
      while (!queue_.empty() && !augmented) {
        const int v = queue_.back();
        queue_.pop_back();
        for (int p : neighbend_[v]) {
          const int k = p / 2;
          const int w = endpoint_[p];
          if (inblossom_[v] == inblossom_[w]) continue;
          std::int64_t kslack = 0;
          if (!allowedge_[k]) {
            kslack = slack(k);
            if (kslack <= 0) allowedge_[k] = true;
          }
          if (allowedge_[k]) {
            if (label_[inblossom_[w]] == 0) {
              assign_label(w, 2, p ^ 1);
            } else if (label_[inblossom_[w]] == 1) {
              const int base = scan_blossom(v, w);
              if (base >= 0) {
                add_blossom(base, k);
              } else {
                augment_matching(k);
                augmented = true;
                break;
              }
            } else if (label_[w] == 0) {
              label_[w] = 2;
              labelend_[w] = p ^ 1;
            }
          } else if (label_[inblossom_[w]] == 1) {
            const int b = inblossom_[v];
            if (bestedge_[b] == -1 || kslack < slack(bestedge_[b])) bestedge_[b] = k;
          } else if (label_[w] == 0) {
            if (bestedge_[w] == -1 || kslack < slack(bestedge_[w])) bestedge_[w] = k;
          }
        }
      }
      if (augmented) break;

      int deltatype = -1, deltaedge = -1, deltablossom = -1;
      std::int64_t delta = 0;
      if (!maxcard_) {
        deltatype = 1;
        delta = *std::min_element(dualvar_.begin(), dualvar_.begin() + nv_);
      }
      for (int v = 0; v < nv_; ++v)
        if (label_[inblossom_[v]] == 0 && bestedge_[v] != -1) {
          const std::int64_t d = slack(bestedge_[v]);
          if (deltatype == -1 || d < delta) {
            delta = d;
            deltatype = 2;
            deltaedge = bestedge_[v];
          }
        }
      for (int b = 0; b < 2 * nv_; ++b)
        if (blossomparent_[b] == -1 && label_[b] == 1 && bestedge_[b] != -1) {
          const std::int64_t d = slack(bestedge_[b]) / 2;
          if (deltatype == -1 || d < delta) {
            delta = d;
            deltatype = 3;
            deltaedge = bestedge_[b];
          }
        }
      for (int b = nv_; b < 2 * nv_; ++b)
        if (blossombase_[b] >= 0 && blossomparent_[b] == -1 && label_[b] == 2 &&
            (deltatype == -1 || dualvar_[b] < delta)) {
          delta = dualvar_[b];
          deltatype = 4;
          deltablossom = b;
        }
      if (deltatype == -1) {
        deltatype = 1;
        delta = std::max<std::int64_t>(0, *std::min_element(dualvar_.begin(), dualvar_.begin() + nv_));
      }

      for (int v = 0; v < nv_; ++v) {
        if (label_[inblossom_[v]] == 1) dualvar_[v] -= delta;
        else if (label_[inblossom_[v]] == 2) dualvar_[v] += delta;
      }
      for (int b = nv_; b < 2 * nv_; ++b)
        if (blossombase_[b] >= 0 && blossomparent_[b] == -1) {
          if (label_[b] == 1) dualvar_[b] += delta;
          else if (label_[b] == 2) dualvar_[b] -= delta;
        }

      if (deltatype == 1) break;
      if (deltatype == 2) {
        allowedge_[deltaedge] = true;
        int i = edges_[deltaedge].u, j = edges_[deltaedge].v;
        if (label_[inblossom_[i]] == 0) std::swap(i, j);
        queue_.push_back(i);
      } else if (deltatype == 3) {
        allowedge_[deltaedge] = true;
        queue_.push_back(edges_[deltaedge].u);
      } else {
        expand_blossom(deltablossom, false);
      }
    }
    if (!augmented) break;
    for (int b = nv_; b < 2 * nv_; ++b)
      if (blossomparent_[b] == -1 && blossombase_[b] >= 0 && label_[b] == 1 && dualvar_[b] == 0)
        expand_blossom(b, true);
  }
  std::vector<int> out(nv_, -1);
  for (int v = 0; v < nv_; ++v)
    if (mate_[v] >= 0) out[v] = endpoint_[mate_[v]];
  return out;
}

}  // namespace

std::vector<int> max_weight_matching(int n, const std::vector<WeightedEdge>& edges, bool max_cardinality) {
  if (n <= 0 || edges.empty()) return std::vector<int>(std::max(n, 0), -1);
  for (const auto& e : edges)
    if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n || e.u == e.v)
      throw Error(ErrorKind::InvalidParameter, "bad matching edge");
  return Matcher(n, edges, max_cardinality).run();
}

std::vector<std::pair<int, int>> min_weight_perfect_matching(const std::vector<std::vector<std::int64_t>>& w) {
  const int n = static_cast<int>(w.size());
  if (n % 2 != 0) throw Error(ErrorKind::InternalInvariant, "perfect matching needs an even node count");
  if (n == 0) return {};
  std::int64_t maxw = 0;
  for (const auto& row : w)
    for (std::int64_t v : row) maxw = std::max(maxw, v);
  std::vector<WeightedEdge> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edges.push_back({i, j, maxw + 1 - w[i][j]});
  const std::vector<int> mate = max_weight_matching(n, edges, true);
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < n; ++i) {
    if (mate[i] < 0) throw Error(ErrorKind::InternalInvariant, "matching is not perfect");
    if (i < mate[i]) out.emplace_back(i, mate[i]);
  }
  return out;
}

}  // namespace gkp::qec
