#pragma once

// Maximum-weight matching on general graphs (Edmonds' blossom algorithm
// with dual variables, O(n^3)), and the minimum-weight perfect matching
// built on it.

#include <cstdint>
#include <utility>
#include <vector>

namespace gkp::qec {

struct WeightedEdge {
  int u, v;
  std::int64_t w;
};

/// mate[v] = partner of v or -1.  With max_cardinality, returns a maximum
/// weight matching among those of maximum cardinality.
std::vector<int> max_weight_matching(int n, const std::vector<WeightedEdge>& edges, bool max_cardinality);

/// Perfect matching minimizing the total weight on the complete graph with
/// symmetric integer weights w[i][j] >= 0.  n must be even.
std::vector<std::pair<int, int>> min_weight_perfect_matching(const std::vector<std::vector<std::int64_t>>& w);

}  // namespace gkp::qec
