#if !defined(ELENE_TESTS_ISO_HPP)
#define ELENE_TESTS_ISO_HPP

// Exact graph isomorphism by backtracking, for test graphs up to ~16 nodes.

#include <algorithm>
#include <numeric>
#include <vector>

#include "elene/graph.hpp"

namespace testsupport {

namespace detail {

inline bool extend(const elene::Graph& a, const elene::Graph& b, const std::vector<int>& order,
                   std::vector<int>& map, std::vector<bool>& used, std::size_t depth) {
  if (depth == order.size()) return true;
  int u = order[depth];
  for (int cand = 0; cand < b.node_count(); ++cand) {
    if (used[static_cast<std::size_t>(cand)] || a.degree(u) != b.degree(cand)) continue;
    bool ok = true;
    for (std::size_t i = 0; i < depth && ok; ++i) {
      int w = order[i];
      if (a.has_edge(u, w) != b.has_edge(cand, map[static_cast<std::size_t>(w)])) ok = false;
    }
    if (!ok) continue;
    map[static_cast<std::size_t>(u)] = cand;
    used[static_cast<std::size_t>(cand)] = true;
    if (extend(a, b, order, map, used, depth + 1)) return true;
    used[static_cast<std::size_t>(cand)] = false;
  }
  return false;
}

}  // namespace detail

inline bool isomorphic(const elene::Graph& a, const elene::Graph& b) {
  if (a.node_count() != b.node_count() || a.edge_count() != b.edge_count()) return false;
  std::vector<int> da, db;
  for (int v = 0; v < a.node_count(); ++v) da.push_back(a.degree(v));
  for (int v = 0; v < b.node_count(); ++v) db.push_back(b.degree(v));
  std::sort(da.begin(), da.end());
  std::sort(db.begin(), db.end());
  if (da != db) return false;

  // Map high-degree nodes first; adjacency consistency prunes the rest.
  std::vector<int> order(static_cast<std::size_t>(a.node_count()));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int x, int y) { return a.degree(x) > a.degree(y); });
  std::vector<int> map(static_cast<std::size_t>(a.node_count()), -1);
  std::vector<bool> used(static_cast<std::size_t>(b.node_count()), false);
  return detail::extend(a, b, order, map, used, 0);
}

}  // namespace testsupport

#endif
