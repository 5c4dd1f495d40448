#if !defined(ELENE_TESTS_ORACLES_HPP)
#define ELENE_TESTS_ORACLES_HPP

// Reference implementations used only by tests. Everything here recomputes
// results from the definitions with throwaway quadratic algorithms and its
// own random source, so agreement with the library is meaningful.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <queue>
#include <random>
#include <vector>

#include "elene/encode.hpp"
#include "elene/graph.hpp"

namespace testsupport {

// Single-source distances with a plain unbounded BFS; -1 = unreachable.
inline std::vector<int> bfs_all(const elene::Graph& g, int root) {
  std::vector<int> dist(static_cast<std::size_t>(g.node_count()), -1);
  std::queue<int> q;
  dist[static_cast<std::size_t>(root)] = 0;
  q.push(root);
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int w : g.neighbors(u))
      if (dist[static_cast<std::size_t>(w)] < 0) {
        dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(u)] + 1;
        q.push(w);
      }
  }
  return dist;
}

// Node-centric encoding straight from the definition: collect the ball,
// then classify every member's incident induced edges by level difference.
inline elene::QuadMultiset oracle_encode_nd(const elene::Graph& g, int root, int k) {
  std::vector<int> dist = bfs_all(g, root);
  std::vector<int> members;
  for (int u = 0; u < g.node_count(); ++u)
    if (dist[static_cast<std::size_t>(u)] >= 0 && dist[static_cast<std::size_t>(u)] <= k)
      members.push_back(u);

  std::vector<elene::Quadruplet> quads;
  for (int u : members) {
    elene::Quadruplet q;
    q.l = dist[static_cast<std::size_t>(u)];
    for (int w : members) {
      if (w == u || !g.has_edge(u, w)) continue;
      ++q.d;
      int dw = dist[static_cast<std::size_t>(w)];
      if (dw == q.l - 1) ++q.d_minus;
      if (dw == q.l + 1) ++q.d_plus;
    }
    quads.push_back(q);
  }

  elene::QuadMultiset ms;
  ms.root = root;
  ms.k = k;
  ms.entries = elene::QuadMultiset::aggregate(std::move(quads));
  return ms;
}

// Edge-centric encoding from the definition: intersect the two balls, take
// the induced subgraph, measure distances inside it (sentinel k + 1 when a
// member cannot reach an endpoint there), and pair up the per-endpoint
// quadruplets.
inline elene::EdgeTupleMultiset oracle_encode_ed(const elene::Graph& g, std::int64_t edge_id,
                                                 int k) {
  auto [eu, ev] = g.edge(edge_id);
  std::vector<int> du = bfs_all(g, eu);
  std::vector<int> dv = bfs_all(g, ev);
  std::vector<int> members;
  for (int u = 0; u < g.node_count(); ++u)
    if (du[static_cast<std::size_t>(u)] >= 0 && du[static_cast<std::size_t>(u)] <= k &&
        dv[static_cast<std::size_t>(u)] >= 0 && dv[static_cast<std::size_t>(u)] <= k)
      members.push_back(u);

  // Induced subgraph on the intersection, with local ids.
  std::vector<int> local(static_cast<std::size_t>(g.node_count()), -1);
  for (std::size_t i = 0; i < members.size(); ++i)
    local[static_cast<std::size_t>(members[i])] = static_cast<int>(i);
  std::vector<elene::Edge> inner;
  for (std::size_t i = 0; i < members.size(); ++i)
    for (std::size_t j = i + 1; j < members.size(); ++j)
      if (g.has_edge(members[i], members[j]))
        inner.push_back({static_cast<int>(i), static_cast<int>(j)});
  elene::Graph sub = elene::Graph::from_edge_list(static_cast<int>(members.size()), inner);

  auto clamp = [&](std::vector<int> d) {
    for (int& x : d)
      if (x < 0) x = k + 1;
    return d;
  };
  std::vector<int> iu = clamp(bfs_all(sub, local[static_cast<std::size_t>(eu)]));
  std::vector<int> iv = clamp(bfs_all(sub, local[static_cast<std::size_t>(ev)]));

  auto quad_at = [&](int m, const std::vector<int>& level) {
    elene::Quadruplet q;
    q.l = level[static_cast<std::size_t>(m)];
    for (int w : sub.neighbors(m)) {
      ++q.d;
      if (level[static_cast<std::size_t>(w)] == q.l - 1) ++q.d_minus;
      if (level[static_cast<std::size_t>(w)] == q.l + 1) ++q.d_plus;
    }
    return q;
  };

  std::vector<std::pair<elene::SymTuple, std::int64_t>> flat;
  for (std::size_t i = 0; i < members.size(); ++i)
    flat.emplace_back(elene::SymTuple(quad_at(static_cast<int>(i), iu),
                                      quad_at(static_cast<int>(i), iv)),
                      1);
  std::sort(flat.begin(), flat.end());
  std::vector<std::pair<elene::SymTuple, std::int64_t>> entries;
  for (const auto& [t, c] : flat) {
    if (!entries.empty() && entries.back().first == t)
      entries.back().second += c;
    else
      entries.emplace_back(t, c);
  }

  elene::EdgeTupleMultiset ms;
  ms.edge_id = edge_id;
  ms.u = eu;
  ms.v = ev;
  ms.k = k;
  ms.entries = std::move(entries);
  return ms;
}

// Gnp-style random graph on its own generator, disconnected pieces allowed.
inline elene::Graph random_graph(int n, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto coin = [&]() { return (rng() >> 11) * 0x1.0p-53 < p; };
  std::vector<elene::Edge> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (coin()) edges.push_back({u, v});
  return elene::Graph::from_edge_list(n, edges);
}

inline std::vector<int> random_permutation(int n, std::uint64_t seed) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(seed);
  for (int i = n - 1; i > 0; --i) {
    auto j = static_cast<std::size_t>(rng() % static_cast<std::uint64_t>(i + 1));
    std::swap(perm[static_cast<std::size_t>(i)], perm[j]);
  }
  return perm;
}

}  // namespace testsupport

#endif
