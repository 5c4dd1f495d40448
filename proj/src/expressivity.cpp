#include "elene/expressivity.hpp"

#include <algorithm>
#include <map>

#include "elene/error.hpp"
#include "elene/vectorize.hpp"

namespace elene {

WLColoring wl1_refine(const Graph& g, int max_rounds) {
  int n = g.node_count();
  if (max_rounds < 0) max_rounds = n;
  WLColoring wl;
  wl.colors.assign(static_cast<std::size_t>(n), 0);
  int classes = n > 0 ? 1 : 0;

  using Sig = std::pair<int, std::vector<int>>;
  std::vector<Sig> sigs(static_cast<std::size_t>(n));
  while (wl.rounds < max_rounds) {
    ++wl.rounds;
    for (int v = 0; v < n; ++v) {
      auto& [own, nbr] = sigs[v];
      own = wl.colors[v];
      nbr.clear();
      for (int w : g.neighbors(v)) nbr.push_back(wl.colors[w]);
      std::sort(nbr.begin(), nbr.end());
    }
    // canonical ids: rank of the signature in sorted order
    std::vector<Sig> uniq(sigs);
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    for (int v = 0; v < n; ++v)
      wl.colors[v] = static_cast<int>(
          std::lower_bound(uniq.begin(), uniq.end(), sigs[v]) - uniq.begin());
    int new_classes = static_cast<int>(uniq.size());
    if (new_classes == classes) break;  // refinement never merges, so this is stability
    classes = new_classes;
  }

  std::map<int, std::int64_t> hist;
  for (int c : wl.colors) ++hist[c];
  wl.histogram.assign(hist.begin(), hist.end());
  return wl;
}

namespace {

Graph disjoint_union(const Graph& a, const Graph& b) {
  std::vector<Edge> edges(a.edges().begin(), a.edges().end());
  int off = a.node_count();
  for (const auto& [u, v] : b.edges()) edges.emplace_back(u + off, v + off);
  return Graph::from_edge_list(a.node_count() + b.node_count(), edges);
}

}  // namespace

bool wl1_distinguish(const Graph& a, const Graph& b) {
  if (a.node_count() != b.node_count()) return true;
  WLColoring joint = wl1_refine(disjoint_union(a, b));
  std::map<int, std::int64_t> ha, hb;
  for (int v = 0; v < a.node_count(); ++v) ++ha[joint.colors[v]];
  for (int v = 0; v < b.node_count(); ++v) ++hb[joint.colors[a.node_count() + v]];
  return ha != hb;
}

bool elene_distinguish(const Graph& a, const Graph& b, int k, Mode mode) {
  return !(graph_signature(a, k, mode) == graph_signature(b, k, mode));
}

std::variant<SrgParams, NotStronglyRegular> check_srg(const Graph& g) {
  int n = g.node_count();
  if (n < 2) raise(errc::invalid_params, "strong regularity needs n >= 2");
  int d = g.degree(0);
  for (int v = 1; v < n; ++v)
    if (g.degree(v) != d)
      return NotStronglyRegular{0, v, "degrees differ: " + std::to_string(d) + " vs " +
                                          std::to_string(g.degree(v))};
  int lambda = -1, mu = -1;
  for (int u = 0; u < n; ++u) {
    auto nu = g.neighbors(u);
    for (int v = u + 1; v < n; ++v) {
      auto nv = g.neighbors(v);
      int common = 0;
      for (std::size_t i = 0, j = 0; i < nu.size() && j < nv.size();) {
        if (nu[i] < nv[j]) ++i;
        else if (nu[i] > nv[j]) ++j;
        else ++common, ++i, ++j;
      }
      if (g.has_edge(u, v)) {
        if (lambda < 0) lambda = common;
        else if (common != lambda)
          return NotStronglyRegular{u, v, "adjacent pair shares " + std::to_string(common) +
                                              " neighbors, expected " + std::to_string(lambda)};
      } else {
        if (mu < 0) mu = common;
        else if (common != mu)
          return NotStronglyRegular{u, v, "non-adjacent pair shares " + std::to_string(common) +
                                              " neighbors, expected " + std::to_string(mu)};
      }
    }
  }
  // edgeless / complete graphs leave one class empty
  if (lambda < 0) lambda = 0;
  if (mu < 0) mu = 0;
  return SrgParams{n, d, lambda, mu};
}

QuadMultiset srg_closed_form_nd(const SrgParams& p) {
  if (p.n < 1 || p.d < 0 || p.d > p.n - 1)
    raise(errc::invalid_params, "need 0 <= d <= n - 1");
  if (p.d >= 1 && (p.lambda < 0 || p.lambda > p.d - 1))
    raise(errc::invalid_params, "need 0 <= lambda <= d - 1");
  int rest = p.n - p.d - 1;
  if (rest > 0) {
    if (p.mu < 1 || p.mu > p.d)
      raise(errc::invalid_params,
            "need 1 <= mu <= d when non-neighbors exist (diameter must be 2)");
    if (static_cast<std::int64_t>(p.d) * (p.d - p.lambda - 1) !=
        static_cast<std::int64_t>(rest) * p.mu)
      raise(errc::invalid_params, "inconsistent parameters: d(d - lambda - 1) != (n - d - 1) mu");
  }
  QuadMultiset ms;
  ms.k = 2;
  ms.entries.emplace_back(Quadruplet{0, 0, p.d, p.d}, 1);
  if (p.d > 0) ms.entries.emplace_back(Quadruplet{1, 1, p.d, p.d - p.lambda - 1}, p.d);
  if (rest > 0) ms.entries.emplace_back(Quadruplet{2, p.mu, p.d, 0}, rest);
  return ms;
}

}  // namespace elene
