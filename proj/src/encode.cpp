#include "elene/encode.hpp"

#include <algorithm>

#include "elene/detail/parallel.hpp"
#include "elene/error.hpp"

namespace elene {

std::int64_t QuadMultiset::total() const {
  std::int64_t t = 0;
  for (const auto& [q, c] : entries) t += c;
  return t;
}

std::vector<std::pair<Quadruplet, std::int64_t>> QuadMultiset::aggregate(
    std::vector<Quadruplet> quads) {
  std::sort(quads.begin(), quads.end());
  std::vector<std::pair<Quadruplet, std::int64_t>> out;
  for (const auto& q : quads) {
    if (!out.empty() && out.back().first == q) ++out.back().second;
    else out.emplace_back(q, 1);
  }
  return out;
}

SymTuple::SymTuple(Quadruplet x, Quadruplet y) {
  if (y < x) std::swap(x, y);
  a = x;
  b = y;
}

std::int64_t EdgeTupleMultiset::total() const {
  std::int64_t t = 0;
  for (const auto& [q, c] : entries) t += c;
  return t;
}

std::int64_t traversal_budget(std::int64_t m, int d_max, int k) {
  std::int64_t p = 1;
  for (int i = 0; i < k; ++i) {
    if (d_max == 0) return 0;
    if (p > m / d_max) return m;  // saturated past m, min is m
    p *= d_max;
  }
  return std::min(m, p);
}

namespace {

// Per-worker BFS state, reused across roots via epoch stamps so repeated
// encodes never pay an O(n) reset.
struct Scratch {
  std::vector<int> dist;
  std::vector<std::uint32_t> stamp;
  std::vector<std::uint32_t> expanded;
  std::vector<int> order;  // members in BFS discovery order
  std::uint32_t epoch = 0;

  void init(std::size_t n) {
    dist.assign(n, 0);
    stamp.assign(n, 0);
    expanded.assign(n, 0);
    epoch = 0;
  }

  bool member(int v) const { return stamp[v] == epoch; }

  // Bounded BFS. Counts each scanned edge once: a scan a->b is new unless b
  // was already expanded this epoch.
  void levels(const Graph& g, int root, int k, std::int64_t* traversed) {
    ++epoch;
    if (epoch == 0) {  // wrapped; stamps are stale
      init(dist.size());
      epoch = 1;
    }
    order.clear();
    order.push_back(root);
    stamp[root] = epoch;
    dist[root] = 0;
    std::int64_t seen = 0;
    for (std::size_t head = 0; head < order.size(); ++head) {
      int u = order[head];
      if (dist[u] == k) break;
      expanded[u] = epoch;
      for (int w : g.neighbors(u)) {
        if (expanded[w] != epoch) ++seen;
        if (stamp[w] != epoch) {
          stamp[w] = epoch;
          dist[w] = dist[u] + 1;
          order.push_back(w);
        }
      }
    }
    if (traversed) *traversed += seen;
  }
};

QuadMultiset encode_with_scratch(const Graph& g, Scratch& s, int v, int k,
                                 std::int64_t* traversed) {
  s.levels(g, v, k, traversed);
  std::vector<Quadruplet> quads;
  quads.reserve(s.order.size());
  for (int a : s.order) {
    int dm = 0, dz = 0, dp = 0;
    for (int b : g.neighbors(a)) {
      if (!s.member(b)) continue;
      int delta = s.dist[b] - s.dist[a];
      if (delta < 0) ++dm;
      else if (delta == 0) ++dz;
      else ++dp;
    }
    quads.push_back({s.dist[a], dm, dm + dz + dp, dp});
  }
  QuadMultiset ms;
  ms.root = v;
  ms.k = k;
  ms.entries = QuadMultiset::aggregate(std::move(quads));
  return ms;
}

}  // namespace

QuadMultiset encode_node_nd(const Graph& g, int v, int k, std::int64_t* edges_traversed) {
  if (v < 0 || v >= g.node_count()) raise(errc::out_of_range, "node " + std::to_string(v));
  if (k < 0) raise(errc::invalid_params, "k must be non-negative");
  Scratch s;
  s.init(static_cast<std::size_t>(g.node_count()));
  std::int64_t seen = 0;
  QuadMultiset ms = encode_with_scratch(g, s, v, k, &seen);
  if (edges_traversed) *edges_traversed = seen;
  return ms;
}

EgoView ego_view(const Graph& g, int v, int k) {
  if (v < 0 || v >= g.node_count()) raise(errc::out_of_range, "node " + std::to_string(v));
  if (k < 0) raise(errc::invalid_params, "k must be non-negative");
  Scratch s;
  s.init(static_cast<std::size_t>(g.node_count()));
  s.levels(g, v, k, nullptr);
  EgoView view;
  view.root = v;
  view.k = k;
  view.members.assign(s.order.begin(), s.order.end());
  std::sort(view.members.begin(), view.members.end());
  auto slot_of = [&view](int node) {
    return static_cast<int>(std::lower_bound(view.members.begin(), view.members.end(), node) -
                            view.members.begin());
  };
  view.dist.reserve(view.members.size());
  view.quads.reserve(view.members.size());
  for (std::size_t i = 0; i < view.members.size(); ++i) {
    int a = view.members[i];
    int dm = 0, dz = 0, dp = 0;
    for (int b : g.neighbors(a)) {
      if (!s.member(b)) continue;
      int delta = s.dist[b] - s.dist[a];
      if (delta < 0) ++dm;
      else if (delta == 0) ++dz;
      else ++dp;
      if (a < b) view.edges.push_back({static_cast<int>(i), slot_of(b)});
    }
    view.dist.push_back(s.dist[a]);
    view.quads.push_back({s.dist[a], dm, dm + dz + dp, dp});
  }
  return view;
}

std::vector<QuadMultiset> encode_graph_nd(const Graph& g, int k, int threads,
                                          EncodeStats* stats) {
  if (k < 0) raise(errc::invalid_params, "k must be non-negative");
  int n = g.node_count();
  std::vector<QuadMultiset> out(static_cast<std::size_t>(n));
  int t = detail::clamp_threads(threads, n);
  std::vector<std::int64_t> traversed(static_cast<std::size_t>(t), 0);
  detail::parallel_chunks(n, t, [&](int w, std::int64_t lo, std::int64_t hi) {
    Scratch s;
    s.init(static_cast<std::size_t>(n));
    for (std::int64_t v = lo; v < hi; ++v)
      out[v] = encode_with_scratch(g, s, static_cast<int>(v), k, &traversed[w]);
  });
  if (stats) {
    stats->edges_traversed = 0;
    for (std::int64_t c : traversed) stats->edges_traversed += c;
  }
  return out;
}

namespace {

// Two-ball scratch for edge-centric encoding, reused across edges.
struct EdScratch {
  Scratch from_u, from_v;
  std::vector<int> slot;  // node -> member index, valid when slot_stamp matches
  std::vector<std::uint32_t> slot_stamp;
  std::uint32_t epoch = 0;
  // intersection subgraph, CSR over member indices
  std::vector<int> members;
  std::vector<int> ioffsets;
  std::vector<int> ineighbors;
  std::vector<int> idist_u, idist_v;
  std::vector<int> iqueue;

  void init(std::size_t n) {
    from_u.init(n);
    from_v.init(n);
    slot.assign(n, 0);
    slot_stamp.assign(n, 0);
    epoch = 0;
  }

  // BFS inside the intersection from member index src; -1 marks unreachable.
  void inner_bfs(int src, std::vector<int>& d) {
    d.assign(members.size(), -1);
    iqueue.clear();
    iqueue.push_back(src);
    d[src] = 0;
    for (std::size_t head = 0; head < iqueue.size(); ++head) {
      int a = iqueue[head];
      for (int i = ioffsets[a]; i < ioffsets[a + 1]; ++i) {
        int b = ineighbors[i];
        if (d[b] < 0) {
          d[b] = d[a] + 1;
          iqueue.push_back(b);
        }
      }
    }
  }

  void build(const Graph& g, int u, int v, int k) {
    ++epoch;
    if (epoch == 0) {
      init(slot.size());
      epoch = 1;
    }
    from_u.levels(g, u, k, nullptr);
    from_v.levels(g, v, k, nullptr);
    members.clear();
    for (int w : from_v.order)
      if (from_u.member(w)) members.push_back(w);
    std::sort(members.begin(), members.end());
    for (std::size_t i = 0; i < members.size(); ++i) {
      slot[members[i]] = static_cast<int>(i);
      slot_stamp[members[i]] = epoch;
    }
    ioffsets.assign(members.size() + 1, 0);
    ineighbors.clear();
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (int b : g.neighbors(members[i]))
        if (slot_stamp[b] == epoch) ineighbors.push_back(slot[b]);
      ioffsets[i + 1] = static_cast<int>(ineighbors.size());
    }
    inner_bfs(slot[u], idist_u);
    inner_bfs(slot[v], idist_v);
    // unreachable members get the sentinel distance k + 1
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (idist_u[i] < 0) idist_u[i] = k + 1;
      if (idist_v[i] < 0) idist_v[i] = k + 1;
    }
  }
};

EgoIntersection intersection_from(const EdScratch& s, int u, int v, int k) {
  EgoIntersection inter;
  inter.u = u;
  inter.v = v;
  inter.k = k;
  inter.nodes.reserve(s.members.size());
  for (std::size_t i = 0; i < s.members.size(); ++i)
    inter.nodes.push_back({s.members[i], s.idist_u[i], s.idist_v[i]});
  for (std::size_t i = 0; i < s.members.size(); ++i)
    for (int j = s.ioffsets[i]; j < s.ioffsets[i + 1]; ++j) {
      int b = s.ineighbors[j];
      if (static_cast<int>(i) < b) inter.edges.emplace_back(s.members[i], s.members[b]);
    }
  return inter;
}

EdgeTupleMultiset encode_edge_with_scratch(const Graph& g, EdScratch& s, std::int64_t edge_id,
                                           int k) {
  const Edge& e = g.edge(edge_id);
  s.build(g, e.first, e.second, k);
  std::vector<SymTuple> tuples;
  tuples.reserve(s.members.size());
  for (std::size_t i = 0; i < s.members.size(); ++i) {
    int dmu = 0, dzu = 0, dpu = 0, dmv = 0, dzv = 0, dpv = 0;
    for (int j = s.ioffsets[i]; j < s.ioffsets[i + 1]; ++j) {
      int b = s.ineighbors[j];
      int du = s.idist_u[b] - s.idist_u[i];
      int dv = s.idist_v[b] - s.idist_v[i];
      if (du < 0) ++dmu;
      else if (du == 0) ++dzu;
      else ++dpu;
      if (dv < 0) ++dmv;
      else if (dv == 0) ++dzv;
      else ++dpv;
    }
    int deg = s.ioffsets[i + 1] - s.ioffsets[i];
    Quadruplet qu{s.idist_u[i], dmu, deg, dpu};
    Quadruplet qv{s.idist_v[i], dmv, deg, dpv};
    tuples.emplace_back(qu, qv);
  }
  std::sort(tuples.begin(), tuples.end());
  EdgeTupleMultiset ms;
  ms.edge_id = edge_id;
  ms.u = e.first;
  ms.v = e.second;
  ms.k = k;
  for (const auto& t : tuples) {
    if (!ms.entries.empty() && ms.entries.back().first == t) ++ms.entries.back().second;
    else ms.entries.emplace_back(t, 1);
  }
  return ms;
}

}  // namespace

EgoIntersection intersect_ego(const Graph& g, int u, int v, int k) {
  if (k < 1) raise(errc::invalid_params, "edge-centric encoding needs k >= 1");
  if (!g.has_edge(u, v))
    raise(errc::not_an_edge, "(" + std::to_string(u) + ", " + std::to_string(v) + ")");
  EdScratch s;
  s.init(static_cast<std::size_t>(g.node_count()));
  s.build(g, u, v, k);
  return intersection_from(s, u, v, k);
}

EdgeTupleMultiset encode_edge_ed(const Graph& g, std::int64_t edge_id, int k) {
  if (k < 1) raise(errc::invalid_params, "edge-centric encoding needs k >= 1");
  EdScratch s;
  s.init(static_cast<std::size_t>(g.node_count()));
  return encode_edge_with_scratch(g, s, edge_id, k);
}

EdEncoding encode_graph_ed(const Graph& g, int k, int threads, EncodeStats* stats) {
  if (k < 1) raise(errc::invalid_params, "edge-centric encoding needs k >= 1");
  EdEncoding enc;
  enc.nodes = encode_graph_nd(g, k, threads, stats);
  std::int64_t m = g.edge_count();
  enc.edges.resize(static_cast<std::size_t>(m));
  detail::parallel_chunks(m, threads, [&](int, std::int64_t lo, std::int64_t hi) {
    EdScratch s;
    s.init(static_cast<std::size_t>(g.node_count()));
    for (std::int64_t e = lo; e < hi; ++e)
      enc.edges[e] = encode_edge_with_scratch(g, s, e, k);
  });
  return enc;
}

}  // namespace elene
