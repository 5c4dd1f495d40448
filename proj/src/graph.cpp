#include "elene/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "elene/error.hpp"
#include "elene/rng.hpp"

namespace elene {

Graph Graph::from_edge_list(int n, std::span<const Edge> edges) {
  if (n < 0) raise(errc::invalid_params, "node count must be non-negative");
  std::vector<Edge> canon;
  canon.reserve(edges.size());
  for (const auto& [a, b] : edges) {
    if (a < 0 || a >= n || b < 0 || b >= n)
      raise(errc::out_of_range, "edge endpoint out of range: (" + std::to_string(a) + ", " +
                                    std::to_string(b) + ") with n = " + std::to_string(n));
    if (a == b) raise(errc::self_loop, "self-loop at node " + std::to_string(a));
    canon.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(canon.begin(), canon.end());
  auto dup = std::adjacent_find(canon.begin(), canon.end());
  if (dup != canon.end())
    raise(errc::duplicate_edge, "duplicate edge (" + std::to_string(dup->first) + ", " +
                                    std::to_string(dup->second) + ")");

  Graph g;
  g.n_ = n;
  g.edges_ = std::move(canon);
  std::vector<int> deg(static_cast<std::size_t>(n), 0);
  for (const auto& [u, v] : g.edges_) {
    ++deg[u];
    ++deg[v];
  }
  g.offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (int v = 0; v < n; ++v) g.offsets_[v + 1] = g.offsets_[v] + deg[v];
  g.neighbors_.resize(static_cast<std::size_t>(g.offsets_[n]));
  std::vector<std::int64_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const auto& [u, v] : g.edges_) {
    g.neighbors_[cursor[u]++] = v;
    g.neighbors_[cursor[v]++] = u;
  }
  for (int v = 0; v < n; ++v)
    std::sort(g.neighbors_.begin() + g.offsets_[v], g.neighbors_.begin() + g.offsets_[v + 1]);
  g.max_degree_ = deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
  return g;
}

const Edge& Graph::edge(std::int64_t id) const {
  if (id < 0 || id >= edge_count()) raise(errc::not_an_edge, "edge id " + std::to_string(id));
  return edges_[static_cast<std::size_t>(id)];
}

bool Graph::has_edge(int u, int v) const {
  if (u < 0 || u >= n_ || v < 0 || v >= n_ || u == v) return false;
  auto row = neighbors(u);
  return std::binary_search(row.begin(), row.end(), v);
}

std::optional<std::int64_t> Graph::edge_id(int u, int v) const {
  if (u > v) std::swap(u, v);
  Edge key{u, v};
  auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
  if (it == edges_.end() || *it != key) return std::nullopt;
  return it - edges_.begin();
}

std::optional<int> LevelMap::at(int v) const {
  auto it = std::lower_bound(dist.begin(), dist.end(), std::pair<int, int>{v, -1});
  if (it == dist.end() || it->first != v) return std::nullopt;
  return it->second;
}

LevelMap bfs_levels(const Graph& g, int root, int k) {
  if (root < 0 || root >= g.node_count())
    raise(errc::out_of_range, "root " + std::to_string(root));
  if (k < 0) raise(errc::invalid_params, "k must be non-negative");
  LevelMap lm;
  lm.root = root;
  lm.k = k;
  std::vector<int> dist(static_cast<std::size_t>(g.node_count()), -1);
  std::vector<int> queue{root};
  dist[root] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    int u = queue[head];
    if (dist[u] == k) break;  // queue is sorted by level
    for (int w : g.neighbors(u)) {
      if (dist[w] < 0) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
    }
  }
  lm.dist.reserve(queue.size());
  std::sort(queue.begin(), queue.end());
  for (int v : queue) lm.dist.emplace_back(v, dist[v]);
  return lm;
}

EgoNet ego_subgraph(const Graph& g, int root, int k) {
  LevelMap lm = bfs_levels(g, root, k);
  EgoNet ego;
  ego.root = root;
  ego.k = k;
  ego.nodes = lm.dist;
  for (const auto& [v, lv] : ego.nodes) {
    for (int w : g.neighbors(v)) {
      if (v < w && lm.contains(w)) ego.edges.emplace_back(v, w);
    }
  }
  // membership scan already visits nodes in ascending order, so edges are
  // lexicographically sorted
  return ego;
}

Graph permute(const Graph& g, std::span<const int> perm) {
  int n = g.node_count();
  if (static_cast<int>(perm.size()) != n)
    raise(errc::not_a_bijection, "permutation size " + std::to_string(perm.size()) +
                                     " does not match n = " + std::to_string(n));
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (int v : perm) {
    if (v < 0 || v >= n || seen[v]) raise(errc::not_a_bijection, "not a bijection on [0, n)");
    seen[v] = 1;
  }
  std::vector<Edge> mapped;
  mapped.reserve(static_cast<std::size_t>(g.edge_count()));
  for (const auto& [u, v] : g.edges()) mapped.emplace_back(perm[u], perm[v]);
  return Graph::from_edge_list(n, mapped);
}

Graph make_rook(int n) {
  if (n < 1) raise(errc::invalid_params, "rook side must be >= 1");
  auto id = [n](int r, int c) { return r * n + c; };
  std::vector<Edge> edges;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      for (int c2 = c + 1; c2 < n; ++c2) edges.emplace_back(id(r, c), id(r, c2));
      for (int r2 = r + 1; r2 < n; ++r2) edges.emplace_back(id(r, c), id(r2, c));
    }
  return Graph::from_edge_list(n * n, edges);
}

Graph make_shrikhande() {
  const int side = 4;
  auto id = [](int a, int b) { return ((a % 4 + 4) % 4) * 4 + ((b % 4 + 4) % 4); };
  const int conn[3][2] = {{1, 0}, {0, 1}, {1, 1}};
  std::vector<Edge> edges;
  for (int a = 0; a < side; ++a)
    for (int b = 0; b < side; ++b)
      for (const auto& c : conn) {
        int u = id(a, b);
        int v = id(a + c[0], b + c[1]);
        if (u < v) edges.emplace_back(u, v);
        else edges.emplace_back(v, u);
      }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return Graph::from_edge_list(16, edges);
}

Graph make_cycle(int n) {
  if (n < 3) raise(errc::invalid_params, "cycle needs n >= 3");
  std::vector<Edge> edges;
  for (int v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
  edges.emplace_back(0, n - 1);
  return Graph::from_edge_list(n, edges);
}

Graph make_disjoint_triangles(int t) {
  if (t < 1) raise(errc::invalid_params, "need at least one triangle");
  std::vector<Edge> edges;
  for (int i = 0; i < t; ++i) {
    int base = 3 * i;
    edges.emplace_back(base, base + 1);
    edges.emplace_back(base, base + 2);
    edges.emplace_back(base + 1, base + 2);
  }
  return Graph::from_edge_list(3 * t, edges);
}

namespace {

// One configuration-model attempt: pair shuffled stubs, then repair loops and
// duplicate pairs by swapping them against randomly chosen good pairs.
bool pairing_attempt(int n, int d, Rng& rng, std::vector<Edge>& out) {
  std::vector<int> stubs;
  stubs.reserve(static_cast<std::size_t>(n) * d);
  for (int v = 0; v < n; ++v)
    for (int i = 0; i < d; ++i) stubs.push_back(v);
  // Fisher-Yates with the deterministic rng
  for (std::size_t i = stubs.size(); i > 1; --i)
    std::swap(stubs[i - 1], stubs[rng.below(i)]);

  std::size_t pairs = stubs.size() / 2;
  auto ends = [&stubs](std::size_t p) {
    return Edge{std::min(stubs[2 * p], stubs[2 * p + 1]), std::max(stubs[2 * p], stubs[2 * p + 1])};
  };
  auto count_multiplicity = [&](std::size_t pairs_n) {
    std::vector<Edge> all(pairs_n);
    for (std::size_t p = 0; p < pairs_n; ++p) all[p] = ends(p);
    std::sort(all.begin(), all.end());
    return all;
  };

  std::size_t budget = 200 * pairs + 1000;
  while (budget > 0) {
    // find violations afresh: loops, or pairs sharing an edge with another pair
    std::vector<Edge> sorted = count_multiplicity(pairs);
    std::vector<std::size_t> bad;
    for (std::size_t p = 0; p < pairs; ++p) {
      Edge e = ends(p);
      if (e.first == e.second) {
        bad.push_back(p);
        continue;
      }
      auto range = std::equal_range(sorted.begin(), sorted.end(), e);
      if (range.second - range.first > 1) bad.push_back(p);
    }
    if (bad.empty()) break;
    // keep at most one representative per duplicated edge so a swap can fix it
    for (std::size_t b : bad) {
      if (budget == 0) break;
      --budget;
      std::size_t other = rng.below(pairs);
      if (other == b) continue;
      // swap one stub between the two pairs
      std::swap(stubs[2 * b + 1], stubs[2 * other + 1]);
    }
  }

  std::vector<Edge> sorted = count_multiplicity(pairs);
  for (std::size_t p = 0; p + 1 < sorted.size(); ++p)
    if (sorted[p] == sorted[p + 1]) return false;
  for (const auto& e : sorted)
    if (e.first == e.second) return false;
  out = std::move(sorted);
  return true;
}

}  // namespace

Graph make_random_regular(int n, int d, std::uint64_t seed, int retries) {
  if (n < 1 || d < 0 || d >= n) raise(errc::invalid_params, "need 0 <= d < n");
  if ((static_cast<std::int64_t>(n) * d) % 2 != 0)
    raise(errc::invalid_params, "n * d must be even");
  Rng rng(seed);
  std::vector<Edge> edges;
  for (int attempt = 0; attempt < retries; ++attempt) {
    if (pairing_attempt(n, d, rng, edges)) return Graph::from_edge_list(n, edges);
  }
  raise(errc::generation_failure,
        "could not realize a simple " + std::to_string(d) + "-regular graph on " +
            std::to_string(n) + " nodes after " + std::to_string(retries) + " attempts");
}

Graph make_barabasi_albert(int n, int m_min, std::uint64_t seed) {
  if (m_min < 1 || n < m_min + 1)
    raise(errc::invalid_params, "need n >= m_min + 1 and m_min >= 1");
  Rng rng(seed);
  std::vector<Edge> edges;
  std::vector<int> endpoint_pool;  // every edge contributes both endpoints
  auto add_edge = [&](int u, int v) {
    edges.emplace_back(std::min(u, v), std::max(u, v));
    endpoint_pool.push_back(u);
    endpoint_pool.push_back(v);
  };
  for (int v = 1; v <= m_min; ++v) add_edge(0, v);
  std::vector<int> targets;
  for (int v = m_min + 1; v < n; ++v) {
    targets.clear();
    while (static_cast<int>(targets.size()) < m_min) {
      int t = endpoint_pool[rng.below(endpoint_pool.size())];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
    }
    for (int t : targets) add_edge(v, t);
  }
  return Graph::from_edge_list(n, edges);
}

Graph read_edge_list(std::istream& in) {
  std::string line;
  long long n = -1, m = -1;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line[0] == '#') continue;
    std::istringstream header(line);
    if (!(header >> n >> m) || n < 0 || m < 0 || n > 2147483647)
      raise(errc::parse_error, "bad header at line " + std::to_string(line_no));
    break;
  }
  if (n < 0) raise(errc::parse_error, "missing header line");
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long i = 0; i < m; ++i) {
    if (!std::getline(in, line))
      raise(errc::parse_error, "expected " + std::to_string(m) + " edge lines, got " +
                                   std::to_string(i));
    ++line_no;
    std::istringstream row(line);
    long long a, b;
    if (!(row >> a >> b)) raise(errc::parse_error, "bad edge at line " + std::to_string(line_no));
    std::string rest;
    if (row >> rest) raise(errc::parse_error, "trailing tokens at line " + std::to_string(line_no));
    if (a < 0 || a >= n || b < 0 || b >= n)
      raise(errc::parse_error, "endpoint out of range at line " + std::to_string(line_no));
    edges.emplace_back(static_cast<int>(a), static_cast<int>(b));
  }
  try {
    return Graph::from_edge_list(static_cast<int>(n), edges);
  } catch (const Error& e) {
    if (e.code() == errc::invalid_params) throw;
    raise(errc::parse_error, std::string("invalid edge list: ") + e.what());
  }
}

Graph read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(errc::parse_error, "cannot open " + path);
  return read_edge_list(in);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << g.node_count() << ' ' << g.edge_count() << '\n';
  for (const auto& [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

void write_edge_list_file(const std::string& path, const Graph& g) {
  std::ofstream out(path);
  if (!out) raise(errc::parse_error, "cannot open " + path + " for writing");
  write_edge_list(out, g);
  out.flush();
  if (!out) raise(errc::parse_error, "write failed for " + path);
}

}  // namespace elene
