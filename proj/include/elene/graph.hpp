#if !defined(ELENE_GRAPH_HPP)
#define ELENE_GRAPH_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace elene {

using Edge = std::pair<int, int>;

// Simple undirected graph, immutable after construction. Adjacency is stored
// CSR-style with sorted neighbor rows; the canonical edge list keeps (u, v)
// with u < v in lexicographic order, and the position in that list is the
// stable edge id.
class Graph {
 public:
  Graph() = default;

  // Validates ids, rejects self-loops and duplicates (in either orientation).
  static Graph from_edge_list(int n, std::span<const Edge> edges);

  int node_count() const { return n_; }
  std::int64_t edge_count() const { return static_cast<std::int64_t>(edges_.size()); }

  std::span<const int> neighbors(int v) const {
    return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
  }
  int degree(int v) const { return static_cast<int>(offsets_[v + 1] - offsets_[v]); }
  int max_degree() const { return max_degree_; }

  std::span<const Edge> edges() const { return edges_; }
  const Edge& edge(std::int64_t id) const;

  bool has_edge(int u, int v) const;
  // Id of the canonical edge {u, v}, or nullopt when absent.
  std::optional<std::int64_t> edge_id(int u, int v) const;

 private:
  int n_ = 0;
  int max_degree_ = 0;
  std::vector<std::int64_t> offsets_{0};
  std::vector<int> neighbors_;
  std::vector<Edge> edges_;
};

// Distances from a root, truncated at k: nodes with l(root, u) <= k only,
// sorted by node id.
struct LevelMap {
  int root = -1;
  int k = 0;
  std::vector<std::pair<int, int>> dist;

  std::optional<int> at(int v) const;
  bool contains(int v) const { return at(v).has_value(); }
  std::size_t size() const { return dist.size(); }
};

// Induced subgraph on the k-ball around a root. Nodes carry their distance
// from the root; edges are induced, canonical (u < v, lexicographic).
struct EgoNet {
  int root = -1;
  int k = 0;
  std::vector<std::pair<int, int>> nodes;  // (node, distance), sorted by node
  std::vector<Edge> edges;
};

// Breadth-first distances out to depth k. k = 0 yields just the root.
LevelMap bfs_levels(const Graph& g, int root, int k);

EgoNet ego_subgraph(const Graph& g, int root, int k);

// Relabels nodes: node v becomes perm[v]. perm must be a bijection on [0, n).
Graph permute(const Graph& g, std::span<const int> perm);

// --- deterministic generator families ------------------------------------

// n x n rook's graph: cells of an n x n grid, adjacent iff same row or column.
Graph make_rook(int n);
// The 16-node Shrikhande graph: Z4 x Z4 with connection set {+-(1,0), +-(0,1), +-(1,1)}.
Graph make_shrikhande();
Graph make_cycle(int n);
Graph make_disjoint_triangles(int t);
// Configuration-model d-regular graph; loops/multi-edges are repaired by
// deterministic pair swaps, with up to `retries` full restarts.
Graph make_random_regular(int n, int d, std::uint64_t seed, int retries = 100);
// Preferential attachment: star on m_min + 1 nodes, then each new node draws
// m_min distinct targets from the repeated-endpoint list.
Graph make_barabasi_albert(int n, int m_min, std::uint64_t seed);

// --- edge-list text format -------------------------------------------------
//
// Optional '#' comment lines, then a "n m" header, then m lines "u v" with
// u < v in lexicographic order. write_edge_list emits exactly this shape.
Graph read_edge_list(std::istream& in);
Graph read_edge_list_file(const std::string& path);
void write_edge_list(std::ostream& out, const Graph& g);
void write_edge_list_file(const std::string& path, const Graph& g);

}  // namespace elene

#endif
