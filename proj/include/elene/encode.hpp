#if !defined(ELENE_ENCODE_HPP)
#define ELENE_ENCODE_HPP

#include <compare>
#include <cstdint>
#include <vector>

#include "elene/graph.hpp"

namespace elene {

enum class Mode { nd, ed };

// One ego-net member, seen from the root: distance, edges toward the previous
// level, induced degree, edges toward the next level. Edges to the same level
// are the remainder d - d_minus - d_plus.
struct Quadruplet {
  int l = 0;
  int d_minus = 0;
  int d = 0;
  int d_plus = 0;
  auto operator<=>(const Quadruplet&) const = default;
};

// Multiset of member quadruplets for one node-centric ego-net. Entries are
// kept sorted lexicographically, so equal encodings compare equal directly.
struct QuadMultiset {
  int root = -1;
  int k = 0;
  std::vector<std::pair<Quadruplet, std::int64_t>> entries;

  std::int64_t total() const;  // = ego-net size
  bool operator==(const QuadMultiset& o) const { return entries == o.entries; }

  static std::vector<std::pair<Quadruplet, std::int64_t>> aggregate(std::vector<Quadruplet> quads);
};

// Intersection of the k-balls around the two endpoints of an edge, with the
// induced edge set. Member distances are measured inside the intersection
// subgraph itself; members unreachable from an endpoint there carry the
// sentinel distance k + 1.
struct EgoIntersection {
  int u = -1;
  int v = -1;
  int k = 0;
  struct Member {
    int node;
    int dist_u;
    int dist_v;
  };
  std::vector<Member> nodes;  // sorted by node id
  std::vector<Edge> edges;    // induced, canonical order
};

// Unordered pair of per-endpoint quadruplets for one intersection member.
// Canonical form keeps the smaller quadruplet first, which makes the record
// invariant under endpoint swap.
struct SymTuple {
  Quadruplet a, b;
  SymTuple() = default;
  SymTuple(Quadruplet x, Quadruplet y);
  auto operator<=>(const SymTuple&) const = default;
};

// Edge-centric encoding of one edge: multiset of SymTuples over intersection
// members, sorted like QuadMultiset entries.
struct EdgeTupleMultiset {
  std::int64_t edge_id = -1;
  int u = -1;
  int v = -1;
  int k = 0;
  std::vector<std::pair<SymTuple, std::int64_t>> entries;

  std::int64_t total() const;  // = intersection size
  bool operator==(const EdgeTupleMultiset& o) const { return entries == o.entries; }
};

struct EncodeStats {
  // Distinct edges touched by the bounded level BFS, summed over roots. Per
  // root this never exceeds min{m, d_max^k}.
  std::int64_t edges_traversed = 0;
};

// Node-centric encoding: level map first, then one scan over the induced
// ego-net edges classifying both endpoints of each.
QuadMultiset encode_node_nd(const Graph& g, int v, int k, std::int64_t* edges_traversed = nullptr);

// Per-member detail of one ego-net: members ascending by id, aligned
// distances and quadruplets, induced edges as member-slot pairs.
struct EgoView {
  int root = -1;
  int k = 0;
  std::vector<int> members;
  std::vector<int> dist;
  std::vector<Quadruplet> quads;
  struct EdgeSlots {
    int a_slot, b_slot;  // members[a_slot] < members[b_slot]
  };
  std::vector<EdgeSlots> edges;
};

EgoView ego_view(const Graph& g, int v, int k);

std::vector<QuadMultiset> encode_graph_nd(const Graph& g, int k, int threads = 1,
                                          EncodeStats* stats = nullptr);

EgoIntersection intersect_ego(const Graph& g, int u, int v, int k);

EdgeTupleMultiset encode_edge_ed(const Graph& g, std::int64_t edge_id, int k);

struct EdEncoding {
  std::vector<QuadMultiset> nodes;
  std::vector<EdgeTupleMultiset> edges;
};

// Edge-centric encoding of the whole graph; includes the node-centric part.
EdEncoding encode_graph_ed(const Graph& g, int k, int threads = 1, EncodeStats* stats = nullptr);

// min{m, d_max^k} with a saturating power, the per-root traversal budget.
std::int64_t traversal_budget(std::int64_t m, int d_max, int k);

}  // namespace elene

#endif
