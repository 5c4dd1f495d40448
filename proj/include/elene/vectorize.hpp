#if !defined(ELENE_VECTORIZE_HPP)
#define ELENE_VECTORIZE_HPP

#include <cstdint>
#include <vector>

#include "elene/encode.hpp"

namespace elene {

// Sparse non-negative integer vector over an explicit (k, d_max) layout.
// Entries are (index, count) with ascending indices, zeros omitted.
struct SparseVec {
  std::int64_t dim = 0;
  int k = 0;
  int d_max = 0;
  std::vector<std::pair<std::int64_t, std::int64_t>> entries;

  std::int64_t at(std::int64_t index) const;
  std::int64_t nonzeros() const { return static_cast<std::int64_t>(entries.size()); }
  bool operator==(const SparseVec& o) const = default;
};

// Flat index of (slot, level, degree) in the 3 * (k+1) * (d_max+1) layout.
// Slot 0 holds edges-toward-root counts, slot 1 induced degrees, slot 2
// edges-away-from-root counts.
std::int64_t index_of(int slot, int l, int deg, int k, int d_max);

// Scatters each quadruplet (l, d-, d, d+) with frequency f into the three
// slots at (slot, l, degree-component). Per-slot mass equals the ego-net size.
SparseVec to_sparse_vector(const QuadMultiset& ms, int k, int d_max);

// (level, induced degree) histogram over the (k+1) * (d_max+1) layout; equals
// the slot-1 restriction of to_sparse_vector.
SparseVec to_igel_vector(const QuadMultiset& ms, int k, int d_max);

// Order-free flattening of a multiset: sorted (tuple..., count) runs. Two
// multisets are equal iff their canonical forms are equal.
using CanonicalForm = std::vector<std::int64_t>;
CanonicalForm canonical_form(const QuadMultiset& ms);
CanonicalForm canonical_form(const EdgeTupleMultiset& ms);

// Relabeling-invariant signature of a whole graph: the sorted canonical forms
// of all node encodings, plus all edge encodings in edge-centric mode.
struct GraphSignature {
  Mode mode = Mode::nd;
  int k = 0;
  std::vector<CanonicalForm> node_forms;
  std::vector<CanonicalForm> edge_forms;
  bool operator==(const GraphSignature& o) const {
    return node_forms == o.node_forms && edge_forms == o.edge_forms;
  }
};

GraphSignature graph_signature(const Graph& g, int k, Mode mode, int threads = 1);

}  // namespace elene

#endif
