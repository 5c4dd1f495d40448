#include "elene/vectorize.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "elene/error.hpp"

namespace elene {

std::int64_t SparseVec::at(std::int64_t index) const {
  if (index < 0 || index >= dim) raise(errc::out_of_layout, "index " + std::to_string(index));
  auto it = std::lower_bound(entries.begin(), entries.end(),
                             std::pair<std::int64_t, std::int64_t>{index, INT64_MIN});
  if (it == entries.end() || it->first != index) return 0;
  return it->second;
}

std::int64_t index_of(int slot, int l, int deg, int k, int d_max) {
  if (k < 0 || d_max < 0) raise(errc::invalid_params, "layout needs k >= 0 and d_max >= 0");
  if (slot < 0 || slot > 2 || l < 0 || l > k || deg < 0 || deg > d_max)
    raise(errc::out_of_layout, "(slot " + std::to_string(slot) + ", l " + std::to_string(l) +
                                   ", deg " + std::to_string(deg) + ") outside k = " +
                                   std::to_string(k) + ", d_max = " + std::to_string(d_max));
  auto span = static_cast<std::int64_t>(k + 1) * (d_max + 1);
  return slot * span + static_cast<std::int64_t>(l) * (d_max + 1) + deg;
}

namespace {

SparseVec from_cells(std::map<std::int64_t, std::int64_t>&& cells, std::int64_t dim, int k,
                     int d_max) {
  SparseVec v;
  v.dim = dim;
  v.k = k;
  v.d_max = d_max;
  v.entries.assign(cells.begin(), cells.end());
  return v;
}

}  // namespace

SparseVec to_sparse_vector(const QuadMultiset& ms, int k, int d_max) {
  std::map<std::int64_t, std::int64_t> cells;
  for (const auto& [q, c] : ms.entries) {
    cells[index_of(0, q.l, q.d_minus, k, d_max)] += c;
    cells[index_of(1, q.l, q.d, k, d_max)] += c;
    cells[index_of(2, q.l, q.d_plus, k, d_max)] += c;
  }
  return from_cells(std::move(cells), 3 * static_cast<std::int64_t>(k + 1) * (d_max + 1), k,
                    d_max);
}

SparseVec to_igel_vector(const QuadMultiset& ms, int k, int d_max) {
  std::map<std::int64_t, std::int64_t> cells;
  for (const auto& [q, c] : ms.entries) {
    if (q.l > k || q.d > d_max)
      raise(errc::out_of_layout, "(l " + std::to_string(q.l) + ", deg " + std::to_string(q.d) +
                                     ") outside k = " + std::to_string(k) + ", d_max = " +
                                     std::to_string(d_max));
    cells[static_cast<std::int64_t>(q.l) * (d_max + 1) + q.d] += c;
  }
  return from_cells(std::move(cells), static_cast<std::int64_t>(k + 1) * (d_max + 1), k, d_max);
}

CanonicalForm canonical_form(const QuadMultiset& ms) {
  CanonicalForm out;
  out.reserve(ms.entries.size() * 5);
  for (const auto& [q, c] : ms.entries) {
    out.push_back(q.l);
    out.push_back(q.d_minus);
    out.push_back(q.d);
    out.push_back(q.d_plus);
    out.push_back(c);
  }
  return out;
}

CanonicalForm canonical_form(const EdgeTupleMultiset& ms) {
  CanonicalForm out;
  out.reserve(ms.entries.size() * 9);
  for (const auto& [t, c] : ms.entries) {
    for (const Quadruplet* q : {&t.a, &t.b}) {
      out.push_back(q->l);
      out.push_back(q->d_minus);
      out.push_back(q->d);
      out.push_back(q->d_plus);
    }
    out.push_back(c);
  }
  return out;
}

GraphSignature graph_signature(const Graph& g, int k, Mode mode, int threads) {
  GraphSignature sig;
  sig.mode = mode;
  sig.k = k;
  if (mode == Mode::nd) {
    auto nodes = encode_graph_nd(g, k, threads);
    sig.node_forms.reserve(nodes.size());
    for (const auto& ms : nodes) sig.node_forms.push_back(canonical_form(ms));
  } else {
    auto enc = encode_graph_ed(g, k, threads);
    sig.node_forms.reserve(enc.nodes.size());
    for (const auto& ms : enc.nodes) sig.node_forms.push_back(canonical_form(ms));
    sig.edge_forms.reserve(enc.edges.size());
    for (const auto& ms : enc.edges) sig.edge_forms.push_back(canonical_form(ms));
  }
  std::sort(sig.node_forms.begin(), sig.node_forms.end());
  std::sort(sig.edge_forms.begin(), sig.edge_forms.end());
  return sig;
}

}  // namespace elene
