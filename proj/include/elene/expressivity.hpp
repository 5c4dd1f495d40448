#if !defined(ELENE_EXPRESSIVITY_HPP)
#define ELENE_EXPRESSIVITY_HPP

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "elene/encode.hpp"
#include "elene/graph.hpp"

namespace elene {

// Stable 1-WL coloring. Color ids are canonical: each round assigns ids by
// the sorted order of the (old color, sorted neighbor colors) signatures, so
// isomorphic graphs get identical histograms.
struct WLColoring {
  std::vector<int> colors;
  std::vector<std::pair<int, std::int64_t>> histogram;  // color -> count, ascending
  int rounds = 0;
};

// Color refinement from a uniform start until the partition stabilizes.
// max_rounds < 0 means the default bound n.
WLColoring wl1_refine(const Graph& g, int max_rounds = -1);

// 1-WL graph pair test. Refines the disjoint union so both graphs share one
// color space, then compares per-graph stable histograms.
bool wl1_distinguish(const Graph& a, const Graph& b);

// True iff the relabeling-invariant encoding signatures differ.
bool elene_distinguish(const Graph& a, const Graph& b, int k, Mode mode);

struct SrgParams {
  int n = 0;
  int d = 0;
  int lambda = 0;
  int mu = 0;
  bool operator==(const SrgParams&) const = default;
};

struct NotStronglyRegular {
  int u = -1;
  int v = -1;
  std::string reason;
};

// Exhaustive strong-regularity test: regular degree, every adjacent pair
// shares lambda common neighbors, every non-adjacent pair shares mu. The
// failure value names the first violating pair.
std::variant<SrgParams, NotStronglyRegular> check_srg(const Graph& g);

// Closed-form node-centric encoding of a strongly regular graph at k = 2
// (any connected strongly regular graph has diameter <= 2):
//   (0, 0, d, d)            once      (the root)
//   (1, 1, d, d-lambda-1)   d times   (neighbors)
//   (2, mu, d, 0)           n-d-1 times (the rest; mu edges back toward the
//                                        root's neighborhood)
// Zero-frequency rows are dropped. Requires mu >= 1 whenever n > d + 1.
QuadMultiset srg_closed_form_nd(const SrgParams& p);

}  // namespace elene

#endif
