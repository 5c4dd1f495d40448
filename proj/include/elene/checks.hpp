#if !defined(ELENE_CHECKS_HPP)
#define ELENE_CHECKS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "elene/elene_l.hpp"

namespace elene {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;  // margin measured, or the first counterexample
};

// Structural identities the encoder is built around: refinement over 1-WL,
// the degree-histogram marginal, strongly-regular closed forms and the
// node-centric blind spot, edge-centric separation, histogram recovery, and
// shell-aggregation emulation.
std::vector<CheckResult> structure_checks();

// Finite-difference validation of the layer's analytic gradients across
// modes and pooling choices.
std::vector<CheckResult> gradient_checks();

// Seeded uniform fill of every table and map, for checks and tests.
EleneLParams random_layer_params(Mode mode, Pooling pooling, int k, int rho, int omega,
                                 Eigen::Index f, Eigen::Index fe, Eigen::Index hidden,
                                 Activation act, std::uint64_t seed);

}  // namespace elene

#endif
