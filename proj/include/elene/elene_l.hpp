#if !defined(ELENE_ELENE_L_HPP)
#define ELENE_ELENE_L_HPP

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "elene/encode.hpp"
#include "elene/graph.hpp"
#include "elene/vectorize.hpp"

namespace elene {

enum class Activation { identity, relu, tanh };

// Single affine map plus elementwise nonlinearity, float64 throughout.
struct DenseMap {
  Eigen::MatrixXd w;  // out x in
  Eigen::VectorXd b;  // out
  Activation act = Activation::identity;

  Eigen::Index in() const { return w.cols(); }
  Eigen::Index out() const { return w.rows(); }
  Eigen::VectorXd apply(const Eigen::VectorXd& z) const;
};

enum class Pooling { sum, masked_mean };

// Learnable state of one layer. Embedding tables have S = (rho+1) * (k+1)
// rows addressed by l * (rho+1) + d; the edge tables repeat that block once
// per level delta in {0, 1, 2}, addressed by delta * S + l * (rho+1) + d.
struct EleneLParams {
  Mode mode = Mode::nd;
  Pooling pooling = Pooling::sum;
  int k = 0;
  int rho = 0;    // largest representable degree
  int omega = 0;  // embedding width per table

  std::array<Eigen::MatrixXd, 3> w_nd;  // S x omega
  std::array<Eigen::MatrixXd, 3> w_ed;  // (3 * S) x omega, edge-centric only

  DenseMap phi_member;    // member message, input x_root || x_u || Emb(u)
  DenseMap phi_edge;      // ego-net edge message, input x_root || e_uw || x_u .* x_w || Emb(u, w)
  DenseMap phi_node_out;  // node update head, input x_v || pooled members [|| pooled edges]
  DenseMap phi_edge_out;  // edge update head, input pooled per-root edge messages

  double gamma_nd = 0.0;
  double gamma_ed = 0.0;

  int table_rows() const { return (rho + 1) * (k + 1); }
};

// Row of the node tables for quadruplet q: one omega-chunk per degree slot.
Eigen::VectorXd embed_node(const Quadruplet& q, const EleneLParams& p);

// Symmetric edge embedding: lookup(q_u, delta_uw) + lookup(q_w, delta_wu)
// with delta_uw = l_u - l_w + 1. Levels of an ego-net edge differ by at most
// one; anything else is rejected.
Eigen::VectorXd embed_edge(const Quadruplet& q_u, const Quadruplet& q_w, const EleneLParams& p);

// Structural cache plus current features. Built once per graph; forward
// passes swap in new feature matrices.
struct EgoNetCache {
  std::vector<int> members;  // ascending node ids
  std::vector<Quadruplet> quads;
  struct EdgeRef {
    std::int64_t edge_id;
    int a_slot, b_slot;  // indices into members
  };
  std::vector<EdgeRef> edges;
};

struct EdgeContext {
  int root;
  Quadruplet q_u, q_v;  // quadruplets of the edge endpoints inside root's ego-net
};

struct LayerState {
  Mode mode = Mode::nd;
  int k = 0;
  Eigen::MatrixXd x;  // n x f node features
  Eigen::MatrixXd e;  // m x f_e edge features (0 x 0 when unused)
  std::vector<EgoNetCache> ego;
  std::vector<std::vector<EdgeContext>> edge_roots;  // per edge id, edge-centric only
};

LayerState make_layer_state(const Graph& g, int k, Mode mode, Eigen::MatrixXd x,
                            Eigen::MatrixXd e = Eigen::MatrixXd());

// Forward intermediates cached for the backward pass. Indexed per root for
// the node side and per edge id for the edge side.
struct LayerTape {
  bool valid = false;
  // node update path
  std::vector<Eigen::MatrixXd> member_in;   // phi_member inputs, one column per member
  std::vector<Eigen::MatrixXd> member_pre;  // pre-activations
  std::vector<Eigen::MatrixXd> egoedge_in;  // phi_edge inputs inside each ego-net
  std::vector<Eigen::MatrixXd> egoedge_pre;
  std::vector<Eigen::VectorXd> node_in;  // phi_node_out input
  std::vector<Eigen::VectorXd> node_pre;
  std::vector<Eigen::VectorXd> node_out;
  // edge update path
  std::vector<Eigen::MatrixXd> ctx_in;  // phi_edge inputs, one column per containing root
  std::vector<Eigen::MatrixXd> ctx_pre;
  std::vector<Eigen::VectorXd> ctx_pool;
  std::vector<Eigen::VectorXd> eout_pre;
  std::vector<Eigen::VectorXd> eout_out;
};

struct LayerGradients {
  std::array<Eigen::MatrixXd, 3> w_nd;
  std::array<Eigen::MatrixXd, 3> w_ed;
  Eigen::MatrixXd phi_member_w, phi_edge_w, phi_node_out_w, phi_edge_out_w;
  Eigen::VectorXd phi_member_b, phi_edge_b, phi_node_out_b, phi_edge_out_b;
  double gamma_nd = 0.0;
  double gamma_ed = 0.0;
  Eigen::MatrixXd x;  // gradient w.r.t. input node features
  Eigen::MatrixXd e;  // gradient w.r.t. input edge features
};

// One layer step: x_v += gamma_nd * Phi_out(v) for every node, and in
// edge-centric mode e_uv += gamma_ed * Phi_out(u, v) for every edge. Pass a
// tape to enable layer_backward.
LayerState layer_forward(const Graph& g, const LayerState& state, const EleneLParams& p,
                         int threads = 1, LayerTape* tape = nullptr);

// Exact reverse-mode gradients for all tables, map weights, gammas, and the
// input features, given upstream gradients of the outputs.
LayerGradients layer_backward(const Graph& g, const LayerState& state, const EleneLParams& p,
                              const LayerTape& tape, const Eigen::MatrixXd& dx_out,
                              const Eigen::MatrixXd& de_out, int threads = 1);

// Central-difference check of every parameter gradient under a seeded linear
// loss. Returns max |analytic - numeric| / max(1, |analytic|, |numeric|).
double grad_check(const Graph& g, const LayerState& state, const EleneLParams& p, double h,
                  std::uint64_t seed);

// Shell-sum baseline: x'_v = phi_sp((1 + eps) x_v + sum_i alpha_i *
// sum_{l(u,v)=i} x_u) with exact-distance shells i = 1..len(alphas).
Eigen::MatrixXd spnn_forward(const Graph& g, const Eigen::MatrixXd& x,
                             std::span<const double> alphas, double eps, const DenseMap& phi_sp);

// Layer parameters that reproduce spnn_forward exactly: one-hot distance
// rows in the first node table, paired relu units selecting alpha_l * x_u,
// and the residual folded into the output head. phi_sp must be affine
// (identity activation) and square; exactness holds for feature magnitudes
// up to feature_bound / 2, with rho at least the largest ego-net degree.
EleneLParams build_spnn_equivalent(int k, std::span<const double> alphas, double eps,
                                   const DenseMap& phi_sp, int rho, double feature_bound = 8.0);

// Identity-table parameters for histogram recovery: omega = S, identity
// node tables, sum pooling, and a member map that passes the embedding
// block through untouched.
EleneLParams make_recovery_params(int k, int rho, int feature_width);

// Runs the layer's member aggregation for one root under identity-table
// parameters; the pooled sum lands exactly on the sparse vectorization of
// the root's quadruplet multiset.
SparseVec recover_histogram(const Graph& g, int v, int k, const EleneLParams& p_identity);

// --- parameter / matrix serialization ---------------------------------------
//
// Text format with explicit shapes; row-major entries, max_digits10 doubles.
void write_params(std::ostream& out, const EleneLParams& p);
EleneLParams read_params(std::istream& in);
void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix_csv(std::istream& in);

}  // namespace elene

#endif
