#include "elene/checks.hpp"

#include <cmath>
#include <sstream>
#include <variant>

#include "elene/expressivity.hpp"
#include "elene/rng.hpp"

namespace elene {

namespace {

std::string srg_str(const SrgParams& p) {
  std::ostringstream out;
  out << "(" << p.n << "," << p.d << "," << p.lambda << "," << p.mu << ")";
  return out.str();
}

Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, double scale, Rng& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = scale * (2.0 * rng.unit() - 1.0);
  return m;
}

Eigen::MatrixXd random_features(int rows, Eigen::Index cols, double scale, Rng& rng) {
  return random_matrix(rows, cols, scale, rng);
}

bool expect_srg(const Graph& g, const SrgParams& want, std::string& detail) {
  auto res = check_srg(g);
  if (std::holds_alternative<NotStronglyRegular>(res)) {
    detail = "expected " + srg_str(want) + ", graph judged not strongly regular: " +
             std::get<NotStronglyRegular>(res).reason;
    return false;
  }
  auto got = std::get<SrgParams>(res);
  if (!(got == want)) {
    detail = "expected " + srg_str(want) + ", measured " + srg_str(got);
    return false;
  }
  return true;
}

CheckResult check_wl1_vs_encoding() {
  CheckResult r{"wl1-blind-pair", false, ""};
  Graph c6 = make_cycle(6);
  Graph tri2 = make_disjoint_triangles(2);
  bool wl = wl1_distinguish(c6, tri2);
  bool enc = elene_distinguish(c6, tri2, 1, Mode::nd);
  r.pass = !wl && enc;
  r.detail = std::string("1-WL ") + (wl ? "separates" : "merges") + " the pair, encoding " +
             (enc ? "separates" : "merges") + " it";
  return r;
}

CheckResult check_igel_marginal() {
  CheckResult r{"igel-marginal", true, ""};
  int graphs = 0;
  for (std::uint64_t seed = 1; seed <= 20 && r.pass; ++seed) {
    Graph g = make_barabasi_albert(24, 2, seed);
    int d_max = g.max_degree();
    for (int k = 1; k <= 3 && r.pass; ++k) {
      std::int64_t offset = static_cast<std::int64_t>(k + 1) * (d_max + 1);
      for (int v = 0; v < g.node_count() && r.pass; ++v) {
        QuadMultiset ms = encode_node_nd(g, v, k);
        SparseVec full = to_sparse_vector(ms, k, d_max);
        SparseVec igel = to_igel_vector(ms, k, d_max);
        for (std::int64_t i = 0; i < igel.dim && r.pass; ++i)
          if (igel.at(i) != full.at(offset + i)) {
            r.pass = false;
            std::ostringstream out;
            out << "seed " << seed << " node " << v << " k " << k << " index " << i
                << ": histogram " << igel.at(i) << " vs middle slot " << full.at(offset + i);
            r.detail = out.str();
          }
      }
    }
    ++graphs;
  }
  if (r.pass) r.detail = std::to_string(graphs) + " seeded graphs, all three depths";
  return r;
}

CheckResult check_srg_parameters() {
  CheckResult r{"srg-parameters", true, ""};
  struct Case {
    Graph g;
    SrgParams want;
  };
  Case cases[] = {
      {make_rook(3), {9, 4, 1, 2}},   {make_rook(4), {16, 6, 2, 2}},
      {make_shrikhande(), {16, 6, 2, 2}}, {make_rook(5), {25, 8, 3, 2}},
      {make_cycle(5), {5, 2, 0, 1}},
  };
  for (const auto& c : cases)
    if (!expect_srg(c.g, c.want, r.detail)) {
      r.pass = false;
      return r;
    }
  // A path must be rejected: degrees differ.
  std::vector<Edge> path_edges{{0, 1}, {1, 2}, {2, 3}};
  Graph path = Graph::from_edge_list(4, path_edges);
  if (!std::holds_alternative<NotStronglyRegular>(check_srg(path))) {
    r.pass = false;
    r.detail = "a 4-path was accepted as strongly regular";
    return r;
  }
  r.detail = "rook 3/4/5, the 6-regular 16-node triangular lattice graph, the 5-cycle";
  return r;
}

CheckResult check_srg_closed_form() {
  CheckResult r{"srg-closed-form", true, ""};
  Graph graphs[] = {make_rook(3), make_rook(4), make_rook(5), make_shrikhande(), make_cycle(5)};
  for (const Graph& g : graphs) {
    auto params = std::get<SrgParams>(check_srg(g));
    QuadMultiset want = srg_closed_form_nd(params);
    for (int v = 0; v < g.node_count(); ++v) {
      QuadMultiset got = encode_node_nd(g, v, 2);
      if (!(got == want)) {
        r.pass = false;
        std::ostringstream out;
        out << "node " << v << " of the " << srg_str(params)
            << " graph disagrees with the closed form";
        r.detail = out.str();
        return r;
      }
    }
  }
  r.detail = "all nodes of five strongly regular graphs match at depth 2";
  return r;
}

CheckResult check_nd_equivalence() {
  CheckResult r{"nd-merges-equal-srg-params", true, ""};
  Graph rook = make_rook(4);
  Graph shri = make_shrikhande();
  for (int k = 1; k <= 2; ++k)
    if (elene_distinguish(rook, shri, k, Mode::nd)) {
      r.pass = false;
      r.detail = "node-centric signatures differ at depth " + std::to_string(k);
      return r;
    }
  r.detail = "node-centric signatures coincide at depths 1 and 2";
  return r;
}

CheckResult check_ed_separation() {
  CheckResult r{"ed-splits-equal-srg-params", true, ""};
  Graph rook = make_rook(4);
  Graph shri = make_shrikhande();
  if (!elene_distinguish(rook, shri, 1, Mode::ed)) {
    r.pass = false;
    r.detail = "edge-centric signatures coincide at depth 1";
    return r;
  }
  for (const auto& [u, v] : rook.edges()) {
    auto inter = intersect_ego(rook, u, v, 1);
    if (inter.edges.size() != 6) {
      r.pass = false;
      r.detail = "rook edge intersection has " + std::to_string(inter.edges.size()) +
                 " edges, expected 6";
      return r;
    }
  }
  for (const auto& [u, v] : shri.edges()) {
    auto inter = intersect_ego(shri, u, v, 1);
    if (inter.edges.size() != 5) {
      r.pass = false;
      r.detail = "triangular-lattice edge intersection has " +
                 std::to_string(inter.edges.size()) + " edges, expected 5";
      return r;
    }
  }
  r.detail = "signatures differ; every intersection has 6 vs 5 edges";
  return r;
}

CheckResult check_histogram_recovery() {
  CheckResult r{"histogram-recovery", true, ""};
  int instances = 0;
  auto verify = [&](const Graph& g, int k) {
    int rho = g.max_degree();
    EleneLParams p = make_recovery_params(k, rho, 2);
    for (int v = 0; v < g.node_count(); ++v) {
      SparseVec recovered = recover_histogram(g, v, k, p);
      SparseVec direct = to_sparse_vector(encode_node_nd(g, v, k), k, rho);
      if (!(recovered == direct)) {
        r.pass = false;
        r.detail = "pooled member sum differs from the sparse encoding at node " +
                   std::to_string(v);
        return;
      }
      ++instances;
    }
  };
  verify(make_rook(4), 1);
  if (r.pass) verify(make_rook(4), 2);
  for (std::uint64_t seed = 1; seed <= 4 && r.pass; ++seed)
    verify(make_barabasi_albert(18, 2, seed), 2);
  if (r.pass) r.detail = std::to_string(instances) + " node recoveries, exact";
  return r;
}

CheckResult check_spnn_emulation() {
  CheckResult r{"shell-aggregation-emulation", true, ""};
  double worst = 0.0;
  auto run = [&](const Graph& g, int k, std::vector<double> alphas, double eps,
                 std::uint64_t seed) {
    Rng rng(seed);
    Eigen::Index f = 3;
    DenseMap phi_sp;
    phi_sp.w = random_matrix(f, f, 1.0, rng);
    phi_sp.b = random_matrix(f, 1, 1.0, rng);
    phi_sp.act = Activation::identity;
    Eigen::MatrixXd x = random_features(g.node_count(), f, 1.0, rng);
    Eigen::MatrixXd want = spnn_forward(g, x, alphas, eps, phi_sp);
    EleneLParams p = build_spnn_equivalent(k, alphas, eps, phi_sp, g.max_degree());
    LayerState state = make_layer_state(g, k, Mode::nd, x);
    Eigen::MatrixXd got = layer_forward(g, state, p, 1, nullptr).x;
    worst = std::max(worst, (got - want).cwiseAbs().maxCoeff());
  };
  run(make_cycle(6), 2, {1.0, 1.0}, 0.0, 7);
  run(make_cycle(6), 2, {0.5, -0.25}, 0.3, 8);
  for (std::uint64_t seed = 1; seed <= 5; ++seed)
    run(make_barabasi_albert(16, 2, seed), 3, {0.8, -0.3, 0.1}, 0.25, seed + 100);
  r.pass = worst <= 1e-10;
  std::ostringstream out;
  out << "max |layer - shell sum| = " << worst;
  r.detail = out.str();
  return r;
}

CheckResult run_gradient_case(const char* name, Mode mode, Pooling pooling, Activation act,
                              std::uint64_t seed) {
  CheckResult r{name, false, ""};
  Graph g = make_barabasi_albert(10, 2, seed);
  int k = 1;
  int rho = g.max_degree();
  Eigen::Index f = 2, fe = 2, hidden = 3;
  EleneLParams p = random_layer_params(mode, pooling, k, rho, 3, f, fe, hidden, act, seed * 31 + 1);
  Rng rng(seed * 57 + 2);
  Eigen::MatrixXd x = random_features(g.node_count(), f, 0.8, rng);
  Eigen::MatrixXd e;
  if (mode == Mode::ed)
    e = random_features(static_cast<int>(g.edge_count()), fe, 0.8, rng);
  LayerState state = make_layer_state(g, k, mode, x, e);
  double err = grad_check(g, state, p, 1e-5, seed * 91 + 3);
  r.pass = err <= 1e-6;
  std::ostringstream out;
  out << "max relative error " << err;
  r.detail = out.str();
  return r;
}

}  // namespace

EleneLParams random_layer_params(Mode mode, Pooling pooling, int k, int rho, int omega,
                                 Eigen::Index f, Eigen::Index fe, Eigen::Index hidden,
                                 Activation act, std::uint64_t seed) {
  Rng rng(seed);
  EleneLParams p;
  p.mode = mode;
  p.pooling = pooling;
  p.k = k;
  p.rho = rho;
  p.omega = omega;
  int s_rows = p.table_rows();
  for (int s = 0; s < 3; ++s) p.w_nd[s] = random_matrix(s_rows, omega, 0.5, rng);

  p.phi_member.w = random_matrix(hidden, 2 * f + 3 * omega, 0.5, rng);
  p.phi_member.b = random_matrix(hidden, 1, 0.5, rng);
  p.phi_member.act = act;

  if (mode == Mode::ed) {
    for (int s = 0; s < 3; ++s) p.w_ed[s] = random_matrix(3 * s_rows, omega, 0.5, rng);
    p.phi_edge.w = random_matrix(hidden, 2 * f + fe + 3 * omega, 0.5, rng);
    p.phi_edge.b = random_matrix(hidden, 1, 0.5, rng);
    p.phi_edge.act = act;
    p.phi_node_out.w = random_matrix(f, f + 2 * hidden, 0.5, rng);
    p.phi_node_out.b = random_matrix(f, 1, 0.5, rng);
    p.phi_node_out.act = act;
    p.phi_edge_out.w = random_matrix(fe, hidden, 0.5, rng);
    p.phi_edge_out.b = random_matrix(fe, 1, 0.5, rng);
    p.phi_edge_out.act = act;
    p.gamma_ed = 0.7;
  } else {
    p.phi_node_out.w = random_matrix(f, f + hidden, 0.5, rng);
    p.phi_node_out.b = random_matrix(f, 1, 0.5, rng);
    p.phi_node_out.act = act;
  }
  p.gamma_nd = 0.9;
  return p;
}

std::vector<CheckResult> structure_checks() {
  return {
      check_wl1_vs_encoding(), check_igel_marginal(),      check_srg_parameters(),
      check_srg_closed_form(), check_nd_equivalence(),     check_ed_separation(),
      check_histogram_recovery(), check_spnn_emulation(),
  };
}

std::vector<CheckResult> gradient_checks() {
  return {
      run_gradient_case("grad-node-centric-sum", Mode::nd, Pooling::sum, Activation::tanh, 11),
      run_gradient_case("grad-node-centric-mean", Mode::nd, Pooling::masked_mean, Activation::tanh,
                        12),
      run_gradient_case("grad-edge-centric-sum", Mode::ed, Pooling::sum, Activation::tanh, 13),
      run_gradient_case("grad-edge-centric-mean", Mode::ed, Pooling::masked_mean, Activation::tanh,
                        14),
  };
}

}  // namespace elene
