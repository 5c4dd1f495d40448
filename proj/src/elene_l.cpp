#include "elene/elene_l.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>

#include "elene/detail/parallel.hpp"
#include "elene/error.hpp"
#include "elene/rng.hpp"

namespace elene {

namespace {

Eigen::MatrixXd act_m(const Eigen::MatrixXd& pre, Activation a) {
  switch (a) {
    case Activation::identity:
      return pre;
    case Activation::relu:
      return pre.cwiseMax(0.0);
    case Activation::tanh:
      return pre.array().tanh().matrix();
  }
  raise(errc::invalid_params, "unknown activation");
}

// d act / d pre, evaluated elementwise. relu takes slope 0 at the kink.
Eigen::MatrixXd slope_m(const Eigen::MatrixXd& pre, Activation a) {
  switch (a) {
    case Activation::identity:
      return Eigen::MatrixXd::Ones(pre.rows(), pre.cols());
    case Activation::relu:
      return (pre.array() > 0.0).cast<double>().matrix();
    case Activation::tanh:
      return (1.0 - pre.array().tanh().square()).matrix();
  }
  raise(errc::invalid_params, "unknown activation");
}

Eigen::VectorXd act_v(const Eigen::VectorXd& pre, Activation a) {
  switch (a) {
    case Activation::identity:
      return pre;
    case Activation::relu:
      return pre.cwiseMax(0.0);
    case Activation::tanh:
      return pre.array().tanh().matrix();
  }
  raise(errc::invalid_params, "unknown activation");
}

Eigen::VectorXd slope_v(const Eigen::VectorXd& pre, Activation a) {
  switch (a) {
    case Activation::identity:
      return Eigen::VectorXd::Ones(pre.size());
    case Activation::relu:
      return (pre.array() > 0.0).cast<double>().matrix();
    case Activation::tanh:
      return (1.0 - pre.array().tanh().square()).matrix();
  }
  raise(errc::invalid_params, "unknown activation");
}

int degree_component(const Quadruplet& q, int slot) {
  return slot == 0 ? q.d_minus : slot == 1 ? q.d : q.d_plus;
}

// Table row for one degree slot; bounds were checked before any hot loop.
int table_row(int l, int deg, int rho) { return l * (rho + 1) + deg; }

void check_quad(const Quadruplet& q, const EleneLParams& p) {
  if (q.l < 0 || q.l > p.k)
    raise(errc::out_of_layout, "level " + std::to_string(q.l) + " outside table layout");
  for (int s = 0; s < 3; ++s) {
    int d = degree_component(q, s);
    if (d < 0 || d > p.rho)
      raise(errc::out_of_layout,
            "degree " + std::to_string(d) + " exceeds table degree cap " + std::to_string(p.rho));
  }
}

Eigen::VectorXd embed_node_raw(const Quadruplet& q, const EleneLParams& p) {
  Eigen::VectorXd out(3 * p.omega);
  for (int s = 0; s < 3; ++s)
    out.segment(s * p.omega, p.omega) =
        p.w_nd[s].row(table_row(q.l, degree_component(q, s), p.rho)).transpose();
  return out;
}

Eigen::VectorXd embed_edge_raw(const Quadruplet& qa, const Quadruplet& qb,
                               const EleneLParams& p) {
  int s_rows = p.table_rows();
  int dab = qa.l - qb.l + 1;
  int dba = 2 - dab;
  Eigen::VectorXd out(3 * p.omega);
  for (int s = 0; s < 3; ++s) {
    int ra = dab * s_rows + table_row(qa.l, degree_component(qa, s), p.rho);
    int rb = dba * s_rows + table_row(qb.l, degree_component(qb, s), p.rho);
    out.segment(s * p.omega, p.omega) =
        (p.w_ed[s].row(ra) + p.w_ed[s].row(rb)).transpose();
  }
  return out;
}

void check_map(const DenseMap& map, Eigen::Index in, Eigen::Index out, const char* name) {
  if (map.in() != in || map.out() != out || map.b.size() != map.out())
    raise(errc::shape_mismatch, std::string(name) + " must map " + std::to_string(in) + " -> " +
                                    std::to_string(out) + ", got " + std::to_string(map.in()) +
                                    " -> " + std::to_string(map.out()));
}

// Every shape and table-range precondition, checked up front so the parallel
// loops below cannot throw mid-flight.
void validate_layer(const Graph& g, const LayerState& state, const EleneLParams& p) {
  int n = g.node_count();
  std::int64_t m = g.edge_count();
  if (p.k < 0 || p.rho < 0 || p.omega < 0)
    raise(errc::invalid_params, "k, rho, omega must be non-negative");
  if (state.mode != p.mode || state.k != p.k)
    raise(errc::shape_mismatch, "layer state and parameters disagree on mode or k");
  if (static_cast<int>(state.ego.size()) != n || state.x.rows() != n)
    raise(errc::shape_mismatch, "layer state was built for a different graph");

  Eigen::Index s_rows = p.table_rows();
  for (int s = 0; s < 3; ++s)
    if (p.w_nd[s].rows() != s_rows || p.w_nd[s].cols() != p.omega)
      raise(errc::shape_mismatch, "node table " + std::to_string(s) + " must be " +
                                      std::to_string(s_rows) + " x " + std::to_string(p.omega));

  Eigen::Index f = state.x.cols();
  Eigen::Index hm = p.phi_member.out();
  check_map(p.phi_member, 2 * f + 3 * p.omega, hm, "phi_member");

  if (p.mode == Mode::ed) {
    if (state.e.rows() != m) raise(errc::shape_mismatch, "edge features must have one row per edge");
    Eigen::Index fe = state.e.cols();
    for (int s = 0; s < 3; ++s)
      if (p.w_ed[s].rows() != 3 * s_rows || p.w_ed[s].cols() != p.omega)
        raise(errc::shape_mismatch, "edge table " + std::to_string(s) + " must be " +
                                        std::to_string(3 * s_rows) + " x " +
                                        std::to_string(p.omega));
    Eigen::Index he = p.phi_edge.out();
    check_map(p.phi_edge, 2 * f + fe + 3 * p.omega, he, "phi_edge");
    check_map(p.phi_node_out, f + hm + he, f, "phi_node_out");
    check_map(p.phi_edge_out, he, fe, "phi_edge_out");
    if (state.edge_roots.size() != static_cast<std::size_t>(m))
      raise(errc::shape_mismatch, "layer state is missing edge contexts");
  } else {
    check_map(p.phi_node_out, f + hm, f, "phi_node_out");
  }

  for (const auto& ego : state.ego) {
    for (const auto& q : ego.quads) check_quad(q, p);
    for (const auto& er : ego.edges) {
      int dl = ego.quads[er.a_slot].l - ego.quads[er.b_slot].l;
      if (dl < -1 || dl > 1)
        raise(errc::invalid_delta, "ego-net edge endpoints differ by more than one level");
    }
  }
}

// Gradient accumulator shaped like the used parameters plus the inputs.
struct Accum {
  std::array<Eigen::MatrixXd, 3> w_nd, w_ed;
  Eigen::MatrixXd phi_member_w, phi_edge_w, phi_node_out_w, phi_edge_out_w;
  Eigen::VectorXd phi_member_b, phi_edge_b, phi_node_out_b, phi_edge_out_b;
  double gamma_nd = 0.0, gamma_ed = 0.0;
  Eigen::MatrixXd dx, de;

  Accum(const EleneLParams& p, Eigen::Index n, Eigen::Index f, Eigen::Index m, Eigen::Index fe) {
    for (int s = 0; s < 3; ++s) w_nd[s] = Eigen::MatrixXd::Zero(p.w_nd[s].rows(), p.w_nd[s].cols());
    phi_member_w = Eigen::MatrixXd::Zero(p.phi_member.out(), p.phi_member.in());
    phi_member_b = Eigen::VectorXd::Zero(p.phi_member.out());
    phi_node_out_w = Eigen::MatrixXd::Zero(p.phi_node_out.out(), p.phi_node_out.in());
    phi_node_out_b = Eigen::VectorXd::Zero(p.phi_node_out.out());
    dx = Eigen::MatrixXd::Zero(n, f);
    if (p.mode == Mode::ed) {
      for (int s = 0; s < 3; ++s)
        w_ed[s] = Eigen::MatrixXd::Zero(p.w_ed[s].rows(), p.w_ed[s].cols());
      phi_edge_w = Eigen::MatrixXd::Zero(p.phi_edge.out(), p.phi_edge.in());
      phi_edge_b = Eigen::VectorXd::Zero(p.phi_edge.out());
      phi_edge_out_w = Eigen::MatrixXd::Zero(p.phi_edge_out.out(), p.phi_edge_out.in());
      phi_edge_out_b = Eigen::VectorXd::Zero(p.phi_edge_out.out());
      de = Eigen::MatrixXd::Zero(m, fe);
    } else {
      de = Eigen::MatrixXd::Zero(0, 0);
    }
  }

  void add(const Accum& o, Mode mode) {
    for (int s = 0; s < 3; ++s) w_nd[s] += o.w_nd[s];
    phi_member_w += o.phi_member_w;
    phi_member_b += o.phi_member_b;
    phi_node_out_w += o.phi_node_out_w;
    phi_node_out_b += o.phi_node_out_b;
    gamma_nd += o.gamma_nd;
    dx += o.dx;
    if (mode == Mode::ed) {
      for (int s = 0; s < 3; ++s) w_ed[s] += o.w_ed[s];
      phi_edge_w += o.phi_edge_w;
      phi_edge_b += o.phi_edge_b;
      phi_edge_out_w += o.phi_edge_out_w;
      phi_edge_out_b += o.phi_edge_out_b;
      gamma_ed += o.gamma_ed;
      de += o.de;
    }
  }
};

// phi_member input for one member column: x_root || x_u || Emb(u).
void fill_member_column(Eigen::Ref<Eigen::VectorXd> col, const Eigen::MatrixXd& x, int root, int u,
                        const Quadruplet& q, const EleneLParams& p) {
  Eigen::Index f = x.cols();
  col.head(f) = x.row(root).transpose();
  col.segment(f, f) = x.row(u).transpose();
  col.tail(3 * p.omega) = embed_node_raw(q, p);
}

// phi_edge input for one edge seen from one root:
// x_root || e_uw || x_u .* x_w || Emb(u, w).
void fill_edge_column(Eigen::Ref<Eigen::VectorXd> col, const Eigen::MatrixXd& x,
                      const Eigen::MatrixXd& e, int root, std::int64_t edge_id, int a, int b,
                      const Quadruplet& qa, const Quadruplet& qb, const EleneLParams& p) {
  Eigen::Index f = x.cols();
  Eigen::Index fe = e.cols();
  col.head(f) = x.row(root).transpose();
  col.segment(f, fe) = e.row(edge_id).transpose();
  col.segment(f + fe, f) = (x.row(a).array() * x.row(b).array()).matrix().transpose();
  col.tail(3 * p.omega) = embed_edge_raw(qa, qb, p);
}

}  // namespace

Eigen::VectorXd DenseMap::apply(const Eigen::VectorXd& z) const {
  if (z.size() != in() || b.size() != out())
    raise(errc::shape_mismatch, "dense map applied to a vector of the wrong size");
  Eigen::VectorXd pre = w * z + b;
  return act_v(pre, act);
}

Eigen::VectorXd embed_node(const Quadruplet& q, const EleneLParams& p) {
  Eigen::Index s_rows = p.table_rows();
  for (int s = 0; s < 3; ++s)
    if (p.w_nd[s].rows() != s_rows || p.w_nd[s].cols() != p.omega)
      raise(errc::shape_mismatch, "node tables do not match the declared layout");
  check_quad(q, p);
  return embed_node_raw(q, p);
}

Eigen::VectorXd embed_edge(const Quadruplet& q_u, const Quadruplet& q_w, const EleneLParams& p) {
  Eigen::Index s_rows = p.table_rows();
  for (int s = 0; s < 3; ++s)
    if (p.w_ed[s].rows() != 3 * s_rows || p.w_ed[s].cols() != p.omega)
      raise(errc::shape_mismatch, "edge tables do not match the declared layout");
  check_quad(q_u, p);
  check_quad(q_w, p);
  int delta = q_u.l - q_w.l + 1;
  if (delta < 0 || delta > 2)
    raise(errc::invalid_delta, "edge endpoints must sit on adjacent or equal levels");
  return embed_edge_raw(q_u, q_w, p);
}

LayerState make_layer_state(const Graph& g, int k, Mode mode, Eigen::MatrixXd x,
                            Eigen::MatrixXd e) {
  int n = g.node_count();
  std::int64_t m = g.edge_count();
  if (k < 0) raise(errc::invalid_params, "k must be non-negative");
  if (mode == Mode::ed && k < 1) raise(errc::invalid_params, "edge-centric layers need k >= 1");
  if (x.rows() != n) raise(errc::shape_mismatch, "node features must have one row per node");
  if (mode == Mode::ed && e.rows() != m)
    raise(errc::shape_mismatch, "edge features must have one row per edge");

  LayerState state;
  state.mode = mode;
  state.k = k;
  state.x = std::move(x);
  state.e = std::move(e);
  state.ego.resize(static_cast<std::size_t>(n));
  if (mode == Mode::ed) state.edge_roots.resize(static_cast<std::size_t>(m));

  for (int v = 0; v < n; ++v) {
    EgoView view = ego_view(g, v, k);
    EgoNetCache& cache = state.ego[static_cast<std::size_t>(v)];
    cache.members = std::move(view.members);
    cache.quads = std::move(view.quads);
    cache.edges.reserve(view.edges.size());
    for (const auto& es : view.edges) {
      int a = cache.members[static_cast<std::size_t>(es.a_slot)];
      int b = cache.members[static_cast<std::size_t>(es.b_slot)];
      std::int64_t id = g.edge_id(a, b).value();
      cache.edges.push_back({id, es.a_slot, es.b_slot});
      // members are ascending, so slot order matches the canonical edge
      // orientation and the quadruplets line up with (u, v).
      if (mode == Mode::ed)
        state.edge_roots[static_cast<std::size_t>(id)].push_back(
            {v, cache.quads[static_cast<std::size_t>(es.a_slot)],
             cache.quads[static_cast<std::size_t>(es.b_slot)]});
    }
  }
  return state;
}

LayerState layer_forward(const Graph& g, const LayerState& state, const EleneLParams& p,
                         int threads, LayerTape* tape) {
  validate_layer(g, state, p);
  int n = g.node_count();
  std::int64_t m = g.edge_count();
  Eigen::Index f = state.x.cols();
  Eigen::Index fe = state.e.cols();
  Eigen::Index hm = p.phi_member.out();
  Eigen::Index he = p.mode == Mode::ed ? p.phi_edge.out() : 0;
  bool ed = p.mode == Mode::ed;

  LayerState out = state;
  if (tape) {
    tape->valid = false;
    tape->member_in.assign(static_cast<std::size_t>(n), {});
    tape->member_pre.assign(static_cast<std::size_t>(n), {});
    tape->egoedge_in.assign(ed ? static_cast<std::size_t>(n) : 0, {});
    tape->egoedge_pre.assign(ed ? static_cast<std::size_t>(n) : 0, {});
    tape->node_in.assign(static_cast<std::size_t>(n), {});
    tape->node_pre.assign(static_cast<std::size_t>(n), {});
    tape->node_out.assign(static_cast<std::size_t>(n), {});
    tape->ctx_in.assign(ed ? static_cast<std::size_t>(m) : 0, {});
    tape->ctx_pre.assign(ed ? static_cast<std::size_t>(m) : 0, {});
    tape->ctx_pool.assign(ed ? static_cast<std::size_t>(m) : 0, {});
    tape->eout_pre.assign(ed ? static_cast<std::size_t>(m) : 0, {});
    tape->eout_out.assign(ed ? static_cast<std::size_t>(m) : 0, {});
  }

  detail::parallel_chunks(n, threads, [&](int, std::int64_t lo, std::int64_t hi) {
    for (std::int64_t vi = lo; vi < hi; ++vi) {
      int v = static_cast<int>(vi);
      const EgoNetCache& ego = state.ego[static_cast<std::size_t>(vi)];
      Eigen::Index cols = static_cast<Eigen::Index>(ego.members.size());

      Eigen::MatrixXd zin(2 * f + 3 * p.omega, cols);
      for (Eigen::Index c = 0; c < cols; ++c)
        fill_member_column(zin.col(c), state.x, v, ego.members[static_cast<std::size_t>(c)],
                           ego.quads[static_cast<std::size_t>(c)], p);
      Eigen::MatrixXd pre = (p.phi_member.w * zin).colwise() + p.phi_member.b;
      Eigen::MatrixXd acted = act_m(pre, p.phi_member.act);
      Eigen::VectorXd pooled_m = Eigen::VectorXd::Zero(hm);
      if (cols > 0) {
        pooled_m = acted.rowwise().sum();
        if (p.pooling == Pooling::masked_mean) pooled_m /= static_cast<double>(cols);
      }

      Eigen::VectorXd node_in(f + hm + he);
      node_in.head(f) = state.x.row(v).transpose();
      node_in.segment(f, hm) = pooled_m;

      Eigen::MatrixXd ein, epre;
      if (ed) {
        Eigen::Index ecols = static_cast<Eigen::Index>(ego.edges.size());
        ein.resize(2 * f + fe + 3 * p.omega, ecols);
        for (Eigen::Index c = 0; c < ecols; ++c) {
          const auto& er = ego.edges[static_cast<std::size_t>(c)];
          fill_edge_column(ein.col(c), state.x, state.e, v, er.edge_id,
                           ego.members[static_cast<std::size_t>(er.a_slot)],
                           ego.members[static_cast<std::size_t>(er.b_slot)],
                           ego.quads[static_cast<std::size_t>(er.a_slot)],
                           ego.quads[static_cast<std::size_t>(er.b_slot)], p);
        }
        epre = (p.phi_edge.w * ein).colwise() + p.phi_edge.b;
        Eigen::MatrixXd eact = act_m(epre, p.phi_edge.act);
        Eigen::VectorXd pooled_e = Eigen::VectorXd::Zero(he);
        if (ecols > 0) {
          pooled_e = eact.rowwise().sum();
          if (p.pooling == Pooling::masked_mean) pooled_e /= static_cast<double>(ecols);
        }
        node_in.tail(he) = pooled_e;
      }

      Eigen::VectorXd node_pre = p.phi_node_out.w * node_in + p.phi_node_out.b;
      Eigen::VectorXd y = act_v(node_pre, p.phi_node_out.act);
      out.x.row(v) = state.x.row(v) + p.gamma_nd * y.transpose();

      if (tape) {
        tape->member_in[static_cast<std::size_t>(vi)] = std::move(zin);
        tape->member_pre[static_cast<std::size_t>(vi)] = std::move(pre);
        if (ed) {
          tape->egoedge_in[static_cast<std::size_t>(vi)] = std::move(ein);
          tape->egoedge_pre[static_cast<std::size_t>(vi)] = std::move(epre);
        }
        tape->node_in[static_cast<std::size_t>(vi)] = std::move(node_in);
        tape->node_pre[static_cast<std::size_t>(vi)] = std::move(node_pre);
        tape->node_out[static_cast<std::size_t>(vi)] = std::move(y);
      }
    }
  });

  if (ed) {
    detail::parallel_chunks(m, threads, [&](int, std::int64_t lo, std::int64_t hi) {
      for (std::int64_t eid = lo; eid < hi; ++eid) {
        const auto& ctxs = state.edge_roots[static_cast<std::size_t>(eid)];
        auto [u, v] = g.edge(eid);
        Eigen::Index cols = static_cast<Eigen::Index>(ctxs.size());
        Eigen::MatrixXd zin(2 * f + fe + 3 * p.omega, cols);
        for (Eigen::Index c = 0; c < cols; ++c) {
          const EdgeContext& ctx = ctxs[static_cast<std::size_t>(c)];
          fill_edge_column(zin.col(c), state.x, state.e, ctx.root, eid, u, v, ctx.q_u, ctx.q_v, p);
        }
        Eigen::MatrixXd pre = (p.phi_edge.w * zin).colwise() + p.phi_edge.b;
        Eigen::MatrixXd acted = act_m(pre, p.phi_edge.act);
        Eigen::VectorXd pooled = Eigen::VectorXd::Zero(he);
        if (cols > 0) {
          pooled = acted.rowwise().sum();
          if (p.pooling == Pooling::masked_mean) pooled /= static_cast<double>(cols);
        }

        Eigen::VectorXd eout_pre = p.phi_edge_out.w * pooled + p.phi_edge_out.b;
        Eigen::VectorXd y = act_v(eout_pre, p.phi_edge_out.act);
        out.e.row(eid) = state.e.row(eid) + p.gamma_ed * y.transpose();

        if (tape) {
          tape->ctx_in[static_cast<std::size_t>(eid)] = std::move(zin);
          tape->ctx_pre[static_cast<std::size_t>(eid)] = std::move(pre);
          tape->ctx_pool[static_cast<std::size_t>(eid)] = std::move(pooled);
          tape->eout_pre[static_cast<std::size_t>(eid)] = std::move(eout_pre);
          tape->eout_out[static_cast<std::size_t>(eid)] = std::move(y);
        }
      }
    });
  }

  if (tape) tape->valid = true;
  return out;
}

LayerGradients layer_backward(const Graph& g, const LayerState& state, const EleneLParams& p,
                              const LayerTape& tape, const Eigen::MatrixXd& dx_out,
                              const Eigen::MatrixXd& de_out, int threads) {
  if (!tape.valid)
    raise(errc::no_forward_cache, "layer_backward needs the tape of a completed forward pass");
  validate_layer(g, state, p);
  int n = g.node_count();
  std::int64_t m = g.edge_count();
  Eigen::Index f = state.x.cols();
  Eigen::Index fe = state.e.cols();
  Eigen::Index hm = p.phi_member.out();
  Eigen::Index he = p.mode == Mode::ed ? p.phi_edge.out() : 0;
  bool ed = p.mode == Mode::ed;
  int s_rows = p.table_rows();

  if (dx_out.rows() != state.x.rows() || dx_out.cols() != state.x.cols())
    raise(errc::shape_mismatch, "upstream node gradient has the wrong shape");
  if (ed) {
    if (de_out.rows() != state.e.rows() || de_out.cols() != state.e.cols())
      raise(errc::shape_mismatch, "upstream edge gradient has the wrong shape");
  } else if (de_out.size() != 0) {
    raise(errc::shape_mismatch, "node-centric layers take no upstream edge gradient");
  }
  if (static_cast<int>(tape.member_in.size()) != n)
    raise(errc::no_forward_cache, "tape does not match this layer state");

  int t_node = detail::clamp_threads(threads, n);
  std::vector<Accum> acc;
  acc.reserve(static_cast<std::size_t>(t_node));
  for (int w = 0; w < t_node; ++w) acc.emplace_back(p, n, f, m, fe);

  detail::parallel_chunks(n, threads, [&](int worker, std::int64_t lo, std::int64_t hi) {
    Accum& a = acc[static_cast<std::size_t>(worker)];
    for (std::int64_t vi = lo; vi < hi; ++vi) {
      int v = static_cast<int>(vi);
      const EgoNetCache& ego = state.ego[static_cast<std::size_t>(vi)];
      auto uz = [](std::int64_t i) { return static_cast<std::size_t>(i); };

      a.dx.row(v) += dx_out.row(v);
      Eigen::VectorXd dup = dx_out.row(v).transpose();
      a.gamma_nd += dup.dot(tape.node_out[uz(vi)]);

      Eigen::VectorXd dy = p.gamma_nd * dup;
      Eigen::VectorXd dpre =
          (dy.array() * slope_v(tape.node_pre[uz(vi)], p.phi_node_out.act).array()).matrix();
      a.phi_node_out_w += dpre * tape.node_in[uz(vi)].transpose();
      a.phi_node_out_b += dpre;
      Eigen::VectorXd dz = p.phi_node_out.w.transpose() * dpre;
      a.dx.row(v) += dz.head(f).transpose();

      // member half
      Eigen::Index cols = tape.member_in[uz(vi)].cols();
      if (cols > 0 && hm > 0) {
        Eigen::VectorXd dsum = dz.segment(f, hm);
        if (p.pooling == Pooling::masked_mean) dsum /= static_cast<double>(cols);
        Eigen::MatrixXd dpre_m =
            (slope_m(tape.member_pre[uz(vi)], p.phi_member.act).array().colwise() * dsum.array())
                .matrix();
        a.phi_member_w += dpre_m * tape.member_in[uz(vi)].transpose();
        a.phi_member_b += dpre_m.rowwise().sum();
        Eigen::MatrixXd dzin = p.phi_member.w.transpose() * dpre_m;
        for (Eigen::Index c = 0; c < cols; ++c) {
          int u = ego.members[static_cast<std::size_t>(c)];
          const Quadruplet& q = ego.quads[static_cast<std::size_t>(c)];
          a.dx.row(v) += dzin.col(c).head(f).transpose();
          a.dx.row(u) += dzin.col(c).segment(f, f).transpose();
          for (int s = 0; s < 3; ++s)
            a.w_nd[s].row(table_row(q.l, degree_component(q, s), p.rho)) +=
                dzin.col(c).segment(2 * f + s * p.omega, p.omega).transpose();
        }
      }

      // ego-net edge half
      if (ed) {
        Eigen::Index ecols = tape.egoedge_in[uz(vi)].cols();
        if (ecols > 0 && he > 0) {
          Eigen::VectorXd dsum = dz.tail(he);
          if (p.pooling == Pooling::masked_mean) dsum /= static_cast<double>(ecols);
          Eigen::MatrixXd dpre_e =
              (slope_m(tape.egoedge_pre[uz(vi)], p.phi_edge.act).array().colwise() * dsum.array())
                  .matrix();
          a.phi_edge_w += dpre_e * tape.egoedge_in[uz(vi)].transpose();
          a.phi_edge_b += dpre_e.rowwise().sum();
          Eigen::MatrixXd dzin = p.phi_edge.w.transpose() * dpre_e;
          for (Eigen::Index c = 0; c < ecols; ++c) {
            const auto& er = ego.edges[static_cast<std::size_t>(c)];
            int na = ego.members[static_cast<std::size_t>(er.a_slot)];
            int nb = ego.members[static_cast<std::size_t>(er.b_slot)];
            const Quadruplet& qa = ego.quads[static_cast<std::size_t>(er.a_slot)];
            const Quadruplet& qb = ego.quads[static_cast<std::size_t>(er.b_slot)];
            a.dx.row(v) += dzin.col(c).head(f).transpose();
            a.de.row(er.edge_id) += dzin.col(c).segment(f, fe).transpose();
            Eigen::VectorXd dprod = dzin.col(c).segment(f + fe, f);
            a.dx.row(na) +=
                (dprod.array() * state.x.row(nb).transpose().array()).matrix().transpose();
            a.dx.row(nb) +=
                (dprod.array() * state.x.row(na).transpose().array()).matrix().transpose();
            int dab = qa.l - qb.l + 1;
            for (int s = 0; s < 3; ++s) {
              Eigen::RowVectorXd chunk =
                  dzin.col(c).segment(2 * f + fe + s * p.omega, p.omega).transpose();
              a.w_ed[s].row(dab * s_rows + table_row(qa.l, degree_component(qa, s), p.rho)) +=
                  chunk;
              a.w_ed[s].row((2 - dab) * s_rows + table_row(qb.l, degree_component(qb, s), p.rho)) +=
                  chunk;
            }
          }
        }
      }
    }
  });

  if (ed) {
    int t_edge = detail::clamp_threads(threads, m);
    std::vector<Accum> eacc;
    eacc.reserve(static_cast<std::size_t>(t_edge));
    for (int w = 0; w < t_edge; ++w) eacc.emplace_back(p, n, f, m, fe);

    detail::parallel_chunks(m, threads, [&](int worker, std::int64_t lo, std::int64_t hi) {
      Accum& a = eacc[static_cast<std::size_t>(worker)];
      for (std::int64_t eid = lo; eid < hi; ++eid) {
        auto ue = static_cast<std::size_t>(eid);
        const auto& ctxs = state.edge_roots[ue];
        auto [nu, nv] = g.edge(eid);

        a.de.row(eid) += de_out.row(eid);
        Eigen::VectorXd dup = de_out.row(eid).transpose();
        a.gamma_ed += dup.dot(tape.eout_out[ue]);

        Eigen::VectorXd dy = p.gamma_ed * dup;
        Eigen::VectorXd dpre =
            (dy.array() * slope_v(tape.eout_pre[ue], p.phi_edge_out.act).array()).matrix();
        a.phi_edge_out_w += dpre * tape.ctx_pool[ue].transpose();
        a.phi_edge_out_b += dpre;
        Eigen::VectorXd dpool = p.phi_edge_out.w.transpose() * dpre;

        Eigen::Index cols = tape.ctx_in[ue].cols();
        if (cols == 0 || he == 0) continue;
        if (p.pooling == Pooling::masked_mean) dpool /= static_cast<double>(cols);
        Eigen::MatrixXd dpre_c =
            (slope_m(tape.ctx_pre[ue], p.phi_edge.act).array().colwise() * dpool.array()).matrix();
        a.phi_edge_w += dpre_c * tape.ctx_in[ue].transpose();
        a.phi_edge_b += dpre_c.rowwise().sum();
        Eigen::MatrixXd dzin = p.phi_edge.w.transpose() * dpre_c;
        for (Eigen::Index c = 0; c < cols; ++c) {
          const EdgeContext& ctx = ctxs[static_cast<std::size_t>(c)];
          a.dx.row(ctx.root) += dzin.col(c).head(f).transpose();
          a.de.row(eid) += dzin.col(c).segment(f, fe).transpose();
          Eigen::VectorXd dprod = dzin.col(c).segment(f + fe, f);
          a.dx.row(nu) +=
              (dprod.array() * state.x.row(nv).transpose().array()).matrix().transpose();
          a.dx.row(nv) +=
              (dprod.array() * state.x.row(nu).transpose().array()).matrix().transpose();
          int dab = ctx.q_u.l - ctx.q_v.l + 1;
          for (int s = 0; s < 3; ++s) {
            Eigen::RowVectorXd chunk =
                dzin.col(c).segment(2 * f + fe + s * p.omega, p.omega).transpose();
            a.w_ed[s].row(dab * s_rows + table_row(ctx.q_u.l, degree_component(ctx.q_u, s), p.rho)) +=
                chunk;
            a.w_ed[s].row((2 - dab) * s_rows +
                          table_row(ctx.q_v.l, degree_component(ctx.q_v, s), p.rho)) += chunk;
          }
        }
      }
    });
    for (std::size_t w = 1; w < eacc.size(); ++w) eacc[0].add(eacc[w], p.mode);
    acc[0].add(eacc[0], p.mode);
  }

  for (std::size_t w = 1; w < acc.size(); ++w) acc[0].add(acc[w], p.mode);

  LayerGradients out;
  out.w_nd = std::move(acc[0].w_nd);
  out.w_ed = std::move(acc[0].w_ed);
  out.phi_member_w = std::move(acc[0].phi_member_w);
  out.phi_edge_w = std::move(acc[0].phi_edge_w);
  out.phi_node_out_w = std::move(acc[0].phi_node_out_w);
  out.phi_edge_out_w = std::move(acc[0].phi_edge_out_w);
  out.phi_member_b = std::move(acc[0].phi_member_b);
  out.phi_edge_b = std::move(acc[0].phi_edge_b);
  out.phi_node_out_b = std::move(acc[0].phi_node_out_b);
  out.phi_edge_out_b = std::move(acc[0].phi_edge_out_b);
  out.gamma_nd = acc[0].gamma_nd;
  out.gamma_ed = acc[0].gamma_ed;
  out.x = std::move(acc[0].dx);
  out.e = std::move(acc[0].de);
  return out;
}

namespace {

// Pairs every used parameter slot with its analytic gradient, in a fixed
// traversal order shared by grad_check's perturbation loop.
template <typename Fn>
void for_each_param(EleneLParams& p, LayerGradients& gr, Fn&& fn) {
  auto mat = [&fn](Eigen::MatrixXd& pm, Eigen::MatrixXd& gm) {
    for (Eigen::Index c = 0; c < pm.cols(); ++c)
      for (Eigen::Index r = 0; r < pm.rows(); ++r) fn(pm(r, c), gm(r, c));
  };
  auto vec = [&fn](Eigen::VectorXd& pv, Eigen::VectorXd& gv) {
    for (Eigen::Index i = 0; i < pv.size(); ++i) fn(pv(i), gv(i));
  };
  for (int s = 0; s < 3; ++s) mat(p.w_nd[s], gr.w_nd[s]);
  mat(p.phi_member.w, gr.phi_member_w);
  vec(p.phi_member.b, gr.phi_member_b);
  mat(p.phi_node_out.w, gr.phi_node_out_w);
  vec(p.phi_node_out.b, gr.phi_node_out_b);
  fn(p.gamma_nd, gr.gamma_nd);
  if (p.mode == Mode::ed) {
    for (int s = 0; s < 3; ++s) mat(p.w_ed[s], gr.w_ed[s]);
    mat(p.phi_edge.w, gr.phi_edge_w);
    vec(p.phi_edge.b, gr.phi_edge_b);
    mat(p.phi_edge_out.w, gr.phi_edge_out_w);
    vec(p.phi_edge_out.b, gr.phi_edge_out_b);
    fn(p.gamma_ed, gr.gamma_ed);
  }
}

}  // namespace

double grad_check(const Graph& g, const LayerState& state, const EleneLParams& p, double h,
                  std::uint64_t seed) {
  if (h <= 0.0) raise(errc::invalid_params, "step size must be positive");
  LayerTape tape;
  LayerState base = layer_forward(g, state, p, 1, &tape);

  Rng rng(seed);
  Eigen::MatrixXd rx(base.x.rows(), base.x.cols());
  for (Eigen::Index r = 0; r < rx.rows(); ++r)
    for (Eigen::Index c = 0; c < rx.cols(); ++c) rx(r, c) = 2.0 * rng.unit() - 1.0;
  Eigen::MatrixXd re(p.mode == Mode::ed ? base.e.rows() : 0, p.mode == Mode::ed ? base.e.cols() : 0);
  for (Eigen::Index r = 0; r < re.rows(); ++r)
    for (Eigen::Index c = 0; c < re.cols(); ++c) re(r, c) = 2.0 * rng.unit() - 1.0;

  LayerGradients gr = layer_backward(g, state, p, tape, rx, re, 1);

  EleneLParams q = p;
  LayerState s = state;
  std::vector<std::pair<double*, double>> slots;
  auto record = [&slots](double& pv, double gv) { slots.emplace_back(&pv, gv); };
  for_each_param(q, gr, record);
  for (Eigen::Index c = 0; c < s.x.cols(); ++c)
    for (Eigen::Index r = 0; r < s.x.rows(); ++r) record(s.x(r, c), gr.x(r, c));
  if (p.mode == Mode::ed)
    for (Eigen::Index c = 0; c < s.e.cols(); ++c)
      for (Eigen::Index r = 0; r < s.e.rows(); ++r) record(s.e(r, c), gr.e(r, c));

  auto loss = [&]() {
    LayerState o = layer_forward(g, s, q, 1, nullptr);
    double total = (rx.array() * o.x.array()).sum();
    if (p.mode == Mode::ed) total += (re.array() * o.e.array()).sum();
    return total;
  };

  double worst = 0.0;
  for (auto& [ptr, analytic] : slots) {
    double saved = *ptr;
    *ptr = saved + h;
    double hi = loss();
    *ptr = saved - h;
    double lo = loss();
    *ptr = saved;
    double numeric = (hi - lo) / (2.0 * h);
    double scale = std::max({1.0, std::abs(analytic), std::abs(numeric)});
    worst = std::max(worst, std::abs(analytic - numeric) / scale);
  }
  return worst;
}

Eigen::MatrixXd spnn_forward(const Graph& g, const Eigen::MatrixXd& x,
                             std::span<const double> alphas, double eps, const DenseMap& phi_sp) {
  int n = g.node_count();
  if (x.rows() != n) raise(errc::shape_mismatch, "node features must have one row per node");
  Eigen::Index f = x.cols();
  check_map(phi_sp, f, f, "phi_sp");
  int k = static_cast<int>(alphas.size());

  Eigen::MatrixXd out(n, f);
  for (int v = 0; v < n; ++v) {
    Eigen::VectorXd agg = (1.0 + eps) * x.row(v).transpose();
    LevelMap lm = bfs_levels(g, v, k);
    for (const auto& [node, dist] : lm.dist)
      if (dist >= 1) agg += alphas[static_cast<std::size_t>(dist - 1)] * x.row(node).transpose();
    out.row(v) = phi_sp.apply(agg).transpose();
  }
  return out;
}

EleneLParams build_spnn_equivalent(int k, std::span<const double> alphas, double eps,
                                   const DenseMap& phi_sp, int rho, double feature_bound) {
  if (k < 0 || static_cast<int>(alphas.size()) != k)
    raise(errc::invalid_params, "need one shell coefficient per hop");
  if (rho < 0) raise(errc::invalid_params, "rho must be non-negative");
  if (!(feature_bound > 0.0)) raise(errc::invalid_params, "feature_bound must be positive");
  Eigen::Index f = phi_sp.in();
  if (phi_sp.out() != f || phi_sp.b.size() != f)
    raise(errc::shape_mismatch, "phi_sp must be a square map");
  if (phi_sp.act != Activation::identity)
    raise(errc::invalid_params,
          "exact emulation needs an affine phi_sp: the residual term is subtracted after "
          "the output head, which cannot be pushed through a nonlinearity");

  EleneLParams p;
  p.mode = Mode::nd;
  p.pooling = Pooling::sum;
  p.k = k;
  p.rho = rho;
  p.omega = k + 1;
  int s_rows = p.table_rows();

  // Table 1 marks the member's level with a one-hot row, independent of the
  // degree components; tables 0 and 2 stay zero.
  p.w_nd[0] = Eigen::MatrixXd::Zero(s_rows, p.omega);
  p.w_nd[2] = Eigen::MatrixXd::Zero(s_rows, p.omega);
  p.w_nd[1] = Eigen::MatrixXd::Zero(s_rows, p.omega);
  for (int l = 0; l <= k; ++l)
    for (int d = 0; d <= rho; ++d) p.w_nd[1](table_row(l, d, rho), l) = 1.0;

  // Two relu units per (hop i, feature j) recover the positive and negative
  // parts of x_u[j], gated by the level indicator: relu(+-x + M*[l=i] - M).
  // The gate is exact because M - M cancels and relu passes +-x through.
  double big = feature_bound;
  Eigen::Index units = 2 * static_cast<Eigen::Index>(k) * f;
  p.phi_member.w = Eigen::MatrixXd::Zero(units, 2 * f + 3 * p.omega);
  p.phi_member.b = Eigen::VectorXd::Zero(units);
  p.phi_member.act = Activation::relu;
  for (int i = 1; i <= k; ++i)
    for (Eigen::Index j = 0; j < f; ++j) {
      Eigen::Index pos = 2 * ((static_cast<Eigen::Index>(i) - 1) * f + j);
      p.phi_member.w(pos, f + j) = 1.0;
      p.phi_member.w(pos, 2 * f + p.omega + i) = big;
      p.phi_member.b(pos) = -big;
      p.phi_member.w(pos + 1, f + j) = -1.0;
      p.phi_member.w(pos + 1, 2 * f + p.omega + i) = big;
      p.phi_member.b(pos + 1) = -big;
    }

  // Output head: phi_sp applied to (1+eps) x_v + sum_i alpha_i shell_i, with
  // the layer's residual x_v subtracted back out.
  p.phi_node_out.w = Eigen::MatrixXd::Zero(f, f + units);
  p.phi_node_out.w.leftCols(f) = (1.0 + eps) * phi_sp.w - Eigen::MatrixXd::Identity(f, f);
  for (int i = 1; i <= k; ++i)
    for (Eigen::Index j = 0; j < f; ++j) {
      Eigen::Index pos = f + 2 * ((static_cast<Eigen::Index>(i) - 1) * f + j);
      double alpha = alphas[static_cast<std::size_t>(i - 1)];
      p.phi_node_out.w.col(pos) = alpha * phi_sp.w.col(j);
      p.phi_node_out.w.col(pos + 1) = -alpha * phi_sp.w.col(j);
    }
  p.phi_node_out.b = phi_sp.b;
  p.phi_node_out.act = Activation::identity;

  p.gamma_nd = 1.0;
  p.gamma_ed = 0.0;
  return p;
}

EleneLParams make_recovery_params(int k, int rho, int feature_width) {
  if (k < 0 || rho < 0 || feature_width < 0)
    raise(errc::invalid_params, "k, rho, feature_width must be non-negative");
  EleneLParams p;
  p.mode = Mode::nd;
  p.pooling = Pooling::sum;
  p.k = k;
  p.rho = rho;
  int s_rows = p.table_rows();
  p.omega = s_rows;
  for (int s = 0; s < 3; ++s) p.w_nd[s] = Eigen::MatrixXd::Identity(s_rows, s_rows);

  Eigen::Index f = feature_width;
  p.phi_member.w = Eigen::MatrixXd::Zero(3 * s_rows, 2 * f + 3 * s_rows);
  p.phi_member.w.rightCols(3 * s_rows) = Eigen::MatrixXd::Identity(3 * s_rows, 3 * s_rows);
  p.phi_member.b = Eigen::VectorXd::Zero(3 * s_rows);
  p.phi_member.act = Activation::identity;

  p.phi_node_out.w = Eigen::MatrixXd::Zero(f, f + 3 * s_rows);
  p.phi_node_out.b = Eigen::VectorXd::Zero(f);
  p.phi_node_out.act = Activation::identity;

  p.gamma_nd = 0.0;
  p.gamma_ed = 0.0;
  return p;
}

SparseVec recover_histogram(const Graph& g, int v, int k, const EleneLParams& p_identity) {
  const EleneLParams& p = p_identity;
  int s_rows = p.table_rows();
  if (p.mode != Mode::nd || p.k != k || p.pooling != Pooling::sum || p.omega != s_rows)
    raise(errc::invalid_params, "recovery needs node-centric sum pooling with omega = table rows");
  for (int s = 0; s < 3; ++s)
    if (p.w_nd[s].rows() != s_rows || p.w_nd[s].cols() != s_rows || !p.w_nd[s].isIdentity(0.0))
      raise(errc::invalid_params, "recovery needs identity embedding tables");
  Eigen::Index in = p.phi_member.in();
  if (in < 3 * s_rows || (in - 3 * s_rows) % 2 != 0)
    raise(errc::invalid_params, "member map input must be 2f + 3 * table rows");
  Eigen::Index f = (in - 3 * s_rows) / 2;
  if (p.phi_member.out() != 3 * s_rows || p.phi_member.act != Activation::identity ||
      !p.phi_member.w.rightCols(3 * s_rows).isIdentity(0.0) ||
      (f > 0 && !p.phi_member.w.leftCols(2 * f).isZero(0.0)) || !p.phi_member.b.isZero(0.0))
    raise(errc::invalid_params, "recovery needs a pass-through member map");
  if (v < 0 || v >= g.node_count()) raise(errc::out_of_range, "root out of range");

  EgoView view = ego_view(g, v, k);
  Eigen::VectorXd zeros = Eigen::VectorXd::Zero(2 * f);
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(3 * s_rows);
  for (const Quadruplet& q : view.quads) {
    Eigen::VectorXd z(in);
    z.head(2 * f) = zeros;
    z.tail(3 * s_rows) = embed_node(q, p);
    sum += p.phi_member.apply(z);
  }

  SparseVec vec;
  vec.k = k;
  vec.d_max = p.rho;
  vec.dim = 3 * static_cast<std::int64_t>(s_rows);
  for (Eigen::Index i = 0; i < sum.size(); ++i) {
    double c = sum(i);
    if (c == 0.0) continue;
    auto rounded = static_cast<std::int64_t>(std::llround(c));
    if (std::abs(c - static_cast<double>(rounded)) > 1e-6)
      raise(errc::invalid_params, "pooled member sum is not an integer histogram");
    vec.entries.emplace_back(static_cast<std::int64_t>(i), rounded);
  }
  return vec;
}

namespace {

const char* act_name(Activation a) {
  switch (a) {
    case Activation::identity:
      return "identity";
    case Activation::relu:
      return "relu";
    case Activation::tanh:
      return "tanh";
  }
  raise(errc::invalid_params, "unknown activation");
}

Activation act_from(const std::string& name) {
  if (name == "identity") return Activation::identity;
  if (name == "relu") return Activation::relu;
  if (name == "tanh") return Activation::tanh;
  raise(errc::parse_error, "unknown activation '" + name + "'");
}

void write_matrix_rows(std::ostream& out, const Eigen::MatrixXd& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << ' ';
      out << m(r, c);
    }
    out << '\n';
  }
}

void expect_token(std::istream& in, const char* literal) {
  std::string tok;
  if (!(in >> tok) || tok != literal)
    raise(errc::parse_error, std::string("expected '") + literal + "' in parameter stream");
}

double read_double(std::istream& in) {
  double v = 0.0;
  if (!(in >> v)) raise(errc::parse_error, "expected a number in parameter stream");
  return v;
}

std::int64_t read_int(std::istream& in) {
  std::int64_t v = 0;
  if (!(in >> v)) raise(errc::parse_error, "expected an integer in parameter stream");
  return v;
}

Eigen::MatrixXd read_matrix_rows(std::istream& in, std::int64_t rows, std::int64_t cols) {
  if (rows < 0 || cols < 0) raise(errc::parse_error, "negative matrix shape");
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = read_double(in);
  return m;
}

void write_map(std::ostream& out, const char* name, const DenseMap& map) {
  out << "map " << name << ' ' << map.out() << ' ' << map.in() << ' ' << act_name(map.act) << '\n';
  write_matrix_rows(out, map.w);
  out << "bias";
  for (Eigen::Index i = 0; i < map.b.size(); ++i) out << ' ' << map.b(i);
  out << '\n';
}

DenseMap read_map(std::istream& in, const char* name) {
  expect_token(in, "map");
  expect_token(in, name);
  std::int64_t rows = read_int(in);
  std::int64_t cols = read_int(in);
  std::string act;
  if (!(in >> act)) raise(errc::parse_error, "expected an activation name");
  DenseMap map;
  map.act = act_from(act);
  map.w = read_matrix_rows(in, rows, cols);
  expect_token(in, "bias");
  map.b.resize(rows);
  for (Eigen::Index i = 0; i < rows; ++i) map.b(i) = read_double(in);
  return map;
}

}  // namespace

void write_params(std::ostream& out, const EleneLParams& p) {
  auto saved = out.precision(17);
  out << "elene-l v1\n";
  out << "mode " << (p.mode == Mode::nd ? "nd" : "ed") << '\n';
  out << "pooling " << (p.pooling == Pooling::sum ? "sum" : "masked_mean") << '\n';
  out << "k " << p.k << " rho " << p.rho << " omega " << p.omega << '\n';
  out << "gamma " << p.gamma_nd << ' ' << p.gamma_ed << '\n';
  for (int s = 0; s < 3; ++s) {
    out << "table nd" << s << ' ' << p.w_nd[s].rows() << ' ' << p.w_nd[s].cols() << '\n';
    write_matrix_rows(out, p.w_nd[s]);
  }
  if (p.mode == Mode::ed)
    for (int s = 0; s < 3; ++s) {
      out << "table ed" << s << ' ' << p.w_ed[s].rows() << ' ' << p.w_ed[s].cols() << '\n';
      write_matrix_rows(out, p.w_ed[s]);
    }
  write_map(out, "member", p.phi_member);
  write_map(out, "edge", p.phi_edge);
  write_map(out, "node_out", p.phi_node_out);
  write_map(out, "edge_out", p.phi_edge_out);
  out << "end\n";
  out.precision(saved);
}

EleneLParams read_params(std::istream& in) {
  expect_token(in, "elene-l");
  expect_token(in, "v1");
  EleneLParams p;
  std::string tok;
  expect_token(in, "mode");
  if (!(in >> tok)) raise(errc::parse_error, "expected a mode");
  if (tok == "nd")
    p.mode = Mode::nd;
  else if (tok == "ed")
    p.mode = Mode::ed;
  else
    raise(errc::parse_error, "unknown mode '" + tok + "'");
  expect_token(in, "pooling");
  if (!(in >> tok)) raise(errc::parse_error, "expected a pooling name");
  if (tok == "sum")
    p.pooling = Pooling::sum;
  else if (tok == "masked_mean")
    p.pooling = Pooling::masked_mean;
  else
    raise(errc::parse_error, "unknown pooling '" + tok + "'");
  expect_token(in, "k");
  p.k = static_cast<int>(read_int(in));
  expect_token(in, "rho");
  p.rho = static_cast<int>(read_int(in));
  expect_token(in, "omega");
  p.omega = static_cast<int>(read_int(in));
  expect_token(in, "gamma");
  p.gamma_nd = read_double(in);
  p.gamma_ed = read_double(in);
  for (int s = 0; s < 3; ++s) {
    expect_token(in, "table");
    expect_token(in, (std::string("nd") + std::to_string(s)).c_str());
    std::int64_t rows = read_int(in);
    std::int64_t cols = read_int(in);
    p.w_nd[s] = read_matrix_rows(in, rows, cols);
  }
  if (p.mode == Mode::ed)
    for (int s = 0; s < 3; ++s) {
      expect_token(in, "table");
      expect_token(in, (std::string("ed") + std::to_string(s)).c_str());
      std::int64_t rows = read_int(in);
      std::int64_t cols = read_int(in);
      p.w_ed[s] = read_matrix_rows(in, rows, cols);
    }
  p.phi_member = read_map(in, "member");
  p.phi_edge = read_map(in, "edge");
  p.phi_node_out = read_map(in, "node_out");
  p.phi_edge_out = read_map(in, "edge_out");
  expect_token(in, "end");
  return p;
}

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m) {
  auto saved = out.precision(17);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << ',';
      out << m(r, c);
    }
    out << '\n';
  }
  out.precision(saved);
}

Eigen::MatrixXd read_matrix_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      std::size_t comma = line.find(',', pos);
      std::string cell = line.substr(pos, comma == std::string::npos ? std::string::npos
                                                                     : comma - pos);
      std::size_t used = 0;
      double value = 0.0;
      try {
        value = std::stod(cell, &used);
      } catch (const std::exception&) {
        raise(errc::parse_error, "bad number '" + cell + "' in matrix");
      }
      while (used < cell.size() && (cell[used] == ' ' || cell[used] == '\t')) ++used;
      if (used != cell.size()) raise(errc::parse_error, "bad number '" + cell + "' in matrix");
      row.push_back(value);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size())
      raise(errc::parse_error, "ragged matrix rows");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) return Eigen::MatrixXd(0, 0);
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      m(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  return m;
}

}  // namespace elene
