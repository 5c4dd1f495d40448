#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "elene/error.hpp"
#include "elene/graph.hpp"
#include "support/iso.hpp"
#include "support/oracles.hpp"

using namespace elene;

namespace {

bool raises(errc code, const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code() == code;
  }
  return false;
}

}  // namespace

TEST_CASE("construction canonicalizes edges and sorts adjacency") {
  std::vector<Edge> edges{{3, 1}, {0, 3}, {2, 0}, {1, 0}};
  Graph g = Graph::from_edge_list(4, edges);
  CHECK(g.node_count() == 4);
  CHECK(g.edge_count() == 4);
  // canonical edge order: u < v, lexicographic
  std::vector<Edge> want{{0, 1}, {0, 2}, {0, 3}, {1, 3}};
  CHECK(std::equal(g.edges().begin(), g.edges().end(), want.begin(), want.end()));
  CHECK(g.edge(0) == Edge{0, 1});
  CHECK(g.edge_id(3, 0).value() == 2);  // order-insensitive lookup
  CHECK(g.edge_id(1, 3).value() == 3);
  CHECK(!g.edge_id(2, 3).has_value());
  CHECK(g.degree(0) == 3);
  CHECK(g.max_degree() == 3);
  auto nb = g.neighbors(0);
  CHECK(std::is_sorted(nb.begin(), nb.end()));
  CHECK(g.has_edge(0, 2));
  CHECK(!g.has_edge(2, 3));
}

TEST_CASE("construction rejects malformed input") {
  std::vector<Edge> self{{1, 1}};
  std::vector<Edge> dup{{0, 1}, {1, 0}};
  std::vector<Edge> range{{0, 5}};
  CHECK(raises(errc::invalid_params, [] { Graph::from_edge_list(-1, {}); }));
  CHECK(raises(errc::self_loop, [&] { Graph::from_edge_list(3, self); }));
  CHECK(raises(errc::duplicate_edge, [&] { Graph::from_edge_list(3, dup); }));
  CHECK(raises(errc::out_of_range, [&] { Graph::from_edge_list(3, range); }));
  CHECK(raises(errc::not_an_edge, [] {
    Graph g = make_cycle(3);
    g.edge(3);
  }));
}

TEST_CASE("bfs levels are exact hop distances, truncated at k") {
  Graph c6 = make_cycle(6);
  LevelMap lm = bfs_levels(c6, 0, 3);
  CHECK(lm.size() == 6);
  CHECK(lm.at(0).value() == 0);
  CHECK(lm.at(1).value() == 1);
  CHECK(lm.at(5).value() == 1);
  CHECK(lm.at(2).value() == 2);
  CHECK(lm.at(4).value() == 2);
  CHECK(lm.at(3).value() == 3);

  LevelMap near = bfs_levels(c6, 0, 1);
  CHECK(near.size() == 3);
  CHECK(!near.contains(2));

  LevelMap self = bfs_levels(c6, 0, 0);
  CHECK(self.size() == 1);

  // matches the independent BFS on every node of a random graph
  Graph g = testsupport::random_graph(24, 0.15, 99);
  for (int v = 0; v < g.node_count(); ++v) {
    std::vector<int> want = testsupport::bfs_all(g, v);
    LevelMap got = bfs_levels(g, v, g.node_count());
    for (int u = 0; u < g.node_count(); ++u) {
      if (want[static_cast<std::size_t>(u)] < 0)
        CHECK(!got.contains(u));
      else
        CHECK(got.at(u).value() == want[static_cast<std::size_t>(u)]);
    }
  }
}

TEST_CASE("ego subgraph of a rook graph root has the documented shape") {
  Graph rook = make_rook(4);
  EgoNet ego = ego_subgraph(rook, 0, 1);
  CHECK(ego.nodes.size() == 7);
  CHECK(ego.edges.size() == 12);
  // degree multiset inside the ego-net: root 6, each neighbor 3
  std::map<int, int> inside;
  for (const auto& [a, b] : ego.edges) {
    ++inside[a];
    ++inside[b];
  }
  std::multiset<int> degs;
  for (const auto& [node, deg] : inside) degs.insert(deg);
  CHECK(degs == std::multiset<int>{3, 3, 3, 3, 3, 3, 6});
}

TEST_CASE("permute relabels consistently") {
  Graph p3 = Graph::from_edge_list(3, std::vector<Edge>{{0, 1}, {1, 2}});
  std::vector<int> rev{2, 1, 0};
  Graph q = permute(p3, rev);
  CHECK(q.has_edge(2, 1));
  CHECK(q.has_edge(1, 0));
  CHECK(!q.has_edge(0, 2));

  std::vector<int> bad{0, 0, 1};
  std::vector<int> shorter{0, 1};
  CHECK(raises(errc::not_a_bijection, [&] { permute(p3, bad); }));
  CHECK(raises(errc::not_a_bijection, [&] { permute(p3, shorter); }));

  Graph g = testsupport::random_graph(20, 0.2, 5);
  std::vector<int> perm = testsupport::random_permutation(20, 6);
  Graph h = permute(g, perm);
  CHECK(h.edge_count() == g.edge_count());
  for (const auto& [u, v] : g.edges())
    CHECK(h.has_edge(perm[static_cast<std::size_t>(u)], perm[static_cast<std::size_t>(v)]));
}

TEST_CASE("rook graphs: n^2 nodes, 2(n-1)-regular") {
  for (int n = 1; n <= 5; ++n) {
    Graph g = make_rook(n);
    CHECK(g.node_count() == n * n);
    CHECK(g.edge_count() == static_cast<std::int64_t>(n) * n * (n - 1));
    for (int v = 0; v < g.node_count(); ++v) CHECK(g.degree(v) == 2 * (n - 1));
  }
  CHECK(raises(errc::invalid_params, [] { make_rook(0); }));
}

TEST_CASE("the 16-node triangular lattice graph is 6-regular and not a rook graph") {
  Graph s = make_shrikhande();
  CHECK(s.node_count() == 16);
  CHECK(s.edge_count() == 48);
  for (int v = 0; v < 16; ++v) CHECK(s.degree(v) == 6);
  Graph rook = make_rook(4);
  CHECK(!testsupport::isomorphic(s, rook));
  // sanity of the isomorphism oracle itself: relabelings are isomorphic
  std::vector<int> perm = testsupport::random_permutation(16, 3);
  CHECK(testsupport::isomorphic(rook, permute(rook, perm)));
}

TEST_CASE("cycles and disjoint triangles") {
  Graph c6 = make_cycle(6);
  CHECK(c6.node_count() == 6);
  CHECK(c6.edge_count() == 6);
  for (int v = 0; v < 6; ++v) CHECK(c6.degree(v) == 2);
  CHECK(raises(errc::invalid_params, [] { make_cycle(2); }));

  Graph t2 = make_disjoint_triangles(2);
  CHECK(t2.node_count() == 6);
  CHECK(t2.edge_count() == 6);
  for (int v = 0; v < 6; ++v) CHECK(t2.degree(v) == 2);
  CHECK(!t2.has_edge(2, 3));
  CHECK(raises(errc::invalid_params, [] { make_disjoint_triangles(0); }));
}

TEST_CASE("random regular graphs are simple and exactly d-regular") {
  struct Want {
    int n, d;
  };
  for (Want w : {Want{24, 3}, Want{50, 4}, Want{13, 4}, Want{100, 12}}) {
    Graph g = make_random_regular(w.n, w.d, 7);
    CHECK(g.node_count() == w.n);
    CHECK(g.edge_count() == static_cast<std::int64_t>(w.n) * w.d / 2);
    for (int v = 0; v < w.n; ++v) CHECK(g.degree(v) == w.d);
  }
  // reproducible per seed
  Graph a = make_random_regular(40, 5, 11);
  Graph b = make_random_regular(40, 5, 11);
  Graph c = make_random_regular(40, 5, 12);
  CHECK(std::equal(a.edges().begin(), a.edges().end(), b.edges().begin(), b.edges().end()));
  CHECK(!std::equal(a.edges().begin(), a.edges().end(), c.edges().begin(), c.edges().end()));

  CHECK(raises(errc::invalid_params, [] { make_random_regular(5, 3, 1); }));  // odd n * d
  CHECK(raises(errc::invalid_params, [] { make_random_regular(4, 4, 1); }));  // d >= n
}

TEST_CASE("preferential attachment graphs grow one hub-biased node at a time") {
  Graph g = make_barabasi_albert(30, 2, 5);
  CHECK(g.node_count() == 30);
  CHECK(g.edge_count() == 2 + static_cast<std::int64_t>(30 - 3) * 2);
  for (int v = 0; v < 30; ++v) CHECK(g.degree(v) >= 2);
  Graph h = make_barabasi_albert(30, 2, 5);
  CHECK(std::equal(g.edges().begin(), g.edges().end(), h.edges().begin(), h.edges().end()));
  CHECK(raises(errc::invalid_params, [] { make_barabasi_albert(3, 3, 1); }));
}

TEST_CASE("edge list io round-trips the canonical format") {
  Graph g = testsupport::random_graph(18, 0.2, 42);
  std::ostringstream out;
  write_edge_list(out, g);
  std::istringstream in(out.str());
  Graph back = read_edge_list(in);
  CHECK(back.node_count() == g.node_count());
  CHECK(std::equal(g.edges().begin(), g.edges().end(), back.edges().begin(), back.edges().end()));

  // header first, optionally after comment lines
  std::istringstream commented("# graph\n# more\n3 1\n0 2\n");
  Graph c = read_edge_list(commented);
  CHECK(c.has_edge(0, 2));

  std::istringstream empty_graph("0 0\n");
  CHECK(read_edge_list(empty_graph).node_count() == 0);
}

TEST_CASE("edge list reader rejects malformed input") {
  auto reject = [](const std::string& text) {
    std::istringstream in(text);
    return raises(errc::parse_error, [&] { read_edge_list(in); });
  };
  CHECK(reject(""));
  CHECK(reject("nonsense\n"));
  CHECK(reject("3\n"));
  CHECK(reject("3 2\n0 1\n"));                    // fewer edges than promised
  CHECK(reject("3 1\n0 1 9\n"));                  // trailing token
  CHECK(reject("3 1\n0 7\n"));                    // endpoint out of range
  CHECK(reject("3 1\n0 99999999999999999999\n")); // would overflow
  CHECK(reject("3 2\n0 1\n1 0\n"));               // duplicate edge
  CHECK(reject("3 1\n1 1\n"));                    // self-loop
  CHECK(raises(errc::parse_error, [] { read_edge_list_file("/nonexistent/file.el"); }));
}
