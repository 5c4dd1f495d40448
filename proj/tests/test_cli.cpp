// Drives the installed binary end to end. The harness passes the binary path
// as the first plain argument; everything else is forwarded to doctest.
#define DOCTEST_CONFIG_IMPLEMENT
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "elene/encode.hpp"
#include "elene/graph.hpp"
#include "elene/records.hpp"
#include "elene/vectorize.hpp"

using namespace elene;

namespace {

std::string g_cli;      // binary under test
std::string g_scratch;  // temp dir, removed on exit

struct Run {
  int status = -1;
  std::string out, err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spill(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

std::string scratch_file(const std::string& name) { return g_scratch + "/" + name; }

Run run_cli(const std::string& args, const std::string& env = "") {
  static int serial = 0;
  std::string out_path = scratch_file("stdout." + std::to_string(serial));
  std::string err_path = scratch_file("stderr." + std::to_string(serial));
  ++serial;
  std::string cmd = env.empty() ? "" : env + " ";
  cmd += "\"" + g_cli + "\" " + args + " >" + out_path + " 2>" + err_path;
  int raw = std::system(cmd.c_str());
  Run r;
  if (raw != -1 && WIFEXITED(raw)) r.status = WEXITSTATUS(raw);
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  return r;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

std::vector<std::string> fields(const std::string& row) {
  std::vector<std::string> out;
  std::istringstream in(row);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(item);
  return out;
}

Graph parse_graph(const std::string& text) {
  std::istringstream in(text);
  return read_edge_list(in);
}

std::string family_bytes(const Graph& g) {
  std::ostringstream buf;
  write_edge_list(buf, g);
  return buf.str();
}

std::string nd_records(const Graph& g, int k) {
  std::ostringstream buf;
  for (const auto& ms : encode_graph_nd(g, k)) write_node_record(buf, ms, Mode::nd);
  return buf.str();
}

std::string ed_records(const Graph& g, int k) {
  std::ostringstream buf;
  EdEncoding enc = encode_graph_ed(g, k);
  for (const auto& ms : enc.nodes) write_node_record(buf, ms, Mode::ed);
  for (const auto& ms : enc.edges) write_edge_record(buf, ms);
  return buf.str();
}

std::string vec_lines(const Graph& g, int k, int d_max, bool igel) {
  std::ostringstream buf;
  for (const auto& ms : encode_graph_nd(g, k)) {
    SparseVec vec = igel ? to_igel_vector(ms, k, d_max) : to_sparse_vector(ms, k, d_max);
    write_vector_line(buf, ms.root, vec);
  }
  return buf.str();
}

}  // namespace

TEST_CASE("generate writes canonical edge lists for the fixed families") {
  Run rook = run_cli("generate - --family rook --n 4");
  CHECK(rook.status == 0);
  CHECK(rook.out == family_bytes(make_rook(4)));
  CHECK(rook.out.substr(0, 6) == "16 48\n");

  Run shri = run_cli("generate - --family shrikhande");
  CHECK(shri.status == 0);
  CHECK(shri.out == family_bytes(make_shrikhande()));
  CHECK(shri.out.substr(0, 6) == "16 48\n");

  Run cyc = run_cli("generate - --family cycle --n 6");
  CHECK(cyc.status == 0);
  CHECK(cyc.out == "6 6\n0 1\n0 5\n1 2\n2 3\n3 4\n4 5\n");

  Run tri = run_cli("generate - --family disjoint_triangles --n 2");
  CHECK(tri.status == 0);
  CHECK(tri.out == "6 6\n0 1\n0 2\n1 2\n3 4\n3 5\n4 5\n");
}

TEST_CASE("generate builds random families deterministically from the seed") {
  Run a = run_cli("generate - --family random_regular --n 20 --d 3 --seed 7");
  Run b = run_cli("generate - --family random_regular --n 20 --d 3 --seed 7");
  REQUIRE(a.status == 0);
  CHECK(a.out == b.out);
  Graph g = parse_graph(a.out);
  CHECK(g.node_count() == 20);
  for (int v = 0; v < g.node_count(); ++v) CHECK(g.degree(v) == 3);

  Run ba = run_cli("generate - --family barabasi_albert --n 30 --m-min 2 --seed 5");
  REQUIRE(ba.status == 0);
  Graph h = parse_graph(ba.out);
  CHECK(h.node_count() == 30);
  CHECK(h.edge_count() > 0);
}

TEST_CASE("generate requires a seed for random families") {
  Run reg = run_cli("generate - --family random_regular --n 20 --d 3");
  CHECK(reg.status == 2);
  CHECK(!reg.err.empty());
  Run ba = run_cli("generate - --family barabasi_albert --n 30 --m-min 2");
  CHECK(ba.status == 2);
  // deterministic families stay seedless
  CHECK(run_cli("generate - --family rook --n 3").status == 0);
}

TEST_CASE("encode reproduces the library records byte for byte") {
  std::string rook_path = scratch_file("rook4.txt");
  REQUIRE(run_cli("generate " + rook_path + " --family rook --n 4").status == 0);
  Graph g = make_rook(4);

  Run nd = run_cli("encode " + rook_path + " - --k 1");
  CHECK(nd.status == 0);
  CHECK(nd.out == nd_records(g, 1));

  // writing to a file instead of stdout carries the same bytes
  std::string out_path = scratch_file("rook4.nd.jsonl");
  Run to_file = run_cli("encode " + rook_path + " " + out_path + " --k 1");
  CHECK(to_file.status == 0);
  CHECK(to_file.out.empty());
  CHECK(slurp(out_path) == nd.out);

  Run ed = run_cli("encode " + rook_path + " - --k 1 --mode ed");
  CHECK(ed.status == 0);
  CHECK(ed.out == ed_records(g, 1));

  // 16 node records, then one record per edge; every edge sees an induced
  // 4-clique intersection, so each endpoint view carries degree mass 2*6
  std::vector<std::string> ls = lines(ed.out);
  REQUIRE(ls.size() == 64);
  for (std::size_t i = 16; i < ls.size(); ++i) {
    EdgeRecord rec = parse_edge_record(ls[i]);
    CHECK(rec.k == 1);
    std::int64_t mass_a = 0, mass_b = 0;
    for (const auto& [t, count] : rec.pairs) {
      mass_a += count * t.a.d;
      mass_b += count * t.b.d;
    }
    CHECK(mass_a == 12);
    CHECK(mass_b == 12);
  }
}

TEST_CASE("encode round-trips through the parsers") {
  std::string path = scratch_file("cycle7.txt");
  REQUIRE(run_cli("generate " + path + " --family cycle --n 7").status == 0);
  Graph g = make_cycle(7);

  Run r = run_cli("encode " + path + " - --k 2");
  REQUIRE(r.status == 0);
  std::vector<QuadMultiset> want = encode_graph_nd(g, 2);
  std::vector<std::string> ls = lines(r.out);
  REQUIRE(ls.size() == want.size());
  for (std::size_t i = 0; i < ls.size(); ++i) {
    NodeRecord rec = parse_node_record(ls[i]);
    CHECK(rec.id == want[i].root);
    CHECK(rec.k == 2);
    CHECK(rec.mode == Mode::nd);
    CHECK(rec.quads == want[i].entries);
  }
}

TEST_CASE("encode writes sparse vector and histogram lines") {
  std::string rook_path = scratch_file("rook4v.txt");
  REQUIRE(run_cli("generate " + rook_path + " --family rook --n 4").status == 0);
  Graph g = make_rook(4);

  Run vec = run_cli("encode " + rook_path + " - --k 1 --format vec");
  CHECK(vec.status == 0);
  CHECK(vec.out == vec_lines(g, 1, 6, false));

  Run igel = run_cli("encode " + rook_path + " - --k 1 --format igel");
  CHECK(igel.status == 0);
  CHECK(igel.out == vec_lines(g, 1, 6, true));

  // an explicit degree cap widens the layout
  Run capped = run_cli("encode " + rook_path + " - --k 1 --format vec --dmax 8");
  REQUIRE(capped.status == 0);
  VectorLine first = parse_vector_line(lines(capped.out).front());
  CHECK(first.dim == 3 * 2 * 9);
}

TEST_CASE("encode rejects vector output in edge mode") {
  std::string path = scratch_file("rej.txt");
  REQUIRE(run_cli("generate " + path + " --family cycle --n 5").status == 0);
  Run vec = run_cli("encode " + path + " - --k 1 --mode ed --format vec");
  CHECK(vec.status == 2);
  CHECK(!vec.err.empty());
  CHECK(run_cli("encode " + path + " - --k 1 --mode ed --format igel").status == 2);
}

TEST_CASE("encode maps input problems to the parse exit code") {
  Run missing = run_cli("encode " + scratch_file("nosuch.txt") + " - --k 1");
  CHECK(missing.status == 1);
  CHECK(!missing.err.empty());

  std::string garbled = scratch_file("garbled.txt");
  spill(garbled, "this is not a graph\n");
  CHECK(run_cli("encode " + garbled + " - --k 1").status == 1);

  std::string stub = scratch_file("stub.txt");
  spill(stub, "2 1\n0 1\n");
  CHECK(run_cli("encode " + stub + " - --k -1").status == 2);
}

TEST_CASE("usage errors exit with the usage code") {
  CHECK(run_cli("").status == 2);
  CHECK(run_cli("frobnicate").status == 2);
  CHECK(run_cli("encode in.txt -").status == 2);  // --k is required
  std::string path = scratch_file("usage.txt");
  spill(path, "2 1\n0 1\n");
  CHECK(run_cli("encode " + path + " - --k 1 --format fancy").status == 2);
  CHECK(run_cli("check --suite bogus").status == 2);
  CHECK(run_cli("--help").status == 0);
}

TEST_CASE("distinguish prints a verdict and the signature sizes") {
  std::string rook_path = scratch_file("dis_rook.txt");
  std::string shri_path = scratch_file("dis_shri.txt");
  REQUIRE(run_cli("generate " + rook_path + " --family rook --n 4").status == 0);
  REQUIRE(run_cli("generate " + shri_path + " --family shrikhande").status == 0);

  Run nd = run_cli("distinguish " + rook_path + " " + shri_path + " --k 2");
  CHECK(nd.status == 0);
  CHECK(nd.out == "EQUIVALENT\nnode forms: 16 vs 16\n");

  Run ed = run_cli("distinguish " + rook_path + " " + shri_path + " --k 1 --mode ed");
  CHECK(ed.status == 0);
  CHECK(ed.out == "DISTINGUISHED\nnode forms: 16 vs 16; edge forms: 48 vs 48\n");

  Run wl = run_cli("distinguish " + rook_path + " " + shri_path + " --wl1");
  CHECK(wl.status == 0);
  CHECK(wl.out == "EQUIVALENT\nstable color classes: 1 vs 1\n");

  std::string cyc_path = scratch_file("dis_cyc.txt");
  std::string tri_path = scratch_file("dis_tri.txt");
  REQUIRE(run_cli("generate " + cyc_path + " --family cycle --n 6").status == 0);
  REQUIRE(run_cli("generate " + tri_path + " --family disjoint_triangles --n 2").status == 0);
  Run split = run_cli("distinguish " + cyc_path + " " + tri_path + " --k 1");
  CHECK(split.status == 0);
  CHECK(split.out == "DISTINGUISHED\nnode forms: 6 vs 6\n");

  CHECK(run_cli("distinguish " + rook_path + " " + shri_path).status == 2);  // needs --k
}

TEST_CASE("bench emits the fixed header and one row per grid point") {
  Run r = run_cli(
      "bench --families cycle --sizes 64,128 --degrees 2 --k-list 1,2 "
      "--modes nd,ed --threads-list 1 --repeats 2 --csv -");
  REQUIRE(r.status == 0);
  std::vector<std::string> ls = lines(r.out);
  REQUIRE(ls.size() == 1 + 2 * 2 * 2 * 2);
  CHECK(ls[0] == "family,n,d,k,mode,threads,wall_s,edges_traversed,nonzeros,peak_bytes");

  for (std::size_t i = 1; i < ls.size(); ++i) {
    std::vector<std::string> f = fields(ls[i]);
    REQUIRE(f.size() == 10);
    CHECK(f[0] == "cycle");
    int n = std::stoi(f[1]);
    CHECK((n == 64 || n == 128));
    CHECK(f[2] == "2");
    int k = std::stoi(f[3]);
    CHECK((k == 1 || k == 2));
    CHECK((f[4] == "nd" || f[4] == "ed"));
    CHECK(f[5] == "1");
    CHECK(std::stod(f[6]) >= 0.0);
    // on a long cycle the bounded traversal touches exactly 2^k edges per root
    // regardless of mode, and scatters 3 nonzeros per slot per extra level
    CHECK(std::stoll(f[7]) == static_cast<long long>(n) * (k == 1 ? 2 : 4));
    CHECK(std::stoll(f[8]) == static_cast<long long>(n) * (k == 1 ? 6 : 9));
    CHECK(std::stoll(f[9]) >= 0);
  }
}

TEST_CASE("bench validates its parameter grid") {
  CHECK(run_cli("bench --families cycle --sizes 8 --repeats 0 --csv -").status == 2);
  CHECK(run_cli("bench --families cycle --sizes 8 --modes fancy --csv -").status == 2);
  CHECK(run_cli("bench --families nosuch --sizes 8 --csv -").status == 2);
  CHECK(run_cli("bench --families cycle --sizes 12x --csv -").status == 2);
  CHECK(run_cli("bench --families cycle --sizes 8 --k-list \"\" --csv -").status == 2);
}

TEST_CASE("encode output is byte-identical across thread counts") {
  std::string ba_path = scratch_file("ba60.txt");
  REQUIRE(run_cli("generate " + ba_path + " --family barabasi_albert --n 60 --m-min 2 --seed 9")
              .status == 0);
  std::string want_ed = ed_records(make_barabasi_albert(60, 2, 9), 2);
  for (int t : {1, 2, 8}) {
    Run r = run_cli("encode " + ba_path + " - --k 2 --mode ed --threads " + std::to_string(t));
    REQUIRE(r.status == 0);
    CHECK(r.out == want_ed);
  }

  Graph g = make_barabasi_albert(60, 2, 9);
  std::string want_vec = vec_lines(g, 2, g.max_degree(), false);
  for (int t : {1, 8}) {
    Run r = run_cli("encode " + ba_path + " - --k 2 --format vec --threads " + std::to_string(t));
    REQUIRE(r.status == 0);
    CHECK(r.out == want_vec);
  }
}

TEST_CASE("thread count defaults to the environment variable") {
  std::string path = scratch_file("envball.txt");
  REQUIRE(run_cli("generate " + path + " --family barabasi_albert --n 40 --m-min 2 --seed 3")
              .status == 0);
  std::string want = ed_records(make_barabasi_albert(40, 2, 3), 2);

  Run from_env = run_cli("encode " + path + " - --k 2 --mode ed", "ELENE_THREADS=3");
  CHECK(from_env.status == 0);
  CHECK(from_env.out == want);

  // a malformed value falls back to a single worker instead of failing
  Run bad_env = run_cli("encode " + path + " - --k 2 --mode ed", "ELENE_THREADS=banana");
  CHECK(bad_env.status == 0);
  CHECK(bad_env.out == want);
}

TEST_CASE("empty graph encodes to empty output") {
  std::string path = scratch_file("null.txt");
  spill(path, "0 0\n");
  Run r = run_cli("encode " + path + " - --k 1");
  CHECK(r.status == 0);
  CHECK(r.out.empty());
}

TEST_CASE("check subcommand reports every suite result") {
  Run all = run_cli("check --suite all");
  CHECK(all.status == 0);
  std::vector<std::string> ls = lines(all.out);
  CHECK(ls.size() >= 8);
  for (const std::string& line : ls) CHECK(line.substr(0, 5) == "PASS ");

  Run thm = run_cli("check --suite theorems");
  CHECK(thm.status == 0);
  Run grad = run_cli("check --suite gradients");
  CHECK(grad.status == 0);
  CHECK(thm.out.size() + grad.out.size() == all.out.size());
}

int main(int argc, char** argv) {
  std::vector<char*> pass;
  pass.push_back(argv[0]);
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    if (g_cli.empty() && !arg.empty() && arg[0] != '-')
      g_cli = arg;
    else
      pass.push_back(argv[i]);
  }
  if (g_cli.empty()) {
    std::fprintf(stderr, "usage: test_cli <path to the elene binary> [doctest options]\n");
    return 64;
  }

  std::string tmpl = (std::filesystem::temp_directory_path() / "elene_cli_XXXXXX").string();
  std::vector<char> raw(tmpl.begin(), tmpl.end());
  raw.push_back('\0');
  if (!mkdtemp(raw.data())) {
    std::perror("mkdtemp");
    return 64;
  }
  g_scratch = raw.data();

  doctest::Context ctx;
  ctx.applyCommandLine(static_cast<int>(pass.size()), pass.data());
  int rc = ctx.run();
  std::filesystem::remove_all(g_scratch);
  return rc;
}
