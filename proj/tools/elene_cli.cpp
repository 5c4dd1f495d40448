// Command-line front end: encode graph files, generate benchmark families,
// compare graphs, run the scaling benchmark, and run the self-checks.
//
// Exit codes: 0 ok, 1 input parse error, 2 invalid parameters or usage,
// 3 self-check failure.

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/resource.h>
#include <vector>

#include "elene/checks.hpp"
#include "elene/encode.hpp"
#include "elene/error.hpp"
#include "elene/expressivity.hpp"
#include "elene/graph.hpp"
#include "elene/records.hpp"
#include "elene/vectorize.hpp"

namespace {

int env_default_threads() {
  const char* raw = std::getenv("ELENE_THREADS");
  if (!raw) return 1;
  char* end = nullptr;
  long value = std::strtol(raw, &end, 10);
  if (end == raw || *end != '\0' || value < 1 || value > 4096) return 1;
  return static_cast<int>(value);
}

void write_text_output(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) elene::raise(elene::errc::invalid_params, "cannot open output file '" + path + "'");
  out << content;
  if (!out) elene::raise(elene::errc::invalid_params, "cannot write output file '" + path + "'");
}

std::vector<std::string> split_list(const std::string& raw) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(raw);
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::vector<int> int_list(const std::string& raw, const char* what) {
  std::vector<int> out;
  for (const std::string& item : split_list(raw)) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      elene::raise(elene::errc::invalid_params,
                   std::string("bad ") + what + " entry '" + item + "'");
    }
  }
  if (out.empty()) elene::raise(elene::errc::invalid_params, std::string(what) + " list is empty");
  return out;
}

long peak_rss_kb() {
  rusage usage{};
  getrusage(RUSAGE_SELF, &usage);
  return usage.ru_maxrss;
}

struct EncodeArgs {
  std::string input, output;
  int k = 0;
  std::string mode = "nd";
  std::string format = "quads";
  int dmax = -1;
  int threads = 1;
};

int run_encode(const EncodeArgs& a) {
  elene::Graph g = elene::read_edge_list_file(a.input);
  elene::Mode mode = a.mode == "ed" ? elene::Mode::ed : elene::Mode::nd;
  std::ostringstream buf;

  if (a.format == "quads") {
    if (mode == elene::Mode::nd) {
      for (const auto& ms : elene::encode_graph_nd(g, a.k, a.threads))
        elene::write_node_record(buf, ms, mode);
    } else {
      elene::EdEncoding enc = elene::encode_graph_ed(g, a.k, a.threads);
      for (const auto& ms : enc.nodes) elene::write_node_record(buf, ms, mode);
      for (const auto& ms : enc.edges) elene::write_edge_record(buf, ms);
    }
  } else {
    if (mode == elene::Mode::ed)
      elene::raise(elene::errc::invalid_params,
                   "sparse vectors are defined for node encodings; use --mode nd with --format " +
                       a.format + ", or --format quads for edge records");
    int dmax = a.dmax >= 0 ? a.dmax : g.max_degree();
    for (const auto& ms : elene::encode_graph_nd(g, a.k, a.threads)) {
      elene::SparseVec vec = a.format == "vec" ? elene::to_sparse_vector(ms, a.k, dmax)
                                               : elene::to_igel_vector(ms, a.k, dmax);
      elene::write_vector_line(buf, ms.root, vec);
    }
  }
  write_text_output(a.output, buf.str());
  return 0;
}

struct GenerateArgs {
  std::string output, family;
  int n = -1;
  int d = -1;
  int m_min = -1;
  int retries = 100;
  std::uint64_t seed = 0;
  bool seeded = false;
};

elene::Graph build_family(const GenerateArgs& a) {
  if (a.family == "rook") return elene::make_rook(a.n);
  if (a.family == "shrikhande") return elene::make_shrikhande();
  if (a.family == "cycle") return elene::make_cycle(a.n);
  if (a.family == "disjoint_triangles") return elene::make_disjoint_triangles(a.n);
  if (!a.seeded)
    elene::raise(elene::errc::invalid_params, "--seed is required for random families");
  if (a.family == "random_regular")
    return elene::make_random_regular(a.n, a.d, a.seed, a.retries);
  return elene::make_barabasi_albert(a.n, a.m_min, a.seed);
}

int run_generate(const GenerateArgs& a) {
  elene::Graph g = build_family(a);
  if (a.output == "-") {
    elene::write_edge_list(std::cout, g);
    return 0;
  }
  elene::write_edge_list_file(a.output, g);
  return 0;
}

struct DistinguishArgs {
  std::string g1, g2;
  int k = -1;
  std::string mode = "nd";
  bool wl1 = false;
};

int run_distinguish(const DistinguishArgs& a) {
  elene::Graph g1 = elene::read_edge_list_file(a.g1);
  elene::Graph g2 = elene::read_edge_list_file(a.g2);
  if (a.wl1) {
    bool diff = elene::wl1_distinguish(g1, g2);
    std::cout << (diff ? "DISTINGUISHED" : "EQUIVALENT") << '\n';
    std::cout << "stable color classes: " << elene::wl1_refine(g1).histogram.size() << " vs "
              << elene::wl1_refine(g2).histogram.size() << '\n';
    return 0;
  }
  if (a.k < 0)
    elene::raise(elene::errc::invalid_params, "--k is required unless --wl1 is given");
  elene::Mode mode = a.mode == "ed" ? elene::Mode::ed : elene::Mode::nd;
  elene::GraphSignature s1 = elene::graph_signature(g1, a.k, mode);
  elene::GraphSignature s2 = elene::graph_signature(g2, a.k, mode);
  bool diff = !(s1 == s2);
  std::cout << (diff ? "DISTINGUISHED" : "EQUIVALENT") << '\n';
  std::cout << "node forms: " << s1.node_forms.size() << " vs " << s2.node_forms.size();
  if (mode == elene::Mode::ed)
    std::cout << "; edge forms: " << s1.edge_forms.size() << " vs " << s2.edge_forms.size();
  std::cout << '\n';
  return 0;
}

struct BenchArgs {
  std::string families = "random_regular";
  std::string sizes = "1000";
  std::string degrees = "12";
  std::string k_list = "1";
  std::string modes = "nd";
  std::string threads_list;
  int repeats = 1;
  std::uint64_t seed = 1;
  std::string csv;
};

elene::Graph bench_graph(const std::string& family, int n, int d, std::uint64_t seed) {
  if (family == "rook") return elene::make_rook(n);
  if (family == "shrikhande") return elene::make_shrikhande();
  if (family == "cycle") return elene::make_cycle(n);
  if (family == "disjoint_triangles") return elene::make_disjoint_triangles(n);
  if (family == "random_regular") return elene::make_random_regular(n, d, seed);
  if (family == "barabasi_albert") return elene::make_barabasi_albert(n, d, seed);
  elene::raise(elene::errc::invalid_params, "unknown family '" + family + "'");
}

int run_bench(const BenchArgs& a) {
  std::vector<std::string> families = split_list(a.families);
  std::vector<int> sizes = int_list(a.sizes, "size");
  std::vector<int> degrees = int_list(a.degrees, "degree");
  std::vector<int> ks = int_list(a.k_list, "k");
  std::vector<std::string> modes = split_list(a.modes);
  std::vector<int> threads = int_list(a.threads_list, "threads");
  if (families.empty() || modes.empty())
    elene::raise(elene::errc::invalid_params, "family and mode lists must be non-empty");
  if (a.repeats < 1) elene::raise(elene::errc::invalid_params, "--repeats must be >= 1");
  for (const std::string& mode : modes)
    if (mode != "nd" && mode != "ed")
      elene::raise(elene::errc::invalid_params, "unknown mode '" + mode + "'");

  std::ostringstream buf;
  buf << "family,n,d,k,mode,threads,wall_s,edges_traversed,nonzeros,peak_bytes\n";

  for (const std::string& family : families)
    for (int n : sizes)
      for (int d : degrees) {
        elene::Graph g = bench_graph(family, n, d, a.seed);
        int dmax = g.max_degree();
        for (int k : ks)
          for (const std::string& mode_name : modes)
            for (int t : threads)
              for (int rep = 0; rep < a.repeats; ++rep) {
                long rss_before = peak_rss_kb();
                elene::EncodeStats stats;
                std::vector<elene::QuadMultiset> nodes;
                auto t0 = std::chrono::steady_clock::now();
                if (mode_name == "nd") {
                  nodes = elene::encode_graph_nd(g, k, t, &stats);
                } else {
                  nodes = elene::encode_graph_ed(g, k, t, &stats).nodes;
                }
                auto t1 = std::chrono::steady_clock::now();
                long rss_after = peak_rss_kb();

                std::int64_t nonzeros = 0;
                for (const auto& ms : nodes)
                  nonzeros += elene::to_sparse_vector(ms, k, dmax).nonzeros();
                double wall = std::chrono::duration<double>(t1 - t0).count();
                long peak_kb = std::max(0L, rss_after - rss_before);
                buf << family << ',' << g.node_count() << ',' << dmax << ',' << k << ','
                    << mode_name << ',' << t << ',' << wall << ',' << stats.edges_traversed << ','
                    << nonzeros << ',' << peak_kb * 1024L << '\n';
              }
      }
  write_text_output(a.csv, buf.str());
  return 0;
}

int run_check(const std::string& suite) {
  std::vector<elene::CheckResult> results;
  if (suite == "theorems" || suite == "all") {
    auto batch = elene::structure_checks();
    results.insert(results.end(), batch.begin(), batch.end());
  }
  if (suite == "gradients" || suite == "all") {
    auto batch = elene::gradient_checks();
    results.insert(results.end(), batch.begin(), batch.end());
  }
  bool all_pass = true;
  for (const auto& r : results) {
    std::cout << (r.pass ? "PASS" : "FAIL") << ' ' << r.name << ": " << r.detail << '\n';
    all_pass = all_pass && r.pass;
  }
  return all_pass ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"edge-level ego-network encodings"};
  app.require_subcommand(1);
  int default_threads = env_default_threads();

  EncodeArgs encode;
  encode.threads = default_threads;
  CLI::App* encode_cmd = app.add_subcommand("encode", "encode a graph file into line records");
  encode_cmd->add_option("input", encode.input, "edge-list file")->required();
  encode_cmd->add_option("output", encode.output, "output file, or - for stdout")->required();
  encode_cmd->add_option("--k", encode.k, "ego-net depth")->required();
  encode_cmd->add_option("--mode", encode.mode)->check(CLI::IsMember({"nd", "ed"}));
  encode_cmd->add_option("--format", encode.format)->check(CLI::IsMember({"quads", "vec", "igel"}));
  encode_cmd->add_option("--dmax", encode.dmax, "degree cap for vector layouts");
  encode_cmd->add_option("--threads", encode.threads);

  GenerateArgs gen;
  CLI::App* gen_cmd = app.add_subcommand("generate", "write a named graph family as an edge list");
  gen_cmd->add_option("output", gen.output, "output file, or - for stdout")->required();
  gen_cmd->add_option("--family", gen.family)
      ->required()
      ->check(CLI::IsMember({"rook", "shrikhande", "cycle", "disjoint_triangles", "random_regular",
                             "barabasi_albert"}));
  gen_cmd->add_option("--n", gen.n, "size parameter (side, length, count, or node count)");
  gen_cmd->add_option("--d", gen.d, "degree for random_regular");
  gen_cmd->add_option("--m-min", gen.m_min, "attachment count for barabasi_albert");
  gen_cmd->add_option("--retries", gen.retries, "pairing restarts for random_regular");
  CLI::Option* seed_opt = gen_cmd->add_option("--seed", gen.seed, "mandatory for random families");

  DistinguishArgs dis;
  CLI::App* dis_cmd = app.add_subcommand("distinguish", "compare two graphs by signature");
  dis_cmd->add_option("g1", dis.g1)->required();
  dis_cmd->add_option("g2", dis.g2)->required();
  dis_cmd->add_option("--k", dis.k, "ego-net depth");
  dis_cmd->add_option("--mode", dis.mode)->check(CLI::IsMember({"nd", "ed"}));
  dis_cmd->add_flag("--wl1", dis.wl1, "run color refinement instead of the encoding");

  BenchArgs bench;
  bench.threads_list = std::to_string(default_threads);
  CLI::App* bench_cmd = app.add_subcommand("bench", "scaling benchmark over a parameter grid");
  bench_cmd->add_option("--families", bench.families, "comma-separated family names");
  bench_cmd->add_option("--sizes", bench.sizes, "comma-separated node counts");
  bench_cmd->add_option("--degrees", bench.degrees, "comma-separated degrees (or m-min)");
  bench_cmd->add_option("--k-list", bench.k_list, "comma-separated depths");
  bench_cmd->add_option("--modes", bench.modes, "comma-separated: nd,ed");
  bench_cmd->add_option("--threads-list", bench.threads_list, "comma-separated worker counts");
  bench_cmd->add_option("--repeats", bench.repeats);
  bench_cmd->add_option("--seed", bench.seed, "seed for random families");
  bench_cmd->add_option("--csv", bench.csv, "output file, or - for stdout")->required();

  std::string suite;
  CLI::App* check_cmd = app.add_subcommand("check", "run the built-in verification suites");
  check_cmd->add_option("--suite", suite)
      ->required()
      ->check(CLI::IsMember({"theorems", "gradients", "all"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }

  try {
    if (*encode_cmd) return run_encode(encode);
    if (*gen_cmd) {
      gen.seeded = seed_opt->count() > 0;
      return run_generate(gen);
    }
    if (*dis_cmd) return run_distinguish(dis);
    if (*bench_cmd) return run_bench(bench);
    if (*check_cmd) return run_check(suite);
  } catch (const elene::Error& err) {
    std::cerr << "error: " << err.what() << '\n';
    return err.code() == elene::errc::parse_error ? 1 : 2;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 2;
  }
  return 2;
}
