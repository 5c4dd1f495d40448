#if !defined(ELENE_RECORDS_HPP)
#define ELENE_RECORDS_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "elene/encode.hpp"
#include "elene/vectorize.hpp"

namespace elene {

// One self-contained structured record per line. Keys are serialized in
// alphabetical order, so equal encodings produce byte-identical lines and
// downstream pipelines can diff outputs directly.
//
// node line: {"id":0,"k":1,"kind":"node","mode":"nd","quads":[[l,dm,d,dp,count],...]}
// edge line: {"id":0,"k":1,"kind":"edge","mode":"ed","pairs":[[la,...,lb,...,count],...],"u":0,"v":1}
void write_node_record(std::ostream& out, const QuadMultiset& ms, Mode mode);
void write_edge_record(std::ostream& out, const EdgeTupleMultiset& ms);

// "node_id dim idx:count idx:count ..." with ascending indices.
void write_vector_line(std::ostream& out, int node, const SparseVec& vec);

struct NodeRecord {
  std::int64_t id = -1;
  int k = 0;
  Mode mode = Mode::nd;
  std::vector<std::pair<Quadruplet, std::int64_t>> quads;
};

struct EdgeRecord {
  std::int64_t id = -1;
  int k = 0;
  int u = -1;
  int v = -1;
  std::vector<std::pair<SymTuple, std::int64_t>> pairs;
};

struct VectorLine {
  std::int64_t node = -1;
  std::int64_t dim = 0;
  std::vector<std::pair<std::int64_t, std::int64_t>> entries;
};

// Strict parsers for the three line shapes above; anything the writers would
// not emit is a parse error.
NodeRecord parse_node_record(const std::string& line);
EdgeRecord parse_edge_record(const std::string& line);
VectorLine parse_vector_line(const std::string& line);

}  // namespace elene

#endif
