#include "elene/records.hpp"

#include <json.hpp>
#include <ostream>
#include <sstream>

#include "elene/error.hpp"

namespace elene {

namespace {

using nlohmann::json;

const char* mode_name(Mode mode) { return mode == Mode::nd ? "nd" : "ed"; }

Mode mode_from(const std::string& name) {
  if (name == "nd") return Mode::nd;
  if (name == "ed") return Mode::ed;
  raise(errc::parse_error, "unknown mode '" + name + "'");
}

json parse_line(const std::string& line, const char* kind) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) raise(errc::parse_error, "record line is not an object");
  if (!j.contains("kind") || j.at("kind") != kind)
    raise(errc::parse_error, std::string("expected a ") + kind + " record");
  return j;
}

std::int64_t int_field(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_integer())
    raise(errc::parse_error, std::string("record is missing integer field '") + key + "'");
  return j.at(key).get<std::int64_t>();
}

int int_at(const json& row, std::size_t i) {
  if (!row.at(i).is_number_integer()) raise(errc::parse_error, "non-integer entry in record row");
  return row.at(i).get<int>();
}

std::int64_t count_at(const json& row, std::size_t i) {
  if (!row.at(i).is_number_integer()) raise(errc::parse_error, "non-integer entry in record row");
  return row.at(i).get<std::int64_t>();
}

}  // namespace

void write_node_record(std::ostream& out, const QuadMultiset& ms, Mode mode) {
  json rows = json::array();
  for (const auto& [q, count] : ms.entries) rows.push_back({q.l, q.d_minus, q.d, q.d_plus, count});
  json j{{"id", ms.root}, {"k", ms.k}, {"kind", "node"}, {"mode", mode_name(mode)}, {"quads", rows}};
  out << j.dump() << '\n';
}

void write_edge_record(std::ostream& out, const EdgeTupleMultiset& ms) {
  json rows = json::array();
  for (const auto& [t, count] : ms.entries)
    rows.push_back({t.a.l, t.a.d_minus, t.a.d, t.a.d_plus, t.b.l, t.b.d_minus, t.b.d, t.b.d_plus,
                    count});
  json j{{"id", ms.edge_id}, {"k", ms.k},     {"kind", "edge"}, {"mode", "ed"},
         {"pairs", rows},    {"u", ms.u},     {"v", ms.v}};
  out << j.dump() << '\n';
}

void write_vector_line(std::ostream& out, int node, const SparseVec& vec) {
  out << node << ' ' << vec.dim;
  for (const auto& [index, count] : vec.entries) out << ' ' << index << ':' << count;
  out << '\n';
}

NodeRecord parse_node_record(const std::string& line) {
  json j = parse_line(line, "node");
  NodeRecord rec;
  rec.id = int_field(j, "id");
  rec.k = static_cast<int>(int_field(j, "k"));
  if (!j.contains("mode") || !j.at("mode").is_string())
    raise(errc::parse_error, "node record is missing its mode");
  rec.mode = mode_from(j.at("mode").get<std::string>());
  if (!j.contains("quads") || !j.at("quads").is_array())
    raise(errc::parse_error, "node record is missing its quadruplet rows");
  for (const auto& row : j.at("quads")) {
    if (!row.is_array() || row.size() != 5)
      raise(errc::parse_error, "quadruplet rows must be [l, dm, d, dp, count]");
    Quadruplet q{int_at(row, 0), int_at(row, 1), int_at(row, 2), int_at(row, 3)};
    rec.quads.emplace_back(q, count_at(row, 4));
  }
  return rec;
}

EdgeRecord parse_edge_record(const std::string& line) {
  json j = parse_line(line, "edge");
  EdgeRecord rec;
  rec.id = int_field(j, "id");
  rec.k = static_cast<int>(int_field(j, "k"));
  rec.u = static_cast<int>(int_field(j, "u"));
  rec.v = static_cast<int>(int_field(j, "v"));
  if (!j.contains("pairs") || !j.at("pairs").is_array())
    raise(errc::parse_error, "edge record is missing its tuple rows");
  for (const auto& row : j.at("pairs")) {
    if (!row.is_array() || row.size() != 9)
      raise(errc::parse_error, "tuple rows must be two quadruplets plus a count");
    Quadruplet qa{int_at(row, 0), int_at(row, 1), int_at(row, 2), int_at(row, 3)};
    Quadruplet qb{int_at(row, 4), int_at(row, 5), int_at(row, 6), int_at(row, 7)};
    rec.pairs.emplace_back(SymTuple(qa, qb), count_at(row, 8));
  }
  return rec;
}

VectorLine parse_vector_line(const std::string& line) {
  std::istringstream in(line);
  VectorLine out;
  if (!(in >> out.node >> out.dim)) raise(errc::parse_error, "vector line needs 'node dim'");
  std::string token;
  std::int64_t last = -1;
  while (in >> token) {
    std::size_t colon = token.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 >= token.size())
      raise(errc::parse_error, "vector entries must look like index:count");
    std::int64_t index = 0, count = 0;
    try {
      std::size_t used = 0;
      index = std::stoll(token.substr(0, colon), &used);
      if (used != colon) throw std::invalid_argument(token);
      std::string rest = token.substr(colon + 1);
      count = std::stoll(rest, &used);
      if (used != rest.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      raise(errc::parse_error, "bad vector entry '" + token + "'");
    }
    if (index <= last || index >= out.dim)
      raise(errc::parse_error, "vector indices must ascend within the declared dimension");
    last = index;
    out.entries.emplace_back(index, count);
  }
  return out;
}

}  // namespace elene
