#include "cltj/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "cltj/error.hpp"
#include "cltj/random.hpp"

namespace cltj {

Dictionary::Dictionary(std::vector<std::int64_t> external) : external_(std::move(external)) {
  std::sort(external_.begin(), external_.end());
  external_.erase(std::unique(external_.begin(), external_.end()), external_.end());
}

std::optional<Value> Dictionary::encode(std::int64_t external) const {
  auto it = std::lower_bound(external_.begin(), external_.end(), external);
  if (it == external_.end() || *it != external) return std::nullopt;
  return static_cast<Value>(it - external_.begin());
}

std::int64_t Dictionary::decode(Value internal) const {
  if (internal < 0 || static_cast<std::size_t>(internal) >= external_.size()) {
    throw DataError("internal id " + std::to_string(internal) + " is not in the dictionary");
  }
  return external_[static_cast<std::size_t>(internal)];
}

namespace {

bool next_token(std::string_view& line, std::string_view& token) {
  std::size_t b = line.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return false;
  std::size_t e = line.find_first_of(" \t\r", b);
  if (e == std::string_view::npos) e = line.size();
  token = line.substr(b, e - b);
  line.remove_prefix(e);
  return true;
}

std::int64_t parse_id(std::string_view token, std::size_t line_no) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw DataError("line " + std::to_string(line_no) + ": '" + std::string(token) + "' is not an integer id");
  }
  return v;
}

}  // namespace

Dataset parse_edge_list(std::istream& in, const EdgeListOptions& opts, std::string source) {
  std::vector<std::pair<std::int64_t, std::int64_t>> edges;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    std::string_view first;
    if (!next_token(line, first) || first.front() == '#') continue;
    std::string_view second;
    std::string_view extra;
    if (!next_token(line, second)) throw DataError("line " + std::to_string(line_no) + ": expected two ids");
    if (next_token(line, extra)) throw DataError("line " + std::to_string(line_no) + ": expected exactly two ids");
    edges.emplace_back(parse_id(first, line_no), parse_id(second, line_no));
  }
  if (in.bad()) throw DataError("failed reading " + source);

  Dataset ds;
  ds.source = std::move(source);
  ds.directed = opts.directed;
  ds.input_rows = edges.size();
  std::vector<std::int64_t> ids;
  ids.reserve(2 * edges.size());
  for (auto [u, v] : edges) {
    ids.push_back(u);
    ids.push_back(v);
  }
  ds.dictionary = Dictionary(std::move(ids));

  Relation e(std::string(kEdgeRelation), 2);
  for (auto [u, v] : edges) {
    if (opts.drop_self_loops && u == v) continue;
    Value a = *ds.dictionary.encode(u);
    Value b = *ds.dictionary.encode(v);
    e.add({a, b});
    if (!opts.directed && a != b) e.add({b, a});
  }
  if (opts.dedup) e.sort_and_dedup();
  ds.db.add(std::move(e));
  return ds;
}

Dataset load_edge_list(const std::string& path, const EdgeListOptions& opts) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  return parse_edge_list(in, opts, path);
}

Dataset gen_zipf_graph(std::size_t nodes, std::size_t edges, double skew, std::uint64_t seed) {
  if (nodes == 0 || edges == 0) throw Error("zipf graph needs positive node and edge counts");
  if (!(skew >= 0.0) || !std::isfinite(skew)) throw Error("zipf skew exponent must be a finite value >= 0");
  if (edges > nodes * (nodes - 1)) {
    throw Error("cannot place " + std::to_string(edges) + " edges on " + std::to_string(nodes) + " nodes");
  }
  std::vector<double> cdf(nodes);
  double total = 0.0;
  for (std::size_t i = 0; i < nodes; ++i) {
    total += 1.0 / std::pow(static_cast<double>(i + 1), skew);
    cdf[i] = total;
  }
  SplitMix64 rng(seed);
  auto draw = [&]() -> std::size_t {
    double x = rng.next_unit() * total;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), x);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), nodes - 1);
  };

  std::unordered_set<std::uint64_t> present;
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const std::size_t budget = 50 * edges + 1000;
  for (std::size_t attempt = 0; attempt < budget && out.size() < edges; ++attempt) {
    std::size_t u = draw();
    std::size_t v = draw();
    if (u == v) continue;
    if (present.insert(static_cast<std::uint64_t>(u) * nodes + v).second) out.emplace_back(u, v);
  }
  if (out.size() < edges) {
    std::vector<std::pair<std::size_t, std::size_t>> absent;
    for (std::size_t u = 0; u < nodes; ++u) {
      for (std::size_t v = 0; v < nodes; ++v) {
        if (u != v && !present.contains(static_cast<std::uint64_t>(u) * nodes + v)) absent.emplace_back(u, v);
      }
    }
    for (std::size_t i = absent.size(); i > 1; --i) std::swap(absent[i - 1], absent[rng.next() % i]);
    absent.resize(edges - out.size());
    out.insert(out.end(), absent.begin(), absent.end());
  }

  Dataset ds;
  ds.source = "zipf:" + std::to_string(nodes) + "," + std::to_string(edges) + "," + std::to_string(skew) +
              " seed " + std::to_string(seed);
  ds.directed = true;
  ds.input_rows = out.size();
  std::vector<std::int64_t> ids(nodes);
  for (std::size_t i = 0; i < nodes; ++i) ids[i] = static_cast<std::int64_t>(i);
  ds.dictionary = Dictionary(std::move(ids));
  Relation e(std::string(kEdgeRelation), 2);
  for (auto [u, v] : out) e.add({static_cast<Value>(u), static_cast<Value>(v)});
  e.sort_and_dedup();
  ds.db.add(std::move(e));
  return ds;
}

void write_edge_list(std::ostream& out, const Dataset& ds) {
  const Relation& e = ds.db.at(std::string(kEdgeRelation));
  for (std::size_t i = 0; i < e.size(); ++i) {
    auto t = e.tuple(i);
    out << ds.dictionary.decode(t[0]) << ' ' << ds.dictionary.decode(t[1]) << '\n';
  }
}

}  // namespace cltj
