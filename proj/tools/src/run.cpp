#include "run.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "cltj/clftj.hpp"
#include "cltj/decompose.hpp"
#include "cltj/error.hpp"
#include "cltj/lftj.hpp"
#include "cltj/stats.hpp"
#include "cltj/td.hpp"
#include "cltj/ytd.hpp"

namespace cltj::cli {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

template <typename T>
T parse_number(std::string_view text, const std::string& what) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) throw Error("bad " + what + ": '" + std::string(text) + "'");
  return value;
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t end = text.find(sep, start);
    parts.emplace_back(text.substr(start, end - start));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return parts;
}

// Constants in the query are external ids; unknown ones can never match.
Query encode_constants(const Query& q, const Dictionary& dict) {
  std::vector<Atom> atoms = q.atoms();
  for (Atom& atom : atoms) {
    for (Term& t : atom.terms) {
      if (t.is_constant()) t = Term::constant(dict.encode(t.constant_value()).value_or(-1));
    }
  }
  return Query(std::move(atoms), q.var_names());
}

std::vector<VarId> resolve_order(const RunConfig& config, const Query& q, const OrderedTD& td) {
  if (config.order == "auto") return derive_ordering(td, degree_rank(q)).order;
  std::vector<VarId> order;
  std::vector<bool> seen(q.num_vars(), false);
  for (const std::string& name : split(config.order, ',')) {
    auto v = q.find_var(name);
    if (!v) throw Error("--order names unknown variable '" + name + "'");
    if (seen[*v]) throw Error("--order repeats variable '" + name + "'");
    seen[*v] = true;
    order.push_back(*v);
  }
  if (order.size() != q.num_vars()) throw Error("--order must list every query variable");
  return order;
}

OrderedTD resolve_td(const RunConfig& config, const Query& q, const Database& db) {
  if (config.td == "auto") {
    StatsCatalog stats = compute_stats(db);
    return rank_tds(enumerate_tds(q, {2, 64, 8}), q, &stats).front();
  }
  if (config.td.empty() || config.td.front() != '@') throw Error("--td expects 'auto' or '@<file>'");
  return parse_td(read_text_arg(config.td), q);
}

std::string join_names(const Query& q, std::span<const VarId> order) {
  std::string out;
  for (VarId v : order) {
    if (!out.empty()) out += ',';
    out += q.var_name(v);
  }
  return out;
}

json engine_json(const EngineStats& s, std::uint64_t peak_tuples) {
  return {{"recursive_calls", s.recursive_calls},
          {"matches_enumerated", s.matches_enumerated},
          {"trie_opens", s.access.opens},
          {"trie_ups", s.access.ups},
          {"trie_nexts", s.access.nexts},
          {"trie_seeks", s.access.seeks},
          {"peak_intermediate_tuples", peak_tuples}};
}

json cache_json(const CacheCounters& c) {
  return {{"hits", c.hits},         {"misses", c.misses},         {"inserts", c.inserts},
          {"evictions", c.evictions}, {"rejections", c.rejections}, {"peak_entries", c.peak_entries},
          {"shadow_checks", c.shadow_checks}};
}

/// Writes tuples given in `order` positions, in variable-id order.
class TupleWriter {
 public:
  TupleWriter(std::ostream* out, std::span<const VarId> order, const Dictionary& dict)
      : out_(out), dict_(dict), slot_(order.size()), row_(order.size()) {
    for (std::size_t pos = 0; pos < order.size(); ++pos) slot_[pos] = order[pos];
  }

  void operator()(std::span<const Value> tuple) {
    ++rows_;
    if (!out_) return;
    for (std::size_t pos = 0; pos < tuple.size(); ++pos) row_[slot_[pos]] = tuple[pos];
    for (std::size_t i = 0; i < row_.size(); ++i) {
      if (i > 0) *out_ << ' ';
      *out_ << dict_.decode(row_[i]);
    }
    *out_ << '\n';
  }

  std::uint64_t rows() const noexcept { return rows_; }

 private:
  std::ostream* out_;
  const Dictionary& dict_;
  std::vector<VarId> slot_;
  std::vector<Value> row_;
  std::uint64_t rows_ = 0;
};

struct Measurement {
  std::uint64_t count = 0;
  EngineStats engine;
  CacheCounters cache;
  std::uint64_t peak_tuples = 0;
};

}  // namespace

std::string_view to_string(Mode mode) { return mode == Mode::kCount ? "count" : "eval"; }

std::string read_text_arg(const std::string& arg) {
  if (arg.empty() || arg.front() != '@') return arg;
  std::ifstream in(arg.substr(1));
  if (!in) throw DataError("cannot open " + arg.substr(1));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

LoadedData load_data(const std::string& source, std::uint64_t seed, bool undirected) {
  auto start = Clock::now();
  LoadedData out;
  if (source.rfind("zipf:", 0) == 0) {
    auto parts = split(std::string_view(source).substr(5), ',');
    if (parts.size() != 3) throw Error("zipf data expects zipf:<nodes>,<edges>,<exponent>");
    out.dataset = gen_zipf_graph(parse_number<std::size_t>(parts[0], "node count"),
                                 parse_number<std::size_t>(parts[1], "edge count"),
                                 parse_number<double>(parts[2], "exponent"), seed);
    out.dataset.source = source;
  } else {
    EdgeListOptions opts;
    opts.directed = !undirected;
    out.dataset = load_edge_list(source, opts);
  }
  out.load_ms = ms_since(start);
  return out;
}

RunOutcome execute_run(const RunConfig& config, Mode mode, const LoadedData& data, std::ostream* tuples_out,
                       int repeats) {
  if (repeats < 1) throw Error("repeats must be positive");
  if (config.algo != "lftj" && config.algo != "clftj" && config.algo != "ytd") {
    throw Error("--algo must be lftj, clftj or ytd");
  }
  const Database& db = data.dataset.db;
  Query q = encode_constants(parse_query(config.query), data.dataset.dictionary);
  OrderedTD td = resolve_td(config, q, db);
  if (auto violation = validate_td(q, td)) throw PlanError("invalid tree decomposition: " + violation->message);
  std::vector<VarId> order = resolve_order(config, q, td);
  if (config.algo == "ytd") {
    // bag joins run in variable order; reported for reproducibility only
    order.resize(q.num_vars());
    std::iota(order.begin(), order.end(), VarId{0});
  }

  CacheConfig cache;
  cache.capacity = config.cache_entries;
  cache.policy = parse_cache_policy(config.cache_policy);
  cache.min_support = config.min_support;
  cache.shadow_verify = config.shadow;

  std::optional<JoinPlan> lftj_plan;
  std::optional<ClftjPlan> clftj_plan;
  std::optional<TrieCatalog> catalog;
  auto build_start = Clock::now();
  if (config.algo == "lftj") {
    lftj_plan.emplace(q, order);
    catalog.emplace(TrieCatalog::build(db, *lftj_plan));
  } else if (config.algo == "clftj") {
    clftj_plan.emplace(q, td, order);
    catalog.emplace(TrieCatalog::build(db, clftj_plan->join_plan()));
  }
  const double build_ms = ms_since(build_start);

  TupleWriter writer(tuples_out, order, data.dataset.dictionary);
  auto run_once = [&](const ExecutionLimits& limits, bool emit) -> Measurement {
    Measurement m;
    TupleSink sink;
    if (emit) {
      sink = [&](std::span<const Value> t) { writer(t); };
    } else {
      sink = [](std::span<const Value>) {};
    }
    if (config.algo == "lftj") {
      if (mode == Mode::kCount) {
        auto r = tj_count(*lftj_plan, *catalog, limits);
        m.count = r.count;
        m.engine = r.stats;
      } else {
        std::uint64_t rows = 0;
        m.engine = tj_eval(
            *lftj_plan, *catalog,
            [&](std::span<const Value> t) {
              ++rows;
              sink(t);
            },
            limits);
        m.count = rows;
      }
    } else if (config.algo == "clftj") {
      if (mode == Mode::kCount) {
        auto r = cached_tj_count(*clftj_plan, *catalog, cache, limits);
        m.count = r.count;
        m.engine = r.stats.engine;
        m.cache = r.stats.cache;
      } else {
        auto r = cached_tj_eval(*clftj_plan, *catalog, cache, limits);
        m.count = fr_count(r.result);
        m.engine = r.stats.engine;
        m.cache = r.stats.cache;
        if (emit) fr_enumerate(r.result, sink);
      }
    } else {
      if (mode == Mode::kCount) {
        auto r = ytd_count(q, td, db, limits);
        m.count = r.count;
        m.engine = r.stats.engine;
        m.peak_tuples = r.stats.peak_intermediate_tuples;
      } else {
        std::uint64_t rows = 0;
        auto s = ytd_eval(
            q, td, db,
            [&](std::span<const Value> t) {
              ++rows;
              sink(t);
            },
            limits);
        m.count = rows;
        m.engine = s.engine;
        m.peak_tuples = s.peak_intermediate_tuples;
      }
    }
    return m;
  };

  RunOutcome outcome;
  Measurement last;
  std::vector<double> join_runs;
  for (int rep = 0; rep < repeats && !outcome.timed_out; ++rep) {
    auto start = Clock::now();
    try {
      last = run_once(ExecutionLimits::after(std::chrono::duration<double>(config.timeout_secs)), rep == 0);
    } catch (const TimedOut& t) {
      outcome.timed_out = true;
      last = Measurement{};
      last.count = t.partial_count();
      last.engine = t.stats();
    }
    join_runs.push_back(ms_since(start));
  }
  const double join_ms = std::accumulate(join_runs.begin(), join_runs.end(), 0.0) / join_runs.size();

  json cfg = {{"cache_entries", config.cache_entries ? json(*config.cache_entries) : json(nullptr)},
              {"cache_policy", std::string(to_string(cache.policy))},
              {"min_support", config.min_support},
              {"order", config.order},
              {"seed", config.seed},
              {"shadow", config.shadow},
              {"td", config.td},
              {"timeout_secs", config.timeout_secs},
              {"undirected", config.undirected}};
  json& r = outcome.report;
  r["query"] = q.to_string();
  r["algo"] = config.algo;
  r["mode"] = to_string(mode);
  r["dataset"] = data.dataset.source;
  r["td"] = serialize_td(td, q);
  r["ordering"] = join_names(q, order);
  r[mode == Mode::kCount ? "count" : "cardinality"] = last.count;
  r["timed_out"] = outcome.timed_out;
  r["stats"] = engine_json(last.engine, last.peak_tuples);
  r["cache"] = cache_json(last.cache);
  r["timing_ms"] = {{"load", data.load_ms}, {"build", build_ms}, {"join", join_ms}, {"join_runs", join_runs}};
  r["repeats"] = repeats;
  r["config"] = std::move(cfg);
  return outcome;
}

namespace {

void flatten(const json& value, const std::string& prefix, std::map<std::string, std::string>& out) {
  if (value.is_object()) {
    for (const auto& [key, child] : value.items()) flatten(child, prefix.empty() ? key : prefix + "." + key, out);
  } else if (value.is_array()) {
    std::string joined;
    for (const json& item : value) {
      if (!joined.empty()) joined += ';';
      joined += item.is_string() ? item.get<std::string>() : item.dump();
    }
    out[prefix] = joined;
  } else if (value.is_string()) {
    out[prefix] = value.get<std::string>();
  } else if (value.is_null()) {
    out[prefix] = "";
  } else {
    out[prefix] = value.dump();
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

}  // namespace

std::string to_csv(const std::vector<json>& rows) {
  std::vector<std::map<std::string, std::string>> flat(rows.size());
  std::map<std::string, bool> columns;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    flatten(rows[i], "", flat[i]);
    for (const auto& [key, _] : flat[i]) columns[key] = true;
  }
  std::string out;
  bool first = true;
  for (const auto& [key, _] : columns) {
    if (!first) out += ',';
    out += csv_field(key);
    first = false;
  }
  out += '\n';
  for (const auto& row : flat) {
    first = true;
    for (const auto& [key, _] : columns) {
      if (!first) out += ',';
      auto it = row.find(key);
      if (it != row.end()) out += csv_field(it->second);
      first = false;
    }
    out += '\n';
  }
  return out;
}

}  // namespace cltj::cli
