#include "bench.hpp"

#include <atomic>
#include <fstream>
#include <thread>

#include "cltj/error.hpp"
#include "cltj/workload.hpp"

namespace cltj::cli {
namespace {

struct Cell {
  RunConfig config;
  Mode mode = Mode::kCount;
  std::string label;
};

template <typename T>
std::vector<T> axis(const json& suite, const char* key, std::vector<T> fallback) {
  if (!suite.contains(key)) return fallback;
  const json& v = suite.at(key);
  if (!v.is_array()) return {v.get<T>()};
  if (v.empty()) throw SchemaError(std::string("suite field '") + key + "' is empty");
  return v.get<std::vector<T>>();
}

std::vector<std::optional<std::size_t>> cache_axis(const json& suite) {
  if (!suite.contains("cache_entries")) return {std::nullopt};
  json v = suite.at("cache_entries");
  if (!v.is_array()) v = json::array({v});
  std::vector<std::optional<std::size_t>> out;
  for (const json& item : v) {
    if (item.is_null() || item == "unlimited") {
      out.emplace_back(std::nullopt);
    } else {
      out.emplace_back(item.get<std::size_t>());
    }
  }
  return out;
}

std::vector<Cell> expand_suite(const json& suite) {
  static const std::vector<std::string> kKnown = {"data",   "seed",        "undirected",  "timeout_secs",
                                                  "mode",   "queries",     "engines",     "cache_entries",
                                                  "cache_policy", "min_support", "td", "order"};
  for (const auto& [key, _] : suite.items()) {
    if (std::find(kKnown.begin(), kKnown.end(), key) == kKnown.end()) {
      throw SchemaError("unknown suite field '" + key + "'");
    }
  }
  if (!suite.contains("queries")) throw SchemaError("suite has no 'queries'");

  RunConfig base;
  base.seed = suite.value("seed", std::uint64_t{0});
  base.undirected = suite.value("undirected", false);
  base.timeout_secs = suite.value("timeout_secs", 300.0);
  base.td = suite.value("td", std::string("auto"));
  base.order = suite.value("order", std::string("auto"));
  const std::string mode_name = suite.value("mode", std::string("count"));
  if (mode_name != "count" && mode_name != "eval") throw SchemaError("suite mode must be count or eval");
  const Mode mode = mode_name == "count" ? Mode::kCount : Mode::kEval;

  std::vector<Cell> cells;
  for (const std::string& query : axis<std::string>(suite, "queries", {})) {
    for (const std::string& engine : axis<std::string>(suite, "engines", {"lftj", "clftj"})) {
      const bool cached = engine == "clftj";
      // cache axes only apply to the cached engine
      auto capacities = cached ? cache_axis(suite) : std::vector<std::optional<std::size_t>>{std::nullopt};
      auto policies = cached ? axis<std::string>(suite, "cache_policy", {"reject"}) : std::vector<std::string>{"reject"};
      auto supports = cached ? axis<std::uint64_t>(suite, "min_support", {1}) : std::vector<std::uint64_t>{1};
      for (const auto& capacity : capacities) {
        for (const std::string& policy : policies) {
          for (std::uint64_t support : supports) {
            Cell cell;
            cell.config = base;
            cell.config.query = expand_query_shorthand(query);
            cell.config.algo = engine;
            cell.config.cache_entries = capacity;
            cell.config.cache_policy = policy;
            cell.config.min_support = support;
            cell.mode = mode;
            cell.label = query;
            cells.push_back(std::move(cell));
          }
        }
      }
    }
  }
  return cells;
}

}  // namespace

std::string expand_query_shorthand(const std::string& text) {
  auto arg = [&](std::size_t prefix) { return text.substr(prefix); };
  if (text.rfind("path:", 0) == 0) return gen_path_query(std::stoul(arg(5))).to_string();
  if (text.rfind("cycle:", 0) == 0) return gen_cycle_query(std::stoul(arg(6))).to_string();
  if (text.rfind("rand:", 0) == 0) {
    std::string rest = arg(5);
    auto c1 = rest.find(',');
    auto c2 = rest.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) throw SchemaError("rand query expects rand:<n>,<p>,<seed>");
    return gen_random_graph_query(std::stoul(rest.substr(0, c1)), std::stod(rest.substr(c1 + 1, c2 - c1 - 1)),
                                  std::stoull(rest.substr(c2 + 1)))
        .to_string();
  }
  return text;
}

bool run_bench(const BenchOptions& options, std::ostream& out) {
  if (options.repeats < 1) throw Error("--repeats must be positive");
  if (options.parallel_cells < 1) throw Error("--parallel-cells must be positive");
  if (options.format != "json" && options.format != "csv") throw Error("--format must be json or csv");
  std::ifstream in(options.suite_path);
  if (!in) throw DataError("cannot open suite " + options.suite_path);
  json suite;
  try {
    suite = json::parse(in);
  } catch (const json::exception& e) {
    throw SchemaError("suite " + options.suite_path + ": " + e.what());
  }
  if (!suite.is_object() || !suite.contains("data")) throw SchemaError("suite must be an object with 'data'");

  std::vector<Cell> cells;
  try {
    cells = expand_suite(suite);
  } catch (const json::exception& e) {
    throw SchemaError("suite " + options.suite_path + ": " + e.what());
  }
  const LoadedData data =
      load_data(suite.at("data").get<std::string>(), suite.value("seed", std::uint64_t{0}), suite.value("undirected", false));

  std::vector<json> rows(cells.size());
  std::vector<std::string> failures(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      try {
        RunOutcome r = execute_run(cells[i].config, cells[i].mode, data, nullptr, options.repeats);
        r.report["cell"] = i;
        r.report["label"] = cells[i].label;
        rows[i] = std::move(r.report);
      } catch (const std::exception& e) {
        failures[i] = e.what();
      }
    }
  };
  const std::size_t threads = std::min<std::size_t>(options.parallel_cells, std::max<std::size_t>(cells.size(), 1));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (!failures[i].empty()) throw Error("cell " + std::to_string(i) + " (" + cells[i].label + "): " + failures[i]);
  }

  bool timed_out = false;
  for (const json& row : rows) timed_out = timed_out || row.at("timed_out").get<bool>();
  if (options.format == "csv") {
    out << to_csv(rows);
  } else {
    for (const json& row : rows) out << row.dump() << '\n';
  }
  return timed_out;
}

}  // namespace cltj::cli
