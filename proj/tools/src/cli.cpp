#include "cltj/cli/cli.hpp"

#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "bench.hpp"
#include "cltj/decompose.hpp"
#include "cltj/error.hpp"
#include "cltj/stats.hpp"
#include "cltj/workload.hpp"
#include "run.hpp"

namespace cltj::cli {
namespace {

struct CommonFlags {
  std::string query;
  std::string data;
  std::string format = "json";
  std::string out;
  std::optional<std::size_t> cache_entries;
  RunConfig config;
};

void add_run_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--query", f.query, "Query text or @file")->required();
  cmd->add_option("--data", f.data, "Edge-list path or zipf:<nodes>,<edges>,<exponent>")->required();
  cmd->add_option("--algo", f.config.algo, "Engine")->check(CLI::IsMember({"lftj", "clftj", "ytd"}));
  cmd->add_option("--cache-entries", f.cache_entries, "Cache capacity in entries (default unlimited)");
  cmd->add_option("--cache-policy", f.config.cache_policy, "Full-cache policy")
      ->check(CLI::IsMember({"reject", "lru"}));
  cmd->add_option("--min-support", f.config.min_support, "Cache a key on its n-th computation")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--td", f.config.td, "Tree decomposition: auto or @file");
  cmd->add_option("--order", f.config.order, "Variable order: auto or comma-separated names");
  cmd->add_option("--seed", f.config.seed, "Seed for generated data");
  cmd->add_option("--timeout-secs", f.config.timeout_secs, "Join time budget")->check(CLI::PositiveNumber);
  cmd->add_flag("--undirected", f.config.undirected, "Load each edge in both directions");
  cmd->add_option("--format", f.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_flag("--shadow", f.config.shadow, "Recompute cache hits and compare");
}

void check_combinations(CLI::App* cmd, const CommonFlags& f) {
  if (f.config.algo != "clftj") {
    for (const char* flag : {"--cache-entries", "--cache-policy", "--min-support", "--shadow"}) {
      if (cmd->count(flag) > 0) throw Error(std::string(flag) + " requires --algo clftj");
    }
  }
  if (f.config.algo == "ytd" && cmd->count("--order") > 0) throw Error("--order does not apply to --algo ytd");
}

int run_query_command(CLI::App* cmd, CommonFlags& f, Mode mode, std::ostream& out) {
  check_combinations(cmd, f);
  f.config.query = read_text_arg(f.query);
  f.config.cache_entries = f.cache_entries;
  LoadedData data = load_data(f.data, f.config.seed, f.config.undirected);
  std::ofstream tuples;
  if (!f.out.empty()) {
    tuples.open(f.out);
    if (!tuples) throw DataError("cannot write " + f.out);
  }
  RunOutcome r = execute_run(f.config, mode, data, f.out.empty() ? nullptr : &tuples, 1);
  if (f.format == "csv") {
    out << to_csv({r.report});
  } else {
    out << r.report.dump(2) << '\n';
  }
  return r.timed_out ? kExitTimeout : kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Trie-join query engine with tree-decomposition caching", "cltj"};
  app.require_subcommand(1);

  CommonFlags count_flags;
  auto* count = app.add_subcommand("count", "Count query answers");
  add_run_flags(count, count_flags);

  CommonFlags eval_flags;
  auto* eval = app.add_subcommand("eval", "Evaluate a query");
  add_run_flags(eval, eval_flags);
  eval->add_option("--out", eval_flags.out, "Write result tuples to this file");

  std::string dq;
  std::string ddata;
  std::size_t max_adhesion = 2;
  std::size_t max_tds = 64;
  std::size_t max_seps = 8;
  bool dundirected = false;
  std::uint64_t dseed = 0;
  auto* decompose = app.add_subcommand("decompose", "List tree decompositions in score order");
  decompose->add_option("--query", dq, "Query text or @file")->required();
  decompose->add_option("--max-adhesion", max_adhesion, "Largest allowed adhesion");
  decompose->add_option("--max-tds", max_tds, "Stop after this many decompositions")->check(CLI::PositiveNumber);
  decompose->add_option("--max-seps-per-level", max_seps, "Separators tried per split")->check(CLI::PositiveNumber);
  decompose->add_option("--data", ddata, "Dataset for skew scoring");
  decompose->add_option("--seed", dseed, "Seed for generated data");
  decompose->add_flag("--undirected", dundirected, "Load each edge in both directions");

  std::string kind;
  std::size_t k = 0;
  std::size_t n = 0;
  double p = 0.0;
  std::uint64_t gseed = 0;
  std::string zipf;
  std::string gout;
  auto* gen = app.add_subcommand("gen", "Generate a query or a dataset");
  gen->add_option("--kind", kind, "Query family")->check(CLI::IsMember({"path", "cycle", "rand"}));
  gen->add_option("--k", k, "Atoms in a path or cycle query");
  gen->add_option("-n", n, "Variables in a random query");
  gen->add_option("-p", p, "Edge probability of a random query")->check(CLI::Range(0.0, 1.0));
  gen->add_option("--seed", gseed, "Generator seed");
  gen->add_option("--zipf", zipf, "Dataset <nodes>,<edges>,<exponent>");
  gen->add_option("--out", gout, "Write to this file instead of standard output");

  BenchOptions bench_opts;
  auto* bench = app.add_subcommand("bench", "Run a benchmark suite");
  bench->add_option("--suite", bench_opts.suite_path, "Suite JSON file")->required();
  bench->add_option("--repeats", bench_opts.repeats, "Runs per cell")->check(CLI::PositiveNumber);
  bench->add_option("--parallel-cells", bench_opts.parallel_cells, "Cells run concurrently")->check(CLI::PositiveNumber);
  bench->add_option("--format", bench_opts.format, "Row format")->check(CLI::IsMember({"json", "csv"}));

  std::vector<std::string> argv_storage{"cltj"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (count->parsed()) return run_query_command(count, count_flags, Mode::kCount, out);
    if (eval->parsed()) return run_query_command(eval, eval_flags, Mode::kEval, out);

    if (decompose->parsed()) {
      Query q = parse_query(read_text_arg(dq));
      std::optional<StatsCatalog> stats;
      if (!ddata.empty()) stats = compute_stats(load_data(ddata, dseed, dundirected).dataset.db);
      auto tds = rank_tds(enumerate_tds(q, {max_adhesion, max_tds, max_seps}), q, stats ? &*stats : nullptr);
      for (std::size_t i = 0; i < tds.size(); ++i) {
        if (i > 0) out << "---\n";
        TDScore s = score_td(tds[i], q, stats ? &*stats : nullptr);
        out << "# max_adhesion " << s.max_adhesion << " bags " << s.bags << " depth " << s.depth;
        if (s.skew) out << " skew " << *s.skew;
        out << '\n' << serialize_td(tds[i], q);
      }
      return kExitOk;
    }

    if (gen->parsed()) {
      std::ostringstream text;
      if (!zipf.empty()) {
        if (!kind.empty()) throw Error("--zipf and --kind are exclusive");
        LoadedData d = load_data("zipf:" + zipf, gseed, false);
        write_edge_list(text, d.dataset);
      } else if (kind == "path" || kind == "cycle") {
        if (k == 0) throw Error("--kind " + kind + " needs --k >= 1");
        text << (kind == "path" ? gen_path_query(k) : gen_cycle_query(k)).to_string() << '\n';
      } else if (kind == "rand") {
        if (n == 0 || gen->count("-p") == 0) throw Error("--kind rand needs -n and -p");
        text << gen_random_graph_query(n, p, gseed).to_string() << '\n';
      } else {
        throw Error("gen needs --kind or --zipf");
      }
      if (gout.empty()) {
        out << text.str();
      } else {
        std::ofstream f(gout);
        if (!(f << text.str())) throw DataError("cannot write " + gout);
      }
      return kExitOk;
    }

    if (bench->parsed()) return run_bench(bench_opts, out) ? kExitTimeout : kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace cltj::cli
