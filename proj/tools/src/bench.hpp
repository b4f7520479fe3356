#pragma once

#include <ostream>
#include <string>

#include "run.hpp"

namespace cltj::cli {

struct BenchOptions {
  std::string suite_path;
  int repeats = 3;
  int parallel_cells = 1;
  std::string format = "json";
};

/// Expands a suite file into cells and writes one row per cell.
/// Returns true if any cell timed out.
bool run_bench(const BenchOptions& options, std::ostream& out);

/// Expands `path:<k>`, `cycle:<k>` and `rand:<n>,<p>,<seed>` shorthands;
/// anything else is taken as query text.
std::string expand_query_shorthand(const std::string& text);

}  // namespace cltj::cli
