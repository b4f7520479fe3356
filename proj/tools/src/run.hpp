#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "cltj/dataset.hpp"
#include "cltj/query.hpp"

namespace cltj::cli {

using nlohmann::json;

enum class Mode { kCount, kEval };

std::string_view to_string(Mode mode);

struct RunConfig {
  std::string query;  // query text, already resolved from @file
  std::string algo = "clftj";
  std::optional<std::size_t> cache_entries;
  std::string cache_policy = "reject";
  std::uint64_t min_support = 1;
  std::string td = "auto";
  std::string order = "auto";
  std::uint64_t seed = 0;
  double timeout_secs = 300.0;
  bool undirected = false;
  bool shadow = false;
};

struct LoadedData {
  Dataset dataset;
  double load_ms = 0.0;
};

/// `source` is an edge-list path or `zipf:<nodes>,<edges>,<exponent>`.
LoadedData load_data(const std::string& source, std::uint64_t seed, bool undirected);

/// Returns the text itself, or the contents of the file for `@path`.
std::string read_text_arg(const std::string& arg);

struct RunOutcome {
  json report;
  bool timed_out = false;
};

/// Runs one query. In eval mode, tuples are written to `tuples_out` (if set)
/// one per line in variable-declaration order, decoded through the dictionary.
RunOutcome execute_run(const RunConfig& config, Mode mode, const LoadedData& data, std::ostream* tuples_out,
                       int repeats = 1);

/// Rows of reports as CSV: nested keys joined by '.', arrays joined by ';'.
std::string to_csv(const std::vector<json>& rows);

}  // namespace cltj::cli
