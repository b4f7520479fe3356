#include "cltj/workload.hpp"

#include <numeric>
#include <vector>

#include "cltj/error.hpp"
#include "cltj/random.hpp"

namespace cltj {

namespace {

Atom edge_atom(VarId u, VarId v) {
  return Atom{"E", {Term::variable(u), Term::variable(v)}};
}

std::vector<std::string> names(std::size_t n) {
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(generated_var_name(i));
  return out;
}

bool connected(std::size_t n, const std::vector<std::pair<VarId, VarId>>& edges) {
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t components = n;
  for (auto [u, v] : edges) {
    std::size_t a = find(u), b = find(v);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components == 1;
}

}  // namespace

std::string generated_var_name(std::size_t index) {
  if (index < 26) return std::string(1, static_cast<char>('a' + index));
  return "v" + std::to_string(index);
}

Query gen_path_query(std::size_t k) {
  if (k == 0) throw Error("path length must be at least 1");
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < k; ++i) {
    atoms.push_back(edge_atom(static_cast<VarId>(i), static_cast<VarId>(i + 1)));
  }
  return Query(std::move(atoms), names(k + 1));
}

Query gen_cycle_query(std::size_t k) {
  if (k < 3) throw Error("cycle length must be at least 3");
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i + 1 < k; ++i) {
    atoms.push_back(edge_atom(static_cast<VarId>(i), static_cast<VarId>(i + 1)));
  }
  atoms.push_back(edge_atom(0, static_cast<VarId>(k - 1)));
  return Query(std::move(atoms), names(k));
}

Query gen_random_graph_query(std::size_t n, double p, std::uint64_t seed) {
  if (n < 2) throw Error("random pattern needs at least 2 variables");
  if (!(p > 0.0 && p <= 1.0)) throw Error("edge probability must be in (0, 1]");
  SplitMix64 rng(seed);
  constexpr int kMaxAttempts = 10'000;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    std::vector<std::pair<VarId, VarId>> edges;
    for (VarId i = 0; i < n; ++i) {
      for (VarId j = i + 1; j < n; ++j) {
        if (rng.next_unit() < p) edges.emplace_back(i, j);
      }
    }
    if (!connected(n, edges)) continue;
    std::vector<Atom> atoms;
    for (auto [u, v] : edges) atoms.push_back(edge_atom(u, v));
    return Query(std::move(atoms), names(n));
  }
  throw Error("no connected random pattern after 10000 attempts");
}

}  // namespace cltj
