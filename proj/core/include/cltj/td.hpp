#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cltj/query.hpp"

namespace cltj {

/// Rooted, ordered tree of variable bags. Nodes are numbered in preorder
/// (node 0 is the root); the numbering is always recomputed on construction.
class OrderedTD {
 public:
  /// `parents[i]` is the parent of input node i (nullopt for the single root).
  /// Siblings keep their relative input order. Bags may not repeat a variable.
  OrderedTD(std::vector<std::vector<VarId>> bags, std::vector<std::optional<std::size_t>> parents);

  static OrderedTD singleton(std::vector<VarId> bag);

  std::size_t size() const noexcept { return bags_.size(); }
  /// Bag in its stored (input) order.
  const std::vector<VarId>& bag(std::size_t node) const { return bags_.at(node); }
  /// Bag sorted ascending.
  const std::vector<VarId>& bag_set(std::size_t node) const { return sorted_bags_.at(node); }
  bool contains(std::size_t node, VarId var) const;
  std::optional<std::size_t> parent(std::size_t node) const { return parents_.at(node); }
  const std::vector<std::size_t>& children(std::size_t node) const { return children_.at(node); }
  /// bag(node) ∩ bag(parent), ascending; empty for the root.
  const std::vector<VarId>& adhesion(std::size_t node) const { return adhesions_.at(node); }
  /// Preorder-first node whose bag contains `var`.
  std::optional<std::size_t> owner(VarId var) const;
  /// All variables appearing in some bag, ascending.
  const std::vector<VarId>& variables() const noexcept { return variables_; }
  /// Nodes owning at least one variable are "owning"; others own nothing.
  std::vector<VarId> owned_by(std::size_t node) const;

  /// Length of the longest root-to-node path (root alone = 0).
  std::size_t depth() const noexcept;
  std::size_t node_depth(std::size_t node) const;
  /// Largest non-root adhesion (0 for a single bag).
  std::size_t max_adhesion() const noexcept;
  /// One past the last node of node's subtree, in preorder.
  std::size_t subtree_end(std::size_t node) const { return subtree_end_.at(node); }

  friend bool operator==(const OrderedTD& a, const OrderedTD& b) {
    return a.bags_ == b.bags_ && a.parents_ == b.parents_;
  }

 private:
  std::vector<std::vector<VarId>> bags_;
  std::vector<std::vector<VarId>> sorted_bags_;
  std::vector<std::optional<std::size_t>> parents_;
  std::vector<std::vector<std::size_t>> children_;
  std::vector<std::vector<VarId>> adhesions_;
  std::vector<std::size_t> subtree_end_;
  std::vector<VarId> variables_;
  std::vector<std::optional<std::size_t>> owner_;
};

struct TdViolation {
  enum class Kind { kUnknownVariable, kUncoveredAtom, kDisconnectedVariable };
  Kind kind;
  std::size_t index;  // variable id or atom index
  std::string message;
};

/// Checks that every atom is covered by a bag and that every variable's bags
/// form a connected subtree. Returns the first violation, if any.
std::optional<TdViolation> validate_td(const Query& q, const OrderedTD& td);

/// Per-variable sort key used to order variables inside a bag; lower first.
using VariableRank = std::vector<std::int64_t>;

/// Descending Gaifman degree, ties by first textual appearance.
VariableRank degree_rank(const Query& q);
/// First textual appearance.
VariableRank appearance_rank(const Query& q);

struct VarOrdering {
  std::vector<VarId> order;
  /// owner node of order[i]
  std::vector<std::size_t> owners;
};

/// Walks nodes in preorder, appending each node's not-yet-seen variables by
/// `rank`. The result is strongly compatible with `td` by construction.
VarOrdering derive_ordering(const OrderedTD& td, const VariableRank& rank);

/// Owner positions in the ordering are nondecreasing in preorder.
bool is_strongly_compatible(const OrderedTD& td, std::span<const VarId> ordering);
/// If owner(x_i) is the parent of owner(x_j) then i < j.
bool is_compatible(const OrderedTD& td, std::span<const VarId> ordering);

/// Contiguous ordering blocks of a strongly compatible (td, ordering) pair.
/// Positions are 0-based; intervals are half-open.
struct OwnedBlocks {
  std::vector<std::size_t> own_begin;    // first position owned by the node
  std::vector<std::size_t> own_end;      // one past its last owned position
  std::vector<std::size_t> subtree_end;  // one past the last position owned in its subtree
  std::vector<std::size_t> owner_at;     // owner node per position
};

/// Throws PlanError unless `ordering` is strongly compatible with `td`.
OwnedBlocks owned_blocks(const OrderedTD& td, std::span<const VarId> ordering);

/// Removes bags contained in an adjacent bag. A child contained in its parent
/// is dropped and its children take its place; a parent contained in a child
/// is dropped and that child takes its place, adopting its siblings.
OrderedTD remove_redundant_bags(const OrderedTD& td);

/// Line format, one node per line in preorder:
///   bag <id> parent <id|-> vars <v1> <v2> ...
/// Serialization numbers nodes by preorder index.
std::string serialize_td(const OrderedTD& td, const Query& q);
/// Inverse of serialize_td. Node ids are arbitrary tokens; a parent must be
/// declared before its children. Throws ParseError (line number) on bad input.
OrderedTD parse_td(std::string_view text, const Query& q);

}  // namespace cltj
