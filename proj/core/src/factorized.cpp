#include "cltj/factorized.hpp"

#include <unordered_map>
#include <unordered_set>

#include "cltj/engine.hpp"

namespace cltj {

FrRef FrNode::unit() {
  static const FrRef kUnit = std::make_shared<const FrNode>();
  return kUnit;
}

std::uint64_t fr_count(const FactorizedResult& fr) {
  std::unordered_map<const FrNode*, std::uint64_t> memo;
  auto count = [&](auto&& self, const FrNode* node) -> std::uint64_t {
    if (auto it = memo.find(node); it != memo.end()) return it->second;
    std::uint64_t c = 0;
    switch (node->kind) {
      case FrNode::Kind::kUnit:
        c = 1;
        break;
      case FrNode::Kind::kUnion:
        for (const auto& [value, child] : node->branches) c = checked_add(c, self(self, child.get()));
        break;
      case FrNode::Kind::kProduct:
        c = 1;
        for (const auto& f : node->factors) c = checked_mul(c, self(self, f.get()));
        break;
    }
    memo.emplace(node, c);
    return c;
  };
  return fr.root ? count(count, fr.root.get()) : 0;
}

void fr_enumerate(const FactorizedResult& fr, const std::function<void(std::span<const Value>)>& sink) {
  if (!fr.root) return;
  std::vector<Value> tuple(fr.arity, 0);
  // Work stack; the back is expanded next.
  std::vector<const FrNode*> pending{fr.root.get()};
  auto expand = [&](auto&& self) -> void {
    if (pending.empty()) {
      sink(tuple);
      return;
    }
    const FrNode* node = pending.back();
    pending.pop_back();
    switch (node->kind) {
      case FrNode::Kind::kUnit:
        self(self);
        break;
      case FrNode::Kind::kUnion:
        for (const auto& [value, child] : node->branches) {
          tuple[node->position] = value;
          pending.push_back(child.get());
          self(self);
          pending.pop_back();
        }
        break;
      case FrNode::Kind::kProduct:
        for (auto it = node->factors.rbegin(); it != node->factors.rend(); ++it) pending.push_back(it->get());
        self(self);
        pending.resize(pending.size() - node->factors.size());
        break;
    }
    pending.push_back(node);
  };
  expand(expand);
}

FrShape fr_shape(const FactorizedResult& fr) {
  FrShape shape;
  if (!fr.root) return shape;
  std::unordered_set<const FrNode*> seen;
  std::unordered_map<const FrNode*, std::size_t> memo;
  auto walk = [&](auto&& self, const FrNode* node) -> std::size_t {
    seen.insert(node);
    if (auto it = memo.find(node); it != memo.end()) return it->second;
    std::size_t total = 1;
    for (const auto& [value, child] : node->branches) total += self(self, child.get());
    for (const auto& f : node->factors) total += self(self, f.get());
    memo.emplace(node, total);
    return total;
  };
  shape.referenced_nodes = walk(walk, fr.root.get());
  shape.distinct_nodes = seen.size();
  return shape;
}

}  // namespace cltj
