#pragma once

#include <cstdint>
#include <deque>
#include <list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cltj/error.hpp"
#include "cltj/query.hpp"

namespace cltj {

enum class CachePolicy {
  kRejectWhenFull,  // refuse inserts once full
  kLru,             // evict the least recently used entry
};

std::string_view to_string(CachePolicy policy);
/// Accepts "reject" and "lru".
CachePolicy parse_cache_policy(std::string_view name);

struct CacheConfig {
  /// Global entry budget across all TD nodes; nullopt means unlimited.
  std::optional<std::size_t> capacity;
  CachePolicy policy = CachePolicy::kRejectWhenFull;
  /// Minimum number of completions of a key before it may be cached.
  std::uint64_t min_support = 1;
  /// On a hit, recompute anyway and compare against the cached value.
  bool shadow_verify = false;
};

struct CacheCounters {
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
  std::uint64_t inserts = 0;
  std::uint64_t evictions = 0;
  std::uint64_t rejections = 0;
  std::uint64_t peak_entries = 0;
  std::uint64_t shadow_checks = 0;

  friend bool operator==(const CacheCounters&, const CacheCounters&) = default;
};

namespace detail {
struct KeyHash {
  std::size_t operator()(const std::vector<Value>& key) const noexcept {
    std::uint64_t h = 0x84222325CBF29CE4ULL ^ key.size();
    for (Value v : key) {
      h ^= static_cast<std::uint64_t>(v) + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};
}  // namespace detail

/// Bounded map from (TD node, adhesion assignment) to a cached subtree
/// result. Keys list adhesion values in ordering order. The entry budget is
/// global; support counters live in a FIFO side map of at most 4x capacity.
template <typename V>
class CacheTable {
 public:
  CacheTable(std::size_t num_nodes, CacheConfig config) : config_(config), maps_(num_nodes) {}

  /// Counts a hit or a miss; a hit refreshes LRU recency.
  const V* lookup(std::size_t node, std::span<const Value> key) {
    scratch_.assign(key.begin(), key.end());
    auto& map = maps_[node];
    auto it = map.find(scratch_);
    if (it == map.end()) {
      ++counters_.misses;
      return nullptr;
    }
    ++counters_.hits;
    if (config_.policy == CachePolicy::kLru) recency_.splice(recency_.end(), recency_, it->second.recency);
    return &it->second.value;
  }

  /// Records one more completion of `key` and decides whether to cache it:
  /// support must reach min_support and the policy must admit an insert.
  bool should_cache(std::size_t node, std::span<const Value> key) {
    if (config_.capacity && *config_.capacity == 0) return false;
    if (config_.min_support > 1 && bump_support(node, key) < config_.min_support) return false;
    if (full() && config_.policy == CachePolicy::kRejectWhenFull) {
      ++counters_.rejections;
      return false;
    }
    return true;
  }

  /// Inserts after a positive should_cache; evicts one LRU entry if full.
  void insert(std::size_t node, std::span<const Value> key, V value) {
    std::vector<Value> k(key.begin(), key.end());
    auto& map = maps_[node];
    if (map.count(k) != 0) return;
    if (full()) {
      CLTJ_EXPECT(config_.policy == CachePolicy::kLru && !recency_.empty());
      auto& [victim_node, victim_key] = recency_.front();
      maps_[victim_node].erase(victim_key);
      recency_.pop_front();
      --size_;
      ++counters_.evictions;
    }
    typename std::list<std::pair<std::size_t, std::vector<Value>>>::iterator pos{};
    if (config_.policy == CachePolicy::kLru) pos = recency_.insert(recency_.end(), {node, k});
    map.emplace(std::move(k), Slot{std::move(value), pos});
    ++size_;
    ++counters_.inserts;
    counters_.peak_entries = std::max<std::uint64_t>(counters_.peak_entries, size_);
    CLTJ_EXPECT(!config_.capacity || size_ <= *config_.capacity);
  }

  /// Reads an entry without touching counters or recency.
  std::optional<V> peek(std::size_t node, std::span<const Value> key) const {
    std::vector<Value> k(key.begin(), key.end());
    auto it = maps_.at(node).find(k);
    if (it == maps_.at(node).end()) return std::nullopt;
    return it->second.value;
  }

  std::size_t size() const noexcept { return size_; }
  const CacheCounters& counters() const noexcept { return counters_; }
  const CacheConfig& config() const noexcept { return config_; }

 private:
  struct Slot {
    V value;
    typename std::list<std::pair<std::size_t, std::vector<Value>>>::iterator recency;
  };

  bool full() const { return config_.capacity && size_ >= *config_.capacity; }

  std::uint64_t bump_support(std::size_t node, std::span<const Value> key) {
    std::vector<Value> k;
    k.reserve(key.size() + 1);
    k.push_back(static_cast<Value>(node));
    k.insert(k.end(), key.begin(), key.end());
    auto [it, inserted] = support_.try_emplace(k, 0);
    if (inserted) {
      support_fifo_.push_back(k);
      if (config_.capacity) {
        const std::size_t cap = 4 * *config_.capacity;
        while (support_fifo_.size() > cap) {
          if (support_fifo_.front() == k) break;
          support_.erase(support_fifo_.front());
          support_fifo_.pop_front();
        }
      }
      it = support_.find(k);
    }
    return ++it->second;
  }

  CacheConfig config_;
  std::vector<std::unordered_map<std::vector<Value>, Slot, detail::KeyHash>> maps_;
  std::list<std::pair<std::size_t, std::vector<Value>>> recency_;
  std::unordered_map<std::vector<Value>, std::uint64_t, detail::KeyHash> support_;
  std::deque<std::vector<Value>> support_fifo_;
  std::vector<Value> scratch_;
  std::size_t size_ = 0;
  CacheCounters counters_;
};

}  // namespace cltj
