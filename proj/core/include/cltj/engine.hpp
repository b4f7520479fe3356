#pragma once

#include <chrono>
#include <cstdint>
#include <optional>

#include "cltj/error.hpp"
#include "cltj/trie.hpp"

namespace cltj {

/// Work done by one join execution. Counters only grow during a run.
struct EngineStats {
  std::uint64_t recursive_calls = 0;
  std::uint64_t matches_enumerated = 0;
  AccessCounters access;
  double wall_time_ms = 0.0;
};

/// Optional cut-off for long executions.
struct ExecutionLimits {
  std::optional<std::chrono::steady_clock::time_point> deadline;

  static ExecutionLimits after(std::chrono::duration<double> budget) {
    return {std::chrono::steady_clock::now() +
            std::chrono::duration_cast<std::chrono::steady_clock::duration>(budget)};
  }
};

/// Raised when an execution passes its deadline; carries the work done so far.
class TimedOut : public Error {
 public:
  TimedOut(EngineStats stats, std::uint64_t partial_count)
      : Error("execution timed out"), stats_(stats), partial_count_(partial_count) {}

  const EngineStats& stats() const noexcept { return stats_; }
  std::uint64_t partial_count() const noexcept { return partial_count_; }

 private:
  EngineStats stats_;
  std::uint64_t partial_count_;
};

inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw CountOverflow();
  return r;
}

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw CountOverflow();
  return r;
}

/// Polls the clock every `kStride` calls.
class DeadlineGuard {
 public:
  explicit DeadlineGuard(const ExecutionLimits& limits) : deadline_(limits.deadline) {}

  bool expired() {
    if (!deadline_ || ++ticks_ % kStride != 0) return false;
    return std::chrono::steady_clock::now() >= *deadline_;
  }

 private:
  static constexpr std::uint64_t kStride = 1024;
  std::optional<std::chrono::steady_clock::time_point> deadline_;
  std::uint64_t ticks_ = 0;
};

}  // namespace cltj
