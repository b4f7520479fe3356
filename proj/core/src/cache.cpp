#include "cltj/cache.hpp"

namespace cltj {

std::string_view to_string(CachePolicy policy) {
  switch (policy) {
    case CachePolicy::kRejectWhenFull:
      return "reject";
    case CachePolicy::kLru:
      return "lru";
  }
  return "unknown";
}

CachePolicy parse_cache_policy(std::string_view name) {
  if (name == "reject") return CachePolicy::kRejectWhenFull;
  if (name == "lru") return CachePolicy::kLru;
  throw Error("unknown cache policy '" + std::string(name) + "' (expected reject|lru)");
}

}  // namespace cltj
