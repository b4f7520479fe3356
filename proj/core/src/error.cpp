#include "cltj/error.hpp"

namespace cltj {

ParseError::ParseError(const std::string& message, std::size_t position)
    : Error(message + " (at " + std::to_string(position) + ")"), position_(position) {}

void contract_failure(const char* expr, const char* file, int line) {
  throw ContractViolation(std::string("contract violated: ") + expr + " [" + file + ":" +
                          std::to_string(line) + "]");
}

}  // namespace cltj
