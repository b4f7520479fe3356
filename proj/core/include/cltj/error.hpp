#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cltj {

/// Base class for all recoverable errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Query or TD text that does not conform to its grammar.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position);

  /// Byte offset (query grammar) or 1-based line number (line formats).
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Malformed input data (edge lists, suite files).
class DataError : public Error {
 public:
  using Error::Error;
};

/// The database lacks something the plan needs (relation, trie order).
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// The TD / ordering pair does not satisfy an engine's precondition.
class PlanError : public Error {
 public:
  using Error::Error;
};

/// An intermediate count exceeded 64 bits.
class CountOverflow : public Error {
 public:
  CountOverflow() : Error("count overflow") {}
};

/// A programming error: iterator protocol misuse, broken internal invariant.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

[[noreturn]] void contract_failure(const char* expr, const char* file, int line);

}  // namespace cltj

#define CLTJ_EXPECT(cond)                                        \
  do {                                                           \
    if (!(cond)) ::cltj::contract_failure(#cond, __FILE__, __LINE__); \
  } while (false)
