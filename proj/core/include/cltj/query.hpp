#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cltj {

/// Dictionary-encoded attribute value.
using Value = std::int64_t;

/// Dense variable identifier; variables are numbered by first textual appearance.
using VarId = std::uint32_t;

/// An atom argument: a variable or an integer constant.
class Term {
 public:
  static Term variable(VarId id) { return Term(true, static_cast<Value>(id)); }
  static Term constant(Value value) { return Term(false, value); }

  bool is_variable() const noexcept { return is_variable_; }
  bool is_constant() const noexcept { return !is_variable_; }
  VarId var() const noexcept { return static_cast<VarId>(payload_); }
  Value constant_value() const noexcept { return payload_; }

  friend bool operator==(const Term&, const Term&) = default;

 private:
  Term(bool is_variable, Value payload) : is_variable_(is_variable), payload_(payload) {}

  bool is_variable_;
  Value payload_;
};

struct Atom {
  std::string relation;
  std::vector<Term> terms;

  std::size_t arity() const noexcept { return terms.size(); }
  /// Distinct variables of the atom in ascending id order.
  std::vector<VarId> variables() const;

  friend bool operator==(const Atom&, const Atom&) = default;
};

/// A full (projection-free) conjunctive query. Immutable after construction.
class Query {
 public:
  /// Validates: at least one atom, consistent arity per relation, every
  /// declared variable used, every used variable declared.
  Query(std::vector<Atom> atoms, std::vector<std::string> var_names);

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  std::size_t num_vars() const noexcept { return var_names_.size(); }
  const std::string& var_name(VarId id) const { return var_names_.at(id); }
  const std::vector<std::string>& var_names() const noexcept { return var_names_; }
  std::optional<VarId> find_var(std::string_view name) const;

  /// Renders in the textual query grammar; parse_query(to_string()) round-trips.
  std::string to_string() const;

  friend bool operator==(const Query&, const Query&) = default;

 private:
  std::vector<Atom> atoms_;
  std::vector<std::string> var_names_;
};

/// Parses `atom ("," atom)*` where `atom := NAME "(" term ("," term)* ")"`.
/// Throws ParseError with the byte offset of the offending token.
Query parse_query(std::string_view text);

/// Assignment of values to (a subset of) the query variables.
class PartialAssignment {
 public:
  explicit PartialAssignment(std::size_t num_vars) : values_(num_vars) {}

  void bind(VarId var, Value value) { values_.at(var) = value; }
  void unbind(VarId var) { values_.at(var).reset(); }
  bool is_bound(VarId var) const { return values_.at(var).has_value(); }
  std::optional<Value> get(VarId var) const { return values_.at(var); }

  /// Values of `vars` in the given order; nullopt unless all are bound.
  std::optional<std::vector<Value>> restrict_to(std::span<const VarId> vars) const;

 private:
  std::vector<std::optional<Value>> values_;
};

}  // namespace cltj
