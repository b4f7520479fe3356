#include "cltj/query.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <unordered_map>

#include "cltj/error.hpp"

namespace cltj {

std::vector<VarId> Atom::variables() const {
  std::vector<VarId> vars;
  for (const Term& t : terms) {
    if (t.is_variable()) vars.push_back(t.var());
  }
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  return vars;
}

Query::Query(std::vector<Atom> atoms, std::vector<std::string> var_names)
    : atoms_(std::move(atoms)), var_names_(std::move(var_names)) {
  if (atoms_.empty()) throw Error("query must contain at least one atom");
  std::map<std::string, std::size_t> arity;
  std::vector<bool> used(var_names_.size(), false);
  for (const Atom& atom : atoms_) {
    if (atom.terms.empty()) throw Error("atom " + atom.relation + " has no terms");
    auto [it, inserted] = arity.emplace(atom.relation, atom.arity());
    if (!inserted && it->second != atom.arity()) {
      throw Error("arity mismatch for relation " + atom.relation + ": " +
                  std::to_string(it->second) + " vs " + std::to_string(atom.arity()));
    }
    for (const Term& t : atom.terms) {
      if (!t.is_variable()) continue;
      if (t.var() >= var_names_.size()) throw Error("atom references undeclared variable");
      used[t.var()] = true;
    }
  }
  for (std::size_t v = 0; v < used.size(); ++v) {
    if (!used[v]) throw Error("variable " + var_names_[v] + " does not occur in any atom");
  }
}

std::optional<VarId> Query::find_var(std::string_view name) const {
  for (std::size_t i = 0; i < var_names_.size(); ++i) {
    if (var_names_[i] == name) return static_cast<VarId>(i);
  }
  return std::nullopt;
}

std::string Query::to_string() const {
  std::string out;
  for (std::size_t a = 0; a < atoms_.size(); ++a) {
    if (a > 0) out += ", ";
    out += atoms_[a].relation;
    out += '(';
    for (std::size_t i = 0; i < atoms_[a].terms.size(); ++i) {
      if (i > 0) out += ',';
      const Term& t = atoms_[a].terms[i];
      out += t.is_variable() ? var_names_[t.var()] : std::to_string(t.constant_value());
    }
    out += ')';
  }
  return out;
}

namespace {

class QueryParser {
 public:
  explicit QueryParser(std::string_view text) : text_(text) {}

  Query parse() {
    std::vector<Atom> atoms;
    atoms.push_back(parse_atom());
    skip_ws();
    while (pos_ < text_.size()) {
      expect(',');
      atoms.push_back(parse_atom());
      skip_ws();
    }
    return Query(std::move(atoms), std::move(names_));
  }

 private:
  static bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }
  static bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) const {
    std::string found = pos_ < text_.size() ? std::string("'") + text_[pos_] + "'" : "end of input";
    throw ParseError(what + ", found " + found, pos_);
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string_view parse_name() {
    skip_ws();
    if (pos_ >= text_.size() || !is_ident_start(text_[pos_])) fail("expected identifier");
    std::size_t start = pos_;
    while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
    return text_.substr(start, pos_ - start);
  }

  Term parse_term() {
    skip_ws();
    if (pos_ < text_.size() && (text_[pos_] == '-' || std::isdigit(static_cast<unsigned char>(text_[pos_])))) {
      Value value = 0;
      const char* first = text_.data() + pos_;
      const char* last = text_.data() + text_.size();
      auto [ptr, ec] = std::from_chars(first, last, value);
      if (ec != std::errc()) fail("expected integer constant");
      pos_ += static_cast<std::size_t>(ptr - first);
      if (pos_ < text_.size() && is_ident_char(text_[pos_])) fail("malformed integer constant");
      return Term::constant(value);
    }
    std::string_view name = parse_name();
    auto [it, inserted] = ids_.emplace(std::string(name), static_cast<VarId>(names_.size()));
    if (inserted) names_.emplace_back(name);
    return Term::variable(it->second);
  }

  Atom parse_atom() {
    Atom atom;
    atom.relation = std::string(parse_name());
    expect('(');
    atom.terms.push_back(parse_term());
    skip_ws();
    while (pos_ < text_.size() && text_[pos_] == ',') {
      ++pos_;
      atom.terms.push_back(parse_term());
      skip_ws();
    }
    expect(')');
    auto [it, inserted] = arity_.emplace(atom.relation, atom.arity());
    if (!inserted && it->second != atom.arity()) {
      throw ParseError("arity mismatch for relation " + atom.relation, pos_);
    }
    return atom;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::vector<std::string> names_;
  std::unordered_map<std::string, VarId> ids_;
  std::unordered_map<std::string, std::size_t> arity_;
};

}  // namespace

Query parse_query(std::string_view text) { return QueryParser(text).parse(); }

std::optional<std::vector<Value>> PartialAssignment::restrict_to(std::span<const VarId> vars) const {
  std::vector<Value> out;
  out.reserve(vars.size());
  for (VarId v : vars) {
    if (!values_.at(v)) return std::nullopt;
    out.push_back(*values_[v]);
  }
  return out;
}

}  // namespace cltj
