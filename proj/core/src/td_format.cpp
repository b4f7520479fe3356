#include <map>
#include <sstream>

#include "cltj/error.hpp"
#include "cltj/td.hpp"

namespace cltj {

std::string serialize_td(const OrderedTD& td, const Query& q) {
  std::string out;
  for (std::size_t k = 0; k < td.size(); ++k) {
    out += "bag " + std::to_string(k) + " parent ";
    out += td.parent(k) ? std::to_string(*td.parent(k)) : "-";
    out += " vars";
    for (VarId v : td.bag(k)) {
      out += ' ';
      out += q.var_name(v);
    }
    out += '\n';
  }
  return out;
}

OrderedTD parse_td(std::string_view text, const Query& q) {
  std::vector<std::vector<VarId>> bags;
  std::vector<std::optional<std::size_t>> parents;
  std::map<std::string, std::size_t> ids;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream tokens(line);
    std::string word;
    if (!(tokens >> word)) continue;
    if (word[0] == '#') continue;
    std::string id, parent_kw, parent, vars_kw;
    if (word != "bag" || !(tokens >> id >> parent_kw >> parent >> vars_kw) || parent_kw != "parent" ||
        vars_kw != "vars") {
      throw ParseError("expected 'bag <id> parent <id|-> vars ...'", line_no);
    }
    if (!ids.emplace(id, bags.size()).second) throw ParseError("duplicate bag id " + id, line_no);
    if (parent == "-") {
      parents.push_back(std::nullopt);
    } else {
      auto it = ids.find(parent);
      if (it == ids.end() || it->second == bags.size()) {
        throw ParseError("parent " + parent + " not declared before its child", line_no);
      }
      parents.push_back(it->second);
    }
    std::vector<VarId> bag;
    std::string name;
    while (tokens >> name) {
      auto v = q.find_var(name);
      if (!v) throw ParseError("unknown variable " + name, line_no);
      bag.push_back(*v);
    }
    bags.push_back(std::move(bag));
  }
  if (bags.empty()) throw ParseError("empty tree decomposition", line_no);
  try {
    return OrderedTD(std::move(bags), std::move(parents));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(e.what(), line_no);
  }
}

}  // namespace cltj
