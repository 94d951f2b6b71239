#pragma once

#include <string>

#include "gmatch/io.hpp"

namespace gmatch::testing {

inline std::string data_path(const std::string& name) {
  return std::string(GMATCH_DATA_DIR) + "/" + name;
}

inline MatchInstance load_match(const std::string& name) {
  return std::get<MatchInstance>(read_instance_file(data_path(name)));
}

inline Gcsp load_gcsp(const std::string& name) {
  return std::get<Gcsp>(read_instance_file(data_path(name)));
}

inline Gcsp gcsp_text(const std::string& text) { return std::get<Gcsp>(parse_instance(text)); }

// Total substitution from "X:=a Y:=b" using the names in sym.
inline Substitution subst(const Symbols& sym, const std::string& text) {
  Substitution theta(sym.vars.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && text[pos] == ' ') ++pos;
    if (pos >= text.size()) break;
    auto end = text.find(' ', pos);
    std::string item = text.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
    auto eq = item.find(":=");
    theta.assign(*sym.find_var(item.substr(0, eq)), *sym.find_const(item.substr(eq + 2)));
    pos = end == std::string::npos ? text.size() : end;
  }
  return theta;
}

inline Substlet sl(const Symbols& sym, std::initializer_list<std::pair<const char*, const char*>> items) {
  std::vector<Assignment> a;
  for (auto [v, c] : items) a.push_back({*sym.find_var(v), *sym.find_const(c)});
  std::sort(a.begin(), a.end());
  return Substlet(a);
}

}  // namespace gmatch::testing
