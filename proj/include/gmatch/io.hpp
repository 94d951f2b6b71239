#pragma once

// Instance text format. See README.md for the grammar.

#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "gmatch/core.hpp"
#include "gmatch/geometric.hpp"

namespace gmatch {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message);
  std::size_t line;
};

class RangeRestrictionError : public std::runtime_error {
 public:
  RangeRestrictionError(std::size_t line, const std::string& message);
  std::size_t line;
};

using Instance = std::variant<MatchInstance, Gcsp>;

Instance parse_instance(std::string_view text);
// Throws std::runtime_error if the file cannot be read.
Instance read_instance_file(const std::string& path);
std::string read_file(const std::string& path);

std::string print_gcsp(const Gcsp& gcsp);
std::string print_match_instance(const MatchInstance& inst);
std::string print_instance(const Instance& inst);

// Structural equality; missing weight entries count as empty.
bool same_instance(const MatchInstance& a, const MatchInstance& b);
bool same_instance(const Gcsp& a, const Gcsp& b);

}  // namespace gmatch
