#pragma once

// GCSP vocabulary: variables, constants, substlets, clauses, blockings and
// substitutions, with the conflict/truth semantics every solver shares.

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gmatch {

struct Var {
  std::uint32_t id = 0;
  friend auto operator<=>(Var, Var) = default;
};

struct Const {
  std::uint32_t id = 0;
  friend auto operator<=>(Const, Const) = default;
};

struct Assignment {
  Var var;
  Const value;
  friend auto operator<=>(const Assignment&, const Assignment&) = default;
};

// Thrown by merge() when two substlets disagree on a shared variable.
class ConflictError : public std::runtime_error {
 public:
  ConflictError(std::size_t first, std::size_t second);
  std::size_t first;
  std::size_t second;
};

// A small substitution v1..vn / x1..xn. Assignments are kept sorted by
// variable id, so structural equality is sequence equality.
class Substlet {
 public:
  Substlet() = default;
  // Throws std::invalid_argument on repeated variables or length mismatch.
  Substlet(std::span<const Var> vars, std::span<const Const> values);
  explicit Substlet(std::vector<Assignment> assignments);

  std::span<const Assignment> assignments() const { return items_; }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  std::vector<Var> domain() const;
  std::optional<Const> value_of(Var v) const;
  bool has(Var v) const { return value_of(v).has_value(); }

  friend auto operator<=>(const Substlet&, const Substlet&) = default;

 private:
  std::vector<Assignment> items_;
};

bool substlets_conflict(const Substlet& a, const Substlet& b);

// A finite set of substlets over one shared domain. The domain is explicit
// so that empty and propositional clauses are representable.
class Clause {
 public:
  Clause() = default;
  // Sorts and deduplicates members; throws std::invalid_argument if a member
  // has a different domain.
  Clause(std::vector<Var> domain, std::vector<Substlet> members);

  std::span<const Var> domain() const { return domain_; }
  std::span<const Substlet> members() const { return members_; }
  const Substlet& operator[](std::size_t i) const { return members_[i]; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  bool covers(Var v) const;
  // Index of v in domain(), or npos.
  std::size_t position_of(Var v) const;
  // The value of domain()[pos] in member i.
  Const value_at(std::size_t member, std::size_t pos) const {
    return members_[member].assignments()[pos].value;
  }

  friend bool operator==(const Clause&, const Clause&) = default;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::vector<Var> domain_;
  std::vector<Substlet> members_;
};

using Blocking = Substlet;

struct Symbols {
  std::vector<std::string> vars;
  std::vector<std::string> consts;

  std::string var_name(Var v) const;
  std::string const_name(Const c) const;
  Var intern_var(const std::string& name);
  Const intern_const(const std::string& name);
  std::optional<Var> find_var(const std::string& name) const;
  std::optional<Const> find_const(const std::string& name) const;
};

struct Gcsp {
  std::vector<Clause> positive;
  std::vector<Blocking> negative;
  Symbols symbols;

  // One past the largest variable / constant id mentioned anywhere,
  // including the symbol table.
  std::size_t num_vars() const;
  std::size_t num_consts() const;
  // Every blocking variable occurs in the domain of some clause.
  bool range_restricted() const;
  std::vector<Var> clause_vars() const;
  std::vector<Const> clause_consts() const;
};

// An ordered stack of assignments with O(1) lookup.
class Substitution {
 public:
  Substitution() = default;
  explicit Substitution(std::size_t num_vars) : value_(num_vars, kUnset), pos_(num_vars, 0) {}

  // Throws std::logic_error if v is already assigned.
  void assign(Var v, Const c);
  std::optional<Const> get(Var v) const {
    if (v.id >= value_.size() || value_[v.id] == kUnset) return std::nullopt;
    return Const{value_[v.id]};
  }
  bool assigned(Var v) const { return v.id < value_.size() && value_[v.id] != kUnset; }
  // Stack position of v's assignment; v must be assigned.
  std::size_t position(Var v) const { return pos_[v.id]; }
  std::size_t size() const { return stack_.size(); }
  bool empty() const { return stack_.empty(); }
  const Assignment& operator[](std::size_t i) const { return stack_[i]; }
  std::span<const Assignment> assignments() const { return stack_; }
  void truncate(std::size_t n);
  void pop() { truncate(stack_.size() - 1); }
  // Assignments sorted by variable.
  std::vector<Assignment> sorted() const;

  friend bool operator==(const Substitution& a, const Substitution& b) {
    return a.sorted() == b.sorted();
  }

 private:
  static constexpr std::uint32_t kUnset = 0xffffffffu;
  std::vector<Assignment> stack_;
  std::vector<std::uint32_t> value_;
  std::vector<std::uint32_t> pos_;
};

enum class ClauseStatus { True, False, Undecided };

// Throws ConflictError naming the first conflicting pair.
Substitution merge(std::span<const Substlet> substlets);

bool makes_true(const Substitution& theta, const Substlet& s);
bool conflicts(const Substitution& theta, const Substlet& s);
ClauseStatus clause_status(const Substitution& theta, const Clause& c);
bool is_solution(const Gcsp& gcsp, const Substitution& theta);

// theta together with s (which must not conflict theta) makes b true.
bool implies_with(const Substitution& theta, const Substlet& s, const Blocking& b);

std::string to_string(const Substlet& s, const Symbols& sym);
std::string to_string(const Substitution& theta, const Symbols& sym);

}  // namespace gmatch
