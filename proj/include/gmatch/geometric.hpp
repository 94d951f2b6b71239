#pragma once

// Matching side: three-valued ground atoms, interpretations, geometric
// literals and formulas.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gmatch/core.hpp"

namespace gmatch {

enum class Truth : std::uint8_t { F, E, T };

char truth_char(Truth t);
std::optional<Truth> truth_from_char(char c);

struct GroundAtom {
  std::uint32_t pred = 0;
  Truth label = Truth::T;
  std::vector<Const> args;
  friend auto operator<=>(const GroundAtom&, const GroundAtom&) = default;
};

class UnboundVariable : public std::runtime_error {
 public:
  explicit UnboundVariable(Var v)
      : std::runtime_error("unbound variable " + std::to_string(v.id)), var(v) {}
  Var var;
};

class PreconditionViolated : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Predicate 0 is the domain predicate '#'. Interpretations hold #_t c
// atoms as GroundAtom{0, T, {c}}.
class Interpretation {
 public:
  static constexpr std::uint32_t kDomain = 0;

  Interpretation();

  std::uint32_t intern_pred(const std::string& name);
  std::optional<std::uint32_t> find_pred(const std::string& name) const;
  const std::string& pred_name(std::uint32_t p) const { return preds_[p]; }
  std::size_t num_preds() const { return preds_.size(); }

  Const intern_const(const std::string& name);
  std::optional<Const> find_const(const std::string& name) const;
  const std::string& const_name(Const c) const { return consts_[c.id]; }
  std::size_t num_consts() const { return consts_.size(); }
  const std::vector<std::string>& const_names() const { return consts_; }

  // Returns the atom index. Re-adding an identical atom is a no-op; a
  // second label on the same arguments throws std::invalid_argument.
  std::size_t add(GroundAtom atom);

  std::span<const GroundAtom> atoms() const { return atoms_; }
  const GroundAtom& atom(std::size_t i) const { return atoms_[i]; }
  // Index of the atom with this predicate and arguments, any label.
  std::optional<std::size_t> find(std::uint32_t pred, std::span<const Const> args) const;
  std::span<const std::size_t> atoms_of(std::uint32_t pred) const;

  // Every constant occurring anywhere has a #_t atom.
  bool range_restricted() const;
  std::string to_string(const GroundAtom& a) const;

 private:
  std::vector<std::string> preds_;
  std::vector<std::string> consts_;
  std::vector<GroundAtom> atoms_;
  std::map<std::pair<std::uint32_t, std::vector<Const>>, std::size_t> index_;
  std::vector<std::vector<std::size_t>> by_pred_;
};

struct Literal {
  enum class Kind : std::uint8_t { Atom, Equality, Exists };
  Kind kind = Kind::Atom;
  std::uint32_t pred = 0;
  Truth label = Truth::T;
  std::vector<Var> args;  // Equality: exactly two distinct variables
  Var bound;              // Exists only; occurs in args

  static Literal atom(std::uint32_t pred, Truth label, std::vector<Var> args);
  static Literal equality(Var a, Var b);
  static Literal exists(Var bound, std::uint32_t pred, Truth label, std::vector<Var> args);

  // Distinct free variables, sorted by id.
  std::vector<Var> free_vars() const;

  friend bool operator==(const Literal&, const Literal&) = default;
};

struct Formula {
  std::vector<Literal> premises;
  std::vector<Literal> conclusions;

  std::vector<Var> premise_vars() const;
  bool range_restricted() const;
  friend bool operator==(const Formula&, const Formula&) = default;
};

using WeightSet = std::vector<std::uint32_t>;  // sorted, unique

struct MatchInstance {
  Interpretation interp;
  Formula formula;
  std::vector<std::string> var_names;
  // Indexed by atom index; missing entries weigh nothing.
  std::vector<WeightSet> weights;

  const WeightSet& weight_of(std::size_t atom) const;
  Symbols symbols() const;
  std::size_t num_vars() const { return var_names.size(); }
};

// Index of the interpretation atom that clashes with lit under theta, if the
// clash comes from an atom (predicate and domain cases).
std::optional<std::size_t> conflict_atom(const Interpretation& I, const Literal& lit,
                                         const Substitution& theta);
bool literal_conflicts(const Interpretation& I, const Literal& lit, const Substitution& theta);
bool literal_true(const Interpretation& I, const Literal& lit, const Substitution& theta);

// The fresh constant is Const{I.num_consts()}.
std::vector<GroundAtom> extension_set(const Interpretation& I, const Literal& lit,
                                      const Substitution& theta);

bool is_matching(const MatchInstance& inst, const Substitution& theta);

std::string to_string(const Literal& lit, const MatchInstance& inst);

}  // namespace gmatch
