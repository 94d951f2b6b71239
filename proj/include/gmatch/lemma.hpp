#pragma once

// Flat lemmas {v1/V1, ..., vn/Vn}, read as "some vi takes a value in Vi".

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gmatch/core.hpp"
#include "gmatch/stacks.hpp"

namespace gmatch {

class FlatLemma {
 public:
  struct Entry {
    Var var;
    std::vector<Const> values;  // sorted, unique, non-empty
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  FlatLemma() = default;

  // Adds values to v's set.
  void add(Var v, std::span<const Const> values);
  void add(Var v, Const c) { add(v, std::span<const Const>(&c, 1)); }

  std::span<const Entry> entries() const { return entries_; }
  std::span<const Const> get(Var v) const;
  bool contains(Var v, Const c) const;
  bool mentions(Var v) const { return !get(v).empty(); }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

  friend bool operator==(const FlatLemma&, const FlatLemma&) = default;

 private:
  std::vector<Entry> entries_;  // sorted by var
};

FlatLemma lemma_union(const FlatLemma& a, const FlatLemma& b);

// v maps to the intersection of all lambda_j(v); every other variable to the
// union. Throws std::invalid_argument on an empty sequence.
FlatLemma v_resolvent(Var v, std::span<const FlatLemma> lemmas);

// Builds a projection of c by taking, from every member, the assignment
// picked by `choose`.
FlatLemma projection(const Clause& c, const std::function<Assignment(const Substlet&)>& choose);
bool is_projection(const FlatLemma& lemma, const Clause& c);

// clauses[i] must cover the i-th variable of sigma.
FlatLemma sigma_resolvent(const Blocking& sigma, std::span<const Clause* const> clauses);

// Picks, for each variable of sigma, the covering clause with the fewest
// values other than the blocked one (ties: lowest index).
FlatLemma sigma_resolvent(const Blocking& sigma, std::span<const Clause> clauses);

bool is_true(const FlatLemma& l, const Substitution& theta);
bool is_false(const FlatLemma& l, const Substitution& theta);
// Falsehood under theta extended by a non-conflicting substlet s.
bool is_false_with(const FlatLemma& l, const Substitution& theta, const Substlet& s);

bool is_true(const FlatLemma& l, const SubstitutionStack& theta);
bool is_false(const FlatLemma& l, const SubstitutionStack& theta);

std::string to_string(const FlatLemma& l, const Symbols& sym);

}  // namespace gmatch
