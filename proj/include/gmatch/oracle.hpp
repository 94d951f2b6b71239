#pragma once

// Brute-force reference answers for small instances. Kept deliberately
// naive: plain enumeration plus the definitional checks.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "gmatch/core.hpp"
#include "gmatch/geometric.hpp"
#include "gmatch/lemma.hpp"

namespace gmatch {

class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded() : std::runtime_error("oracle budget exceeded") {}
};

struct Budget {
  std::uint64_t max_candidates = 10'000'000;
};

// Total substitutions over the clause variables, values drawn from the
// clause constants, in lexicographic order.
std::vector<Substitution> enumerate_solutions(const Gcsp& gcsp, Budget budget = {});

bool check_lemma_valid(const Gcsp& gcsp, const FlatLemma& lemma, Budget budget = {});
bool lemma_valid_for(const std::vector<Substitution>& solutions, const FlatLemma& lemma);

// Substitutions over the premise variables with values among the
// interpretation's constants.
std::vector<Substitution> enumerate_matchings(const MatchInstance& inst, Budget budget = {});

// Multiset-minimal matching weight, or nothing if there is no matching.
std::optional<WeightSet> minimal_weight(const MatchInstance& inst, Budget budget = {});

}  // namespace gmatch
