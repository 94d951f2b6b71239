#pragma once

// Weight-minimal matchings.

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "gmatch/geometric.hpp"
#include "gmatch/translate.hpp"

namespace gmatch {

class NotAMatching : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

WeightSet weight_union(const WeightSet& a, const WeightSet& b);

// lit must conflict I under theta.
WeightSet literal_conflict_weight(const MatchInstance& inst, const Literal& lit,
                                  const Substitution& theta);

// theta must be a matching.
WeightSet matching_weight(const MatchInstance& inst, const Substitution& theta);

// The multiset order on finite sets: a < b iff the largest element of the
// symmetric difference lies in b.
bool multiset_less(const WeightSet& a, const WeightSet& b);

// Returns a solution of the GCSP, or nothing if it has none.
using GcspSolver = std::function<std::optional<Substitution>(const Gcsp&)>;

struct OptimalStep {
  std::uint32_t k = 0;
  WeightSet alpha;      // the restriction tried
  Gcsp translation;     // restricted translation, before preprocessing
  bool skipped = false;  // trivially unsolvable after preprocessing
  bool improved = false;
  WeightSet weight;  // weight of the new matching, if improved
};

struct OptimalResult {
  bool found = false;
  Substitution theta;
  WeightSet weight;
  std::vector<OptimalStep> trace;
  std::size_t solver_calls = 0;
};

OptimalResult optimal_match(const MatchInstance& inst, const GcspSolver& solve);

}  // namespace gmatch
