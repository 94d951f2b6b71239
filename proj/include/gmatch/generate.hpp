#pragma once

// Seeded random instances and the parity-chain family.

#include <random>

#include "gmatch/core.hpp"
#include "gmatch/geometric.hpp"

namespace gmatch {

// Upper bounds; the actual counts are drawn uniformly from [1, max]
// (blockings from [0, max]).
struct GcspParams {
  std::size_t max_vars = 6;
  std::size_t max_consts = 4;
  std::size_t max_clauses = 6;
  std::size_t max_members = 8;
  std::size_t max_blockings = 4;
  std::size_t max_arity = 3;
};

// Blocking variables are drawn from clause domains only, so the result is
// range restricted.
Gcsp random_gcsp(std::mt19937_64& rng, const GcspParams& p = {});

struct MatchParams {
  std::size_t max_consts = 4;
  std::size_t max_vars = 4;
  std::size_t max_premises = 3;
  std::size_t max_conclusions = 2;
  std::uint32_t max_weight = 5;
  double atom_density = 0.35;
};

// Predicates P/2, Q/2 and R/1; every constant has its '#' atom.
MatchInstance random_match_instance(std::mt19937_64& rng, const MatchParams& p = {});

// n parity triples linked by equality clauses; the first n-1 triples are
// even, the last one odd. Unsatisfiable for every n >= 2, and n = 2 is the
// five-clause circle counterexample for the filter.
Gcsp parity_chain(std::size_t n);

}  // namespace gmatch
