#pragma once

// Local-consistency prefiltering over circles of clauses.

#include <cstdint>
#include <span>
#include <vector>

#include "gmatch/core.hpp"
#include "gmatch/stacks.hpp"

namespace gmatch {

// adj[i] lists the clauses related to clause i: they share a variable or
// hold two variables that occur together in a blocking. Sorted, no self.
using Adjacency = std::vector<std::vector<std::uint32_t>>;

Adjacency clause_adjacency(std::span<const Clause> clauses, std::span<const Blocking> blockings);

// Simple cycles of `size` clauses through `start`, starting there. A cycle
// and its reversal are reported once (size >= 3: second < last).
std::vector<std::vector<std::uint32_t>> enumerate_circles(const Adjacency& adj,
                                                          std::uint32_t start, std::size_t size);

struct FilterStats {
  std::uint64_t removed = 0;
  std::uint64_t circles = 0;
};

// Restricts the current refinements of `clauses` to substlets that occur in
// some consistent selection over the clause set. Returns false when some
// refinement would become empty. All clauses must be current in `stack`.
bool refine_subset(RefinementStack& stack, std::span<const std::uint32_t> clauses,
                   const Substitution& theta, std::span<const Blocking> blockings,
                   FilterStats* stats = nullptr);

// Returns false (bottom) if no extension of theta solves the GCSP.
// `stack` must hold an entry for every clause; S >= 1.
bool local_consistency(RefinementStack& stack, Substitution& theta, int S,
                       std::span<const Blocking> blockings, FilterStats* stats = nullptr);

struct FilterOutput {
  bool bottom = false;
  Gcsp gcsp;  // clauses reduced to their final refinements
  FilterStats stats;
};

FilterOutput filter_gcsp(const Gcsp& gcsp, int S);

}  // namespace gmatch
