#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gmatch/core.hpp"
#include "gmatch/lemma.hpp"

namespace gmatch {

enum class SolveStatus { Sat, Unsat, TriviallyUnsat, Unknown };

const char* to_string(SolveStatus s);

struct SolveStats {
  std::uint64_t decisions = 0;
  std::uint64_t propagations = 0;
  std::uint64_t lemmas = 0;
  std::uint64_t filtered = 0;       // substlets removed by the prefilter
  std::uint64_t sat_conflicts = 0;  // reported by the SAT backend, if any
};

struct SolveResult {
  SolveStatus status = SolveStatus::Unknown;
  Substitution solution;
  // Unsat from a native solver: a lemma false under the initial state.
  std::optional<FlatLemma> root_lemma;
  // Filled only when SolverConfig::keep_lemmas is set.
  std::vector<FlatLemma> learned;
  SolveStats stats;
  std::string reason;
};

enum class PartitionMode { Halves, Singletons };

struct SolverConfig {
  bool keep_lemmas = false;
  // Branches agreeing with the hint are tried first (backtrack solver).
  std::optional<Substitution> hint;
  std::optional<std::chrono::steady_clock::time_point> deadline;
  PartitionMode partition = PartitionMode::Halves;
  bool precompute_sigma = false;
};

class DeadlineReached : public std::runtime_error {
 public:
  DeadlineReached() : std::runtime_error("deadline reached") {}
};

// Both expect a preprocessed GCSP.
SolveResult solve_backtrack(const Gcsp& gcsp, const SolverConfig& cfg = {});
SolveResult solve_refining(const Gcsp& gcsp, const SolverConfig& cfg = {});

}  // namespace gmatch
