#pragma once

// preprocess -> optional filter -> backend -> verification.

#include <optional>
#include <stdexcept>
#include <string>

#include "gmatch/optimal.hpp"
#include "gmatch/solver.hpp"

namespace gmatch {

enum class Backend { Backtrack, Refine, Sat1, Sat2 };

std::string to_string(Backend b);
std::optional<Backend> backend_from_string(const std::string& s);

struct PipelineConfig {
  Backend backend = Backend::Backtrack;
  std::optional<int> filter;  // local consistency with this S
  SolverConfig solver;
  std::optional<std::string> external;  // SAT solver command template
  double timeout_seconds = 60.0;
};

// A Sat answer that fails the independent check.
class VerificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Accepts raw GCSPs; a Sat result is checked with is_solution against the
// input before it is returned.
SolveResult solve_gcsp(const Gcsp& gcsp, const PipelineConfig& cfg);

// Translates, solves and checks the answer with is_matching.
SolveResult solve_matching(const MatchInstance& inst, const PipelineConfig& cfg);

// For optimal_match: runs the backend on an already preprocessed GCSP.
GcspSolver make_gcsp_solver(const PipelineConfig& cfg);

}  // namespace gmatch
