#include "gmatch/pipeline.hpp"

#include "gmatch/filter.hpp"
#include "gmatch/sat.hpp"
#include "gmatch/translate.hpp"

namespace gmatch {

std::string to_string(Backend b) {
  switch (b) {
    case Backend::Backtrack: return "backtrack";
    case Backend::Refine: return "refine";
    case Backend::Sat1: return "sat1";
    case Backend::Sat2: return "sat2";
  }
  return "?";
}

std::optional<Backend> backend_from_string(const std::string& s) {
  if (s == "backtrack") return Backend::Backtrack;
  if (s == "refine") return Backend::Refine;
  if (s == "sat1") return Backend::Sat1;
  if (s == "sat2") return Backend::Sat2;
  return std::nullopt;
}

namespace {

SolveResult run_backend(const Gcsp& g, const PipelineConfig& cfg) {
  switch (cfg.backend) {
    case Backend::Backtrack: return solve_backtrack(g, cfg.solver);
    case Backend::Refine: return solve_refining(g, cfg.solver);
    case Backend::Sat1:
    case Backend::Sat2: {
      SatConfig sc;
      sc.version = cfg.backend == Backend::Sat1 ? 1 : 2;
      sc.external = cfg.external;
      sc.timeout_seconds = cfg.timeout_seconds;
      sc.deadline = cfg.solver.deadline;
      return solve_sat(g, sc);
    }
  }
  throw std::logic_error("unknown backend");
}

}  // namespace

SolveResult solve_gcsp(const Gcsp& gcsp, const PipelineConfig& cfg) {
  auto pre = preprocess(gcsp);
  if (auto t = std::get_if<TriviallyUnsat>(&pre)) {
    SolveResult r;
    r.status = SolveStatus::TriviallyUnsat;
    r.reason = t->reason;
    return r;
  }
  Gcsp g = std::move(std::get<Gcsp>(pre));
  std::uint64_t filtered = 0;
  if (cfg.filter) {
    auto f = filter_gcsp(g, *cfg.filter);
    filtered = f.stats.removed;
    if (f.bottom) {
      SolveResult r;
      r.status = SolveStatus::Unsat;
      r.reason = "refuted by local consistency";
      r.stats.filtered = filtered;
      return r;
    }
    g = std::move(f.gcsp);
  }
  SolveResult r = run_backend(g, cfg);
  r.stats.filtered = filtered;
  if (r.status == SolveStatus::Sat && !is_solution(gcsp, r.solution))
    throw VerificationError("backend " + to_string(cfg.backend) +
                            " returned a non-solution: " + to_string(r.solution, gcsp.symbols));
  return r;
}

SolveResult solve_matching(const MatchInstance& inst, const PipelineConfig& cfg) {
  SolveResult r = solve_gcsp(translate(inst).gcsp, cfg);
  if (r.status == SolveStatus::Sat && !is_matching(inst, r.solution))
    throw VerificationError("backend " + to_string(cfg.backend) +
                            " returned a non-matching: " + to_string(r.solution, inst.symbols()));
  return r;
}

GcspSolver make_gcsp_solver(const PipelineConfig& cfg) {
  return [cfg](const Gcsp& g) -> std::optional<Substitution> {
    SolveResult r = run_backend(g, cfg);
    if (r.status == SolveStatus::Sat) {
      if (!is_solution(g, r.solution)) throw VerificationError("optimal: backend returned a non-solution");
      return r.solution;
    }
    if (r.status == SolveStatus::Unknown) throw std::runtime_error("backend gave up: " + r.reason);
    return std::nullopt;
  };
}

}  // namespace gmatch
