#include "gmatch/optimal.hpp"

#include <algorithm>

namespace gmatch {

WeightSet weight_union(const WeightSet& a, const WeightSet& b) {
  WeightSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

WeightSet literal_conflict_weight(const MatchInstance& inst, const Literal& lit,
                                  const Substitution& theta) {
  if (!literal_conflicts(inst.interp, lit, theta))
    throw PreconditionViolated("literal does not conflict the interpretation");
  if (lit.kind == Literal::Kind::Equality) return {};
  auto idx = conflict_atom(inst.interp, lit, theta);
  if (!idx) return {};
  return inst.weight_of(*idx);
}

WeightSet matching_weight(const MatchInstance& inst, const Substitution& theta) {
  const auto& I = inst.interp;
  WeightSet out;
  for (const auto& a : inst.formula.premises) {
    if (!literal_conflicts(I, a, theta)) throw NotAMatching("premise does not conflict");
    out = weight_union(out, literal_conflict_weight(inst, a, theta));
  }
  for (const auto& b : inst.formula.conclusions) {
    if (literal_true(I, b, theta)) throw NotAMatching("conclusion is true");
    for (const auto& c : extension_set(I, b, theta)) {
      auto idx = I.find(c.pred, c.args);
      if (idx && I.atom(*idx).label != c.label) out = weight_union(out, inst.weight_of(*idx));
    }
  }
  return out;
}

bool multiset_less(const WeightSet& a, const WeightSet& b) {
  WeightSet diff;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(diff));
  if (diff.empty()) return false;
  return std::binary_search(b.begin(), b.end(), diff.back());
}

OptimalResult optimal_match(const MatchInstance& inst, const GcspSolver& solve) {
  OptimalResult res;
  auto pre = preprocess(translate(inst).gcsp);
  if (std::holds_alternative<TriviallyUnsat>(pre)) return res;
  ++res.solver_calls;
  auto theta = solve(std::get<Gcsp>(pre));
  if (!theta) return res;
  res.found = true;
  res.theta = *theta;
  res.weight = matching_weight(inst, res.theta);

  // Starts one above sup(alpha) so that sup(alpha) itself is tried.
  std::uint32_t k = res.weight.empty() ? 0 : res.weight.back() + 1;
  while (k != 0) {
    --k;
    if (!std::binary_search(res.weight.begin(), res.weight.end(), k)) continue;
    OptimalStep step;
    step.k = k;
    for (std::uint32_t w : res.weight)
      if (w != k) step.alpha.push_back(w);
    for (std::uint32_t w = 0; w < k; ++w) step.alpha.push_back(w);
    std::sort(step.alpha.begin(), step.alpha.end());
    step.alpha.erase(std::unique(step.alpha.begin(), step.alpha.end()), step.alpha.end());

    step.translation = translate_restricted(inst, Alpha::of(step.alpha)).gcsp;
    auto restricted = preprocess(step.translation);
    if (std::holds_alternative<TriviallyUnsat>(restricted)) {
      step.skipped = true;
      res.trace.push_back(std::move(step));
      continue;
    }
    ++res.solver_calls;
    auto better = solve(std::get<Gcsp>(restricted));
    if (better) {
      res.theta = *better;
      res.weight = matching_weight(inst, res.theta);
      step.improved = true;
      step.weight = res.weight;
    }
    res.trace.push_back(std::move(step));
  }
  return res;
}

}  // namespace gmatch
