#include "gmatch/oracle.hpp"

#include "gmatch/optimal.hpp"

namespace gmatch {

namespace {

template <class F>
void for_each_total(std::span<const Var> vars, std::span<const Const> values, std::size_t num_vars,
                    Budget budget, F&& f) {
  std::uint64_t count = 1;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    count *= values.size();
    if (count > budget.max_candidates) throw BudgetExceeded();
  }
  if (count == 0) return;
  std::vector<std::size_t> digit(vars.size(), 0);
  while (true) {
    Substitution theta(num_vars);
    for (std::size_t i = 0; i < vars.size(); ++i) theta.assign(vars[i], values[digit[i]]);
    f(theta);
    std::size_t i = vars.size();
    while (i > 0 && ++digit[i - 1] == values.size()) digit[--i] = 0;
    if (i == 0) return;
  }
}

}  // namespace

std::vector<Substitution> enumerate_solutions(const Gcsp& gcsp, Budget budget) {
  std::vector<Substitution> out;
  auto vars = gcsp.clause_vars();
  auto consts = gcsp.clause_consts();
  for_each_total(vars, consts, gcsp.num_vars(), budget, [&](const Substitution& theta) {
    if (is_solution(gcsp, theta)) out.push_back(theta);
  });
  return out;
}

bool lemma_valid_for(const std::vector<Substitution>& solutions, const FlatLemma& lemma) {
  for (const auto& theta : solutions)
    if (!is_true(lemma, theta)) return false;
  return true;
}

bool check_lemma_valid(const Gcsp& gcsp, const FlatLemma& lemma, Budget budget) {
  return lemma_valid_for(enumerate_solutions(gcsp, budget), lemma);
}

std::vector<Substitution> enumerate_matchings(const MatchInstance& inst, Budget budget) {
  std::vector<Substitution> out;
  auto vars = inst.formula.premise_vars();
  std::vector<Const> consts;
  for (std::uint32_t c = 0; c < inst.interp.num_consts(); ++c) consts.push_back(Const{c});
  for_each_total(vars, consts, inst.num_vars(), budget, [&](const Substitution& theta) {
    if (is_matching(inst, theta)) out.push_back(theta);
  });
  return out;
}

std::optional<WeightSet> minimal_weight(const MatchInstance& inst, Budget budget) {
  std::optional<WeightSet> best;
  for (const auto& theta : enumerate_matchings(inst, budget)) {
    WeightSet w = matching_weight(inst, theta);
    if (!best || multiset_less(w, *best)) best = std::move(w);
  }
  return best;
}

}  // namespace gmatch
