#include "gmatch/filter.hpp"

#include <algorithm>
#include <stdexcept>

namespace gmatch {

Adjacency clause_adjacency(std::span<const Clause> clauses, std::span<const Blocking> blockings) {
  std::size_t nv = 0;
  for (const auto& c : clauses)
    for (Var v : c.domain()) nv = std::max<std::size_t>(nv, v.id + 1);
  for (const auto& b : blockings)
    for (const auto& a : b.assignments()) nv = std::max<std::size_t>(nv, a.var.id + 1);

  std::vector<std::vector<std::uint32_t>> holders(nv);
  for (std::uint32_t i = 0; i < clauses.size(); ++i)
    for (Var v : clauses[i].domain()) holders[v.id].push_back(i);

  Adjacency adj(clauses.size());
  auto link = [&](std::uint32_t a, std::uint32_t b) {
    if (a == b) return;
    adj[a].push_back(b);
    adj[b].push_back(a);
  };
  for (const auto& h : holders)
    for (std::uint32_t a : h)
      for (std::uint32_t b : h) link(a, b);
  for (const auto& sigma : blockings)
    for (const auto& x : sigma.assignments())
      for (const auto& y : sigma.assignments())
        for (std::uint32_t a : holders[x.var.id])
          for (std::uint32_t b : holders[y.var.id]) link(a, b);
  for (auto& l : adj) {
    std::sort(l.begin(), l.end());
    l.erase(std::unique(l.begin(), l.end()), l.end());
  }
  return adj;
}

std::vector<std::vector<std::uint32_t>> enumerate_circles(const Adjacency& adj,
                                                          std::uint32_t start, std::size_t size) {
  if (size < 2) throw std::invalid_argument("circles have at least two clauses");
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<std::uint32_t> path{start};
  std::vector<bool> used(adj.size(), false);
  used[start] = true;
  auto related = [&](std::uint32_t a, std::uint32_t b) {
    return std::binary_search(adj[a].begin(), adj[a].end(), b);
  };
  auto dfs = [&](auto&& self) -> void {
    if (path.size() == size) {
      if (related(path.back(), start) && (size == 2 || path[1] < path.back())) out.push_back(path);
      return;
    }
    for (std::uint32_t n : adj[path.back()]) {
      if (used[n]) continue;
      used[n] = true;
      path.push_back(n);
      self(self);
      path.pop_back();
      used[n] = false;
    }
  };
  dfs(dfs);
  return out;
}

bool refine_subset(RefinementStack& stack, std::span<const std::uint32_t> clauses,
                   const Substitution& theta, std::span<const Blocking> blockings,
                   FilterStats* stats) {
  std::vector<std::uint32_t> order(clauses.begin(), clauses.end());
  for (std::uint32_t c : order)
    if (!stack.has_entry(c)) throw std::logic_error("refine_subset: clause has no refinement");
  std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return stack.active(a).size() < stack.active(b).size();
  });

  std::vector<std::vector<std::uint32_t>> members;
  std::vector<std::vector<bool>> seen;
  std::size_t total = 0, covered = 0;
  for (std::uint32_t c : order) {
    members.emplace_back(stack.active(c).begin(), stack.active(c).end());
    seen.emplace_back(stack.clause(c).size(), false);
    total += members.back().size();
  }

  Substitution work = theta;
  std::vector<const Substlet*> chosen(order.size(), nullptr);
  std::vector<std::uint32_t> chosen_id(order.size(), 0);

  auto implies_blocking = [&](const Substlet& s) {
    for (const auto& sigma : blockings) {
      bool touches = false, implied = true;
      for (const auto& a : sigma.assignments()) {
        if (s.has(a.var)) touches = true;
        auto x = work.get(a.var);
        if (!x || *x != a.value) implied = false;
      }
      if (touches && implied) return true;
    }
    return false;
  };

  auto dfs = [&](auto&& self, std::size_t depth) -> bool {  // false: saturated, stop
    if (depth == order.size()) {
      for (std::size_t d = 0; d < order.size(); ++d)
        if (!seen[d][chosen_id[d]]) {
          seen[d][chosen_id[d]] = true;
          ++covered;
        }
      return covered < total;
    }
    const Clause& c = stack.clause(order[depth]);
    for (std::uint32_t m : members[depth]) {
      const Substlet& s = c[m];
      if (conflicts(work, s)) continue;
      std::size_t mark = work.size();
      for (const auto& a : s.assignments())
        if (!work.assigned(a.var)) work.assign(a.var, a.value);
      bool ok = !implies_blocking(s);
      chosen[depth] = &s;
      chosen_id[depth] = m;
      bool go_on = true;
      if (ok) go_on = self(self, depth + 1);
      work.truncate(mark);
      if (!go_on) return false;
    }
    return true;
  };
  dfs(dfs, 0);

  for (std::size_t d = 0; d < order.size(); ++d) {
    std::vector<std::uint32_t> kept;
    for (std::uint32_t m : members[d])
      if (seen[d][m]) kept.push_back(m);
    if (kept.empty()) return false;
    if (kept.size() < members[d].size()) {
      if (stats) stats->removed += members[d].size() - kept.size();
      stack.refine(order[d], kept);
    }
  }
  return true;
}

namespace {

class Local {
 public:
  Local(RefinementStack& R, Substitution& theta, int S, std::span<const Blocking> B,
        FilterStats* stats)
      : R_(R), theta_(theta), S_(S), B_(B), stats_(stats) {
    std::vector<Clause> clauses;
    for (std::uint32_t i = 0; i < R_.num_clauses(); ++i) clauses.push_back(R_.clause(i));
    adj_ = clause_adjacency(clauses, B_);
    std::size_t nv = 0;
    for (const auto& c : clauses)
      for (Var v : c.domain()) nv = std::max<std::size_t>(nv, v.id + 1);
    for (const auto& b : B_)
      for (const auto& a : b.assignments()) nv = std::max<std::size_t>(nv, a.var.id + 1);
    var_clauses_.resize(nv);
    var_blockings_.resize(nv);
    for (std::uint32_t i = 0; i < clauses.size(); ++i)
      for (Var v : clauses[i].domain()) var_clauses_[v.id].push_back(i);
    for (std::uint32_t j = 0; j < B_.size(); ++j)
      for (const auto& a : B_[j].assignments()) var_blockings_[a.var.id].push_back(j);
    k_.assign(static_cast<std::size_t>(S_) + 2, 0);
  }

  bool run() {
    for (std::uint32_t i = 0; i < R_.num_clauses(); ++i)
      if (!R_.has_entry(i)) throw std::logic_error("local_consistency: clause without refinement");
    while (true) {
      while (s_ < theta_.size()) {
        if (!subst(theta_[s_])) return false;
        ++s_;
      }
      while (k_[1] < R_.size()) {
        if (!clauses1(k_[1])) return false;
        ++k_[1];
      }
      if (s_ < theta_.size()) continue;

      std::size_t i = 2;
      while (i <= static_cast<std::size_t>(S_) + 1 && k_[i] >= R_.size()) ++i;
      if (i > static_cast<std::size_t>(S_) + 1) return true;
      bool restart = false;
      if (R_.is_current(k_[i])) {
        for (const auto& circle : enumerate_circles(adj_, R_.clause_of(k_[i]), i)) {
          if (stats_) ++stats_->circles;
          if (!refine_subset(R_, circle, theta_, B_, stats_)) return false;
          if (R_.size() > k_[1]) {
            restart = true;
            break;
          }
        }
      }
      if (!restart) ++k_[i];
    }
  }

 private:
  bool subst(const Assignment& asg) {
    for (std::uint32_t j : var_blockings_[asg.var.id])
      if (makes_true(theta_, B_[j])) return false;
    std::vector<std::uint32_t> kept;
    for (std::uint32_t ci : var_clauses_[asg.var.id]) {
      auto active = R_.active(ci);
      kept.clear();
      for (std::uint32_t m : active)
        if (!conflicts(theta_, R_.clause(ci)[m])) kept.push_back(m);
      if (kept.empty()) return false;
      if (kept.size() < active.size()) {
        if (stats_) stats_->removed += active.size() - kept.size();
        R_.refine(ci, kept);
      }
    }
    return true;
  }

  bool clauses1(std::size_t e) {
    if (!R_.is_current(e)) return true;
    std::uint32_t ci = R_.clause_of(e);
    const Clause& c = R_.clause(ci);
    auto active = R_.active(ci);
    for (std::size_t p = 0; p < c.domain().size(); ++p) {
      Const x = c.value_at(active[0], p);
      bool agreed = true;
      for (std::size_t m = 1; m < active.size() && agreed; ++m)
        agreed = c.value_at(active[m], p) == x;
      if (!agreed) continue;
      Var v = c.domain()[p];
      if (auto y = theta_.get(v)) {
        if (*y != x) return false;
        continue;
      }
      theta_.assign(v, x);
    }
    return true;
  }

  RefinementStack& R_;
  Substitution& theta_;
  int S_;
  std::span<const Blocking> B_;
  FilterStats* stats_;
  Adjacency adj_;
  std::vector<std::vector<std::uint32_t>> var_clauses_;
  std::vector<std::vector<std::uint32_t>> var_blockings_;
  std::size_t s_ = 0;
  std::vector<std::size_t> k_;  // k_[1] .. k_[S+1]
};

}  // namespace

bool local_consistency(RefinementStack& stack, Substitution& theta, int S,
                       std::span<const Blocking> blockings, FilterStats* stats) {
  if (S < 1) throw std::invalid_argument("local_consistency needs S >= 1");
  Local l(stack, theta, S, blockings, stats);
  return l.run();
}

FilterOutput filter_gcsp(const Gcsp& gcsp, int S) {
  FilterOutput out;
  RefinementStack R(gcsp.positive);
  for (std::uint32_t i = 0; i < gcsp.positive.size(); ++i) {
    if (gcsp.positive[i].empty()) {
      out.bottom = true;
      return out;
    }
    R.add_initial(i);
  }
  Substitution theta(gcsp.num_vars());
  out.bottom = !local_consistency(R, theta, S, gcsp.negative, &out.stats);
  if (out.bottom) return out;
  out.gcsp.symbols = gcsp.symbols;
  out.gcsp.negative = gcsp.negative;
  for (std::uint32_t i = 0; i < gcsp.positive.size(); ++i) {
    const Clause& c = gcsp.positive[i];
    std::vector<Substlet> kept;
    for (std::uint32_t m : R.active(i)) kept.push_back(c[m]);
    out.gcsp.positive.emplace_back(std::vector<Var>(c.domain().begin(), c.domain().end()),
                                   std::move(kept));
  }
  return out;
}

}  // namespace gmatch
