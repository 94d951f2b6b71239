#include <algorithm>

#include "gmatch/lemma.hpp"
#include "gmatch/solver.hpp"
#include "gmatch/stacks.hpp"

namespace gmatch {

namespace {

void require_false(const FlatLemma& l, const SubstitutionStack& theta, const char* where) {
  if (!is_false(l, theta)) throw std::logic_error(std::string("lemma not false at ") + where);
}

class Refiner {
 public:
  Refiner(const Gcsp& g, const SolverConfig& cfg)
      : C_(g.positive),
        B_(g.negative),
        cfg_(cfg),
        S_(g.num_vars(), g.num_consts()),
        R_(g.positive),
        vars_(g.clause_vars()),
        consts_(g.clause_consts()) {
    std::size_t nv = g.num_vars();
    var_clauses_.resize(nv);
    for (std::uint32_t i = 0; i < C_.size(); ++i)
      for (Var v : C_[i].domain()) var_clauses_[v.id].push_back(i);
    var_blockings_.resize(nv);
    for (std::uint32_t j = 0; j < B_.size(); ++j)
      for (const auto& a : B_[j].assignments()) var_blockings_[a.var.id].push_back(j);
    lemmas_by_var_.resize(nv);
  }

  SolveResult run() {
    SolveResult res;
    try {
      std::vector<std::uint32_t> all;
      for (Const c : consts_) all.push_back(c.id);
      for (Var v : vars_) S_.add_initial(v, all);
      for (std::uint32_t i = 0; i < C_.size(); ++i) R_.add_initial(i);

      std::optional<FlatLemma> conflict;
      if (cfg_.precompute_sigma)
        for (const auto& sigma : B_) {
          FlatLemma sr = sigma_resolvent(sigma, std::span<const Clause>(C_));
          learn(sr);
          if (sr.empty()) {
            conflict = sr;
            break;
          }
        }
      if (!conflict) conflict = findmatch();
      if (conflict) {
        FlatLemma root = unwind(*conflict, 0);
        require_false(root, S_, "root");
        res.status = SolveStatus::Unsat;
        res.root_lemma = std::move(root);
      } else {
        res.status = SolveStatus::Sat;
        res.solution = Substitution(S_.num_vars());
        for (Var v : vars_) {
          auto dom = S_.current(v);
          if (dom.size() != 1) throw std::logic_error("solution stack is not unary");
          res.solution.assign(v, Const{dom[0]});
        }
      }
    } catch (const DeadlineReached&) {
      res.status = SolveStatus::Unknown;
      res.reason = "deadline reached";
    }
    res.stats = stats_;
    res.learned = std::move(learned_);
    return res;
  }

 private:
  struct Propagation {
    StackMark before;
    Var var;
    FlatLemma reason;
  };

  enum class Status { True, False, Productive, Inert };

  void tick() {
    if (cfg_.deadline && (++ticks_ & 1023) == 0 &&
        std::chrono::steady_clock::now() > *cfg_.deadline)
      throw DeadlineReached();
  }

  void learn(const FlatLemma& l) {
    auto idx = static_cast<std::uint32_t>(store_.size());
    store_.push_back(l);
    for (const auto& e : l.entries()) lemmas_by_var_[e.var.id].push_back(idx);
    ++stats_.lemmas;
    if (cfg_.keep_lemmas) learned_.push_back(l);
  }

  Status status(const FlatLemma& l, Var& w) const {
    int meeting = 0;
    for (const auto& e : l.entries()) {
      if (!S_.has_entry(e.var)) return Status::Inert;
      bool meets = false;
      bool inside = true;
      for (std::uint32_t c : S_.current(e.var)) {
        if (std::binary_search(e.values.begin(), e.values.end(), Const{c}))
          meets = true;
        else
          inside = false;
      }
      if (inside && meets) return Status::True;
      if (meets) {
        ++meeting;
        w = e.var;
      }
    }
    if (meeting == 0) return Status::False;
    return meeting == 1 ? Status::Productive : Status::Inert;
  }

  void narrow(Var w, std::vector<std::uint32_t> kept, FlatLemma reason) {
    trail_.push_back({S_.mark(), w, std::move(reason)});
    S_.domain_refine(w, kept);
    ++stats_.propagations;
  }

  bool stack_conflicts(const Substlet& s) const {
    for (const auto& a : s.assignments())
      if (!S_.contains(a.var, a.value)) return true;
    return false;
  }

  std::optional<FlatLemma> subst_step(std::size_t e) {
    if (!S_.is_current(e)) return std::nullopt;
    Var v = S_.var_of(e);
    if (S_.domain_size(v) == 0) throw std::logic_error("empty domain on the substitution stack");

    for (std::size_t i = 0; i < lemmas_by_var_[v.id].size(); ++i) {
      const FlatLemma& l = store_[lemmas_by_var_[v.id][i]];
      Var w;
      switch (status(l, w)) {
        case Status::False: return l;
        case Status::Productive: {
          std::vector<std::uint32_t> kept;
          for (std::uint32_t c : S_.current(w))
            if (l.contains(w, Const{c})) kept.push_back(c);
          narrow(w, std::move(kept), l);
          break;
        }
        default: break;
      }
    }

    if (!cfg_.precompute_sigma && S_.domain_size(v) == 1)
      for (std::uint32_t j : var_blockings_[v.id]) {
        bool implied = true;
        for (const auto& a : B_[j].assignments())
          if (S_.domain_size(a.var) != 1 || !S_.contains(a.var, a.value)) {
            implied = false;
            break;
          }
        if (!implied) continue;
        FlatLemma sr = sigma_resolvent(B_[j], std::span<const Clause>(C_));
        require_false(sr, S_, "sigma");
        learn(sr);
        return sr;
      }

    std::vector<std::uint32_t> kept;
    for (std::uint32_t ci : var_clauses_[v.id]) {
      auto active = R_.active(ci);
      kept.clear();
      for (std::uint32_t m : active)
        if (!stack_conflicts(C_[ci][m])) kept.push_back(m);
      if (kept.empty()) {
        FlatLemma l = clause_projection(ci, std::nullopt, true);
        require_false(l, S_, "subst");
        learn(l);
        return l;
      }
      if (kept.size() < active.size()) R_.refine(ci, kept);
    }
    return std::nullopt;
  }

  // Projection of the inactive members of clause ci (or of all members)
  // onto assignments the stack excludes, preferring `prefer`.
  FlatLemma clause_projection(std::uint32_t ci, std::optional<Var> prefer,
                              bool all_members = false) const {
    FlatLemma out;
    std::vector<std::uint32_t> members(R_.inactive(ci).begin(), R_.inactive(ci).end());
    if (all_members) members.insert(members.end(), R_.active(ci).begin(), R_.active(ci).end());
    for (std::uint32_t m : members) {
      const Assignment* pick = nullptr;
      for (const auto& a : C_[ci][m].assignments()) {
        if (S_.contains(a.var, a.value)) continue;
        if (!pick || (prefer && a.var == *prefer)) pick = &a;
      }
      if (!pick) throw std::logic_error("inactive substlet does not conflict the stack");
      out.add(pick->var, pick->value);
    }
    return out;
  }

  std::optional<FlatLemma> clauses_step(std::size_t e) {
    if (!R_.is_current(e)) return std::nullopt;
    std::uint32_t ci = R_.clause_of(e);
    const Clause& c = C_[ci];
    for (std::size_t p = 0; p < c.domain().size(); ++p) {
      Var v = c.domain()[p];
      std::vector<Const> values;
      for (std::uint32_t m : R_.active(ci)) values.push_back(c.value_at(m, p));
      std::sort(values.begin(), values.end());
      values.erase(std::unique(values.begin(), values.end()), values.end());

      std::vector<std::uint32_t> inter;
      bool subset = true;
      for (std::uint32_t x : S_.current(v)) {
        if (std::binary_search(values.begin(), values.end(), Const{x}))
          inter.push_back(x);
        else
          subset = false;
      }
      if (subset) continue;
      FlatLemma l = clause_projection(ci, v);
      l.add(v, values);
      if (inter.empty()) {
        require_false(l, S_, "clauses");
        learn(l);
        return l;
      }
      narrow(v, std::move(inter), std::move(l));
    }
    return std::nullopt;
  }

  std::optional<FlatLemma> forward() {
    while (true) {
      tick();
      if (s_ < S_.size()) {
        if (auto l = subst_step(s_)) return l;
        ++s_;
      } else if (k_ < R_.size()) {
        if (auto l = clauses_step(k_)) return l;
        ++k_;
      } else {
        return std::nullopt;
      }
    }
  }

  std::optional<FlatLemma> findmatch() {
    std::size_t floor = trail_.size();
    if (auto l = forward()) return unwind(std::move(*l), floor);

    std::optional<Var> pick;
    std::size_t best = 0;
    for (Var v : vars_) {
      std::size_t n = S_.domain_size(v);
      if (n > 1 && (!pick || n < best)) {
        pick = v;
        best = n;
      }
    }
    if (!pick) return std::nullopt;
    Var v = *pick;

    std::vector<std::uint32_t> values(S_.current(v).begin(), S_.current(v).end());
    std::sort(values.begin(), values.end());
    std::vector<std::vector<std::uint32_t>> parts;
    if (cfg_.partition == PartitionMode::Singletons) {
      for (std::uint32_t x : values) parts.push_back({x});
    } else {
      std::size_t half = (values.size() + 1) / 2;
      parts.emplace_back(values.begin(), values.begin() + half);
      parts.emplace_back(values.begin() + half, values.end());
    }

    StackMark smark = S_.mark();
    StackMark rmark = R_.mark();
    std::size_t s_saved = s_, k_saved = k_, trail_saved = trail_.size();
    std::vector<FlatLemma> branch;
    for (const auto& w : parts) {
      S_.domain_refine(v, w);
      ++stats_.decisions;
      auto r = findmatch();
      if (!r) return std::nullopt;
      S_.restore(smark);
      R_.restore(rmark);
      s_ = s_saved;
      k_ = k_saved;
      trail_.resize(trail_saved);
      if (is_false(*r, S_)) return unwind(std::move(*r), floor);
      branch.push_back(std::move(*r));
    }
    FlatLemma l = v_resolvent(v, branch);
    require_false(l, S_, "pick");
    learn(l);
    return unwind(std::move(l), floor);
  }

  FlatLemma unwind(FlatLemma l, std::size_t floor) {
    while (trail_.size() > floor) {
      Propagation p = std::move(trail_.back());
      trail_.pop_back();
      S_.restore(p.before);
      if (is_false(l, S_)) continue;
      FlatLemma pair[2] = {std::move(p.reason), std::move(l)};
      l = v_resolvent(p.var, pair);
      require_false(l, S_, "unwind");
      learn(l);
    }
    s_ = std::min(s_, S_.size());
    return l;
  }

  const std::vector<Clause>& C_;
  const std::vector<Blocking>& B_;
  const SolverConfig& cfg_;
  SubstitutionStack S_;
  RefinementStack R_;
  std::vector<Var> vars_;
  std::vector<Const> consts_;
  std::size_t s_ = 0;
  std::size_t k_ = 0;
  std::vector<Propagation> trail_;
  std::vector<FlatLemma> store_;
  std::vector<std::vector<std::uint32_t>> lemmas_by_var_;
  std::vector<std::vector<std::uint32_t>> var_clauses_;
  std::vector<std::vector<std::uint32_t>> var_blockings_;
  std::vector<FlatLemma> learned_;
  SolveStats stats_;
  std::uint64_t ticks_ = 0;
};

}  // namespace

SolveResult solve_refining(const Gcsp& gcsp, const SolverConfig& cfg) {
  Refiner r(gcsp, cfg);
  return r.run();
}

}  // namespace gmatch
