#include <algorithm>

#include "gmatch/lemma.hpp"
#include "gmatch/solver.hpp"
#include "gmatch/stacks.hpp"

namespace gmatch {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Sat: return "SAT";
    case SolveStatus::Unsat: return "UNSAT";
    case SolveStatus::TriviallyUnsat: return "UNSAT(trivial)";
    case SolveStatus::Unknown: return "UNKNOWN";
  }
  return "?";
}

namespace {

void require_false(const FlatLemma& l, const Substitution& theta, const char* where) {
  if (!is_false(l, theta)) throw std::logic_error(std::string("lemma not false at ") + where);
}

class Backtracker {
 public:
  Backtracker(const Gcsp& g, const SolverConfig& cfg)
      : C_(g.positive), B_(g.negative), cfg_(cfg), theta_(g.num_vars()), R_(g.positive) {
    std::size_t nv = g.num_vars();
    var_clauses_.resize(nv);
    for (std::uint32_t i = 0; i < C_.size(); ++i)
      for (Var v : C_[i].domain()) var_clauses_[v.id].push_back(i);

    std::vector<std::vector<std::uint32_t>> connected(nv);
    for (const auto& b : B_)
      for (const auto& a : b.assignments())
        for (const auto& o : b.assignments()) connected[a.var.id].push_back(o.var.id);
    affected_.resize(nv);
    for (std::uint32_t v = 0; v < nv; ++v) {
      auto& out = affected_[v];
      out = var_clauses_[v];
      for (std::uint32_t w : connected[v])
        out.insert(out.end(), var_clauses_[w].begin(), var_clauses_[w].end());
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
    }

    clause_blockings_.resize(C_.size());
    for (std::uint32_t i = 0; i < C_.size(); ++i)
      for (std::uint32_t j = 0; j < B_.size(); ++j)
        for (const auto& a : B_[j].assignments())
          if (C_[i].covers(a.var)) {
            clause_blockings_[i].push_back(j);
            break;
          }
    lemmas_by_var_.resize(nv);
  }

  SolveResult run() {
    SolveResult res;
    try {
      std::optional<FlatLemma> conflict = preproc();
      if (!conflict) conflict = findmatch();
      if (conflict) {
        FlatLemma root = unwind(*conflict, 0);
        require_false(root, theta_, "root");
        res.status = SolveStatus::Unsat;
        res.root_lemma = std::move(root);
      } else {
        res.status = SolveStatus::Sat;
        res.solution = theta_;
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
  struct Group {
    std::uint32_t clause;
    std::size_t start;  // theta size before the group's assignments
  };

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

  std::optional<FlatLemma> preproc() {
    for (std::uint32_t k = 0; k < C_.size(); ++k) {
      R_.add_initial(k);
      const Clause& c = C_[k];
      if (c.empty()) return derive(k, {});
      std::size_t start = theta_.size();
      for (std::size_t p = 0; p < c.domain().size(); ++p) {
        Const x = c.value_at(0, p);
        bool agreed = true;
        for (std::size_t m = 1; m < c.size() && agreed; ++m) agreed = c.value_at(m, p) == x;
        if (!agreed) continue;
        Var v = c.domain()[p];
        if (auto y = theta_.get(v)) {
          if (*y != x) return derive(k, {});
          continue;
        }
        Substlet single(std::vector<Assignment>{{v, x}});
        for (const auto& sigma : B_)
          if (implies_with(theta_, single, sigma)) return derive(k, {});
        theta_.assign(v, x);
        ++stats_.propagations;
      }
      if (theta_.size() > start) groups_.push_back({k, start});
    }
    return std::nullopt;
  }

  bool blocked(std::uint32_t ci, const Substlet& s) const {
    for (std::uint32_t j : clause_blockings_[ci])
      if (implies_with(theta_, s, B_[j])) return true;
    return false;
  }

  void assign_agreed(std::uint32_t ci, std::span<const std::uint32_t> kept) {
    const Clause& c = C_[ci];
    std::size_t start = theta_.size();
    for (std::size_t p = 0; p < c.domain().size(); ++p) {
      Var v = c.domain()[p];
      if (theta_.assigned(v)) continue;
      Const x = c.value_at(kept[0], p);
      bool agreed = true;
      for (std::size_t m = 1; m < kept.size() && agreed; ++m) agreed = c.value_at(kept[m], p) == x;
      if (!agreed) continue;
      theta_.assign(v, x);
      ++stats_.propagations;
    }
    if (theta_.size() > start) groups_.push_back({ci, start});
  }

  std::optional<FlatLemma> forward() {
    std::vector<std::uint32_t> kept;
    while (s_ < theta_.size()) {
      tick();
      Var v = theta_[s_].var;
      ++s_;
      for (std::uint32_t idx : lemmas_by_var_[v.id])
        if (is_false(store_[idx], theta_)) return store_[idx];
      for (std::uint32_t ci : affected_[v.id]) {
        auto active = R_.active(ci);
        kept.clear();
        for (std::uint32_t m : active) {
          const Substlet& s = C_[ci][m];
          if (conflicts(theta_, s) || blocked(ci, s)) continue;
          kept.push_back(m);
        }
        if (kept.empty()) {
          FlatLemma l = derive(ci, {});
          require_false(l, theta_, "forward");
          learn(l);
          return l;
        }
        if (kept.size() < active.size()) {
          R_.refine(ci, kept);
          assign_agreed(ci, kept);
        }
      }
    }
    return std::nullopt;
  }

  std::optional<FlatLemma> findmatch() {
    tick();
    std::size_t floor = groups_.size();
    if (auto conflict = forward()) return unwind(std::move(*conflict), floor);

    std::optional<std::uint32_t> pick;
    std::size_t best = 0;
    for (std::uint32_t i = 0; i < C_.size(); ++i) {
      std::size_t n = R_.active(i).size();
      if (n > 1 && (!pick || n < best)) {
        pick = i;
        best = n;
      }
    }
    if (!pick) return std::nullopt;
    std::uint32_t ci = *pick;

    std::vector<std::uint32_t> members(R_.active(ci).begin(), R_.active(ci).end());
    std::sort(members.begin(), members.end());
    if (cfg_.hint)
      std::stable_partition(members.begin(), members.end(), [&](std::uint32_t m) {
        return !conflicts(*cfg_.hint, C_[ci][m]);
      });

    std::size_t theta_size = theta_.size();
    StackMark rmark = R_.mark();
    std::size_t s_saved = s_;
    std::size_t groups_saved = groups_.size();
    std::vector<FlatLemma> branch;
    for (std::uint32_t m : members) {
      R_.refine(ci, std::span<const std::uint32_t>(&m, 1));
      std::size_t start = theta_.size();
      for (const auto& a : C_[ci][m].assignments())
        if (!theta_.assigned(a.var)) theta_.assign(a.var, a.value);
      groups_.push_back({ci, start});
      ++stats_.decisions;

      auto r = findmatch();
      if (!r) return std::nullopt;
      theta_.truncate(theta_size);
      R_.restore(rmark);
      s_ = s_saved;
      groups_.resize(groups_saved);
      if (is_false(*r, theta_)) return unwind(std::move(*r), floor);
      branch.push_back(std::move(*r));
    }
    FlatLemma l = derive(ci, std::move(branch));
    require_false(l, theta_, "pick");
    learn(l);
    return unwind(std::move(l), floor);
  }

  // Turns a lemma false under theta into one false under theta as it was
  // before the groups above `floor` were assigned.
  FlatLemma unwind(FlatLemma l, std::size_t floor) {
    while (groups_.size() > floor) {
      Group g = groups_.back();
      groups_.pop_back();
      theta_.truncate(g.start);
      if (is_false(l, theta_)) continue;
      l = derive(g.clause, {l});
      require_false(l, theta_, "unwind");
      learn(l);
    }
    s_ = std::min(s_, theta_.size());
    return l;
  }

  // Every member of clause ci must conflict theta, make a lemma of lam false
  // together with theta, or imply a blocking together with theta.
  FlatLemma derive(std::uint32_t ci, std::vector<FlatLemma> lam) {
    const Clause& c = C_[ci];
    for (const auto& s : c.members()) {
      if (conflicts(theta_, s)) continue;
      bool covered = std::any_of(lam.begin(), lam.end(),
                                 [&](const FlatLemma& l) { return is_false_with(l, theta_, s); });
      if (covered) continue;
      const Blocking* hit = nullptr;
      for (const auto& sigma : B_)
        if (implies_with(theta_, s, sigma)) {
          hit = &sigma;
          break;
        }
      if (!hit) throw std::logic_error("derive: substlet is neither excluded nor blocked");
      FlatLemma sr = sigma_resolvent(*hit, std::span<const Clause>(C_));
      if (is_false(sr, theta_)) return sr;
      lam.push_back(std::move(sr));
    }
    return derive_rec(c, lam);
  }

  FlatLemma derive_rec(const Clause& c, std::vector<FlatLemma>& lam) {
    for (const auto& l : lam)
      if (is_false(l, theta_)) return l;

    FlatLemma mu = projection_of_conflicts(c);
    std::optional<Var> v;
    for (Var u : c.domain())
      if (!theta_.assigned(u)) {
        v = u;
        break;
      }
    if (!v) {
      for (const auto& s : c.members())
        if (!conflicts(theta_, s)) throw std::logic_error("derive: uncovered substlet");
      return mu;
    }

    std::size_t pos = c.position_of(*v);
    std::vector<Const> values;
    for (std::size_t m = 0; m < c.size(); ++m)
      if (!conflicts(theta_, c[m])) values.push_back(c.value_at(m, pos));
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());

    std::vector<FlatLemma> parts;
    for (Const x : values) {
      theta_.assign(*v, x);
      FlatLemma lx = derive_rec(c, lam);
      theta_.pop();
      if (is_false(lx, theta_)) return lx;
      lam.push_back(lx);
      parts.push_back(std::move(lx));
    }
    mu.add(*v, values);
    parts.insert(parts.begin(), std::move(mu));
    return v_resolvent(*v, parts);
  }

  // One clashing assignment per conflicting member, preferring the variable
  // assigned earliest.
  FlatLemma projection_of_conflicts(const Clause& c) const {
    FlatLemma out;
    for (const auto& s : c.members()) {
      const Assignment* best = nullptr;
      for (const auto& a : s.assignments()) {
        auto y = theta_.get(a.var);
        if (!y || *y == a.value) continue;
        if (!best || theta_.position(a.var) < theta_.position(best->var)) best = &a;
      }
      if (best) out.add(best->var, best->value);
    }
    return out;
  }

  const std::vector<Clause>& C_;
  const std::vector<Blocking>& B_;
  const SolverConfig& cfg_;
  Substitution theta_;
  RefinementStack R_;
  std::vector<Group> groups_;
  std::size_t s_ = 0;
  std::vector<FlatLemma> store_;
  std::vector<std::vector<std::uint32_t>> lemmas_by_var_;
  std::vector<std::vector<std::uint32_t>> var_clauses_;
  std::vector<std::vector<std::uint32_t>> affected_;
  std::vector<std::vector<std::uint32_t>> clause_blockings_;
  std::vector<FlatLemma> learned_;
  SolveStats stats_;
  std::uint64_t ticks_ = 0;
};

}  // namespace

SolveResult solve_backtrack(const Gcsp& gcsp, const SolverConfig& cfg) {
  Backtracker b(gcsp, cfg);
  return b.run();
}

}  // namespace gmatch
