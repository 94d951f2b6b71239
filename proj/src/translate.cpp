#include "gmatch/translate.hpp"

#include <algorithm>
#include <map>

namespace gmatch {

Alpha Alpha::of(WeightSet s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return Alpha{false, std::move(s)};
}

bool Alpha::admits(const WeightSet& w) const {
  if (everything) return true;
  return std::includes(elems.begin(), elems.end(), w.begin(), w.end());
}

namespace {

// Binds the literal's argument pattern against a ground argument tuple.
// Repeated variables must meet equal constants.
std::optional<Substitution> bind_args(const Literal& lit, std::span<const Const> args,
                                 std::size_t num_vars) {
  if (args.size() != lit.args.size()) return std::nullopt;
  Substitution s(num_vars);
  for (std::size_t i = 0; i < args.size(); ++i) {
    Var v = lit.args[i];
    if (auto c = s.get(v)) {
      if (*c != args[i]) return std::nullopt;
    } else {
      s.assign(v, args[i]);
    }
  }
  return s;
}

Substlet restrict_to(const Substitution& s, std::span<const Var> vars) {
  std::vector<Assignment> out;
  for (Var v : vars) out.push_back({v, *s.get(v)});
  return Substlet(std::move(out));
}

// All tuples over `n` constants for the given variables, lexicographic.
template <class F>
void for_each_tuple(std::span<const Var> vars, std::size_t n, std::size_t num_vars, F&& f) {
  if (n == 0 && !vars.empty()) return;
  std::vector<std::uint32_t> digits(vars.size(), 0);
  while (true) {
    Substitution s(num_vars);
    for (std::size_t i = 0; i < vars.size(); ++i) s.assign(vars[i], Const{digits[i]});
    f(s);
    std::size_t i = vars.size();
    while (i > 0 && ++digits[i - 1] == n) digits[--i] = 0;
    if (i == 0) return;
  }
}

void add_clauses(const MatchInstance& inst, const Alpha& alpha, TranslationOutput& out) {
  const auto& I = inst.interp;
  for (std::size_t p = 0; p < inst.formula.premises.size(); ++p) {
    const Literal& a = inst.formula.premises[p];
    auto dom = a.free_vars();
    std::map<Substlet, SubstletOrigin> found;
    if (a.kind == Literal::Kind::Atom) {
      for (std::size_t idx : I.atoms_of(a.pred)) {
        const GroundAtom& g = I.atom(idx);
        if (g.label == a.label) continue;
        if (!alpha.admits(inst.weight_of(idx))) continue;
        auto s = bind_args(a, g.args, inst.num_vars());
        if (!s) continue;
        found.emplace(restrict_to(*s, dom), SubstletOrigin{p, idx});
      }
    } else if (a.kind == Literal::Kind::Equality) {
      // Equality premises conflict whenever the images differ; weight is empty.
      for_each_tuple(dom, I.num_consts(), inst.num_vars(), [&](const Substitution& s) {
        if (literal_conflicts(I, a, s)) found.emplace(restrict_to(s, dom), SubstletOrigin{p, {}});
      });
    } else {
      throw std::invalid_argument("existential literal used as premise");
    }
    std::vector<Substlet> members;
    std::vector<SubstletOrigin> origin;
    for (auto& [s, o] : found) {
      members.push_back(s);
      origin.push_back(o);
    }
    out.gcsp.positive.emplace_back(dom, std::move(members));
    out.substlet_origin.push_back(std::move(origin));
  }
}

void add_blockings(const MatchInstance& inst, const Alpha& alpha, TranslationOutput& out) {
  const auto& I = inst.interp;
  std::map<Substlet, BlockingOrigin> seen;
  auto emit = [&](Substlet s, BlockingOrigin o) {
    if (seen.emplace(s, o).second) {
      out.gcsp.negative.push_back(std::move(s));
      out.blocking_origin.push_back(o);
    }
  };
  for (std::size_t j = 0; j < inst.formula.conclusions.size(); ++j) {
    const Literal& b = inst.formula.conclusions[j];
    auto dom = b.free_vars();
    std::vector<std::pair<Substlet, BlockingOrigin>> local;
    if (b.kind == Literal::Kind::Equality) {
      for (std::uint32_t c = 0; c < I.num_consts(); ++c)
        local.push_back({Substlet(std::vector<Assignment>{{b.args[0], Const{c}},
                                                          {b.args[1], Const{c}}}),
                         BlockingOrigin{j, false}});
    } else {
      // True instances block; with a restriction, so do instances whose
      // extension set holds a conflicting atom of inadmissible weight.
      for (std::size_t idx : I.atoms_of(b.pred)) {
        const GroundAtom& g = I.atom(idx);
        bool is_true = g.label == b.label;
        if (!is_true && alpha.admits(inst.weight_of(idx))) continue;
        auto s = bind_args(b, g.args, inst.num_vars());
        if (!s) continue;
        local.push_back({restrict_to(*s, dom), BlockingOrigin{j, !is_true}});
      }
      std::stable_sort(local.begin(), local.end(),
                       [](const auto& x, const auto& y) { return x.first < y.first; });
      // A true instance takes precedence over a weight-induced duplicate.
      std::vector<std::pair<Substlet, BlockingOrigin>> merged;
      for (auto& e : local) {
        if (!merged.empty() && merged.back().first == e.first) {
          merged.back().second.from_weight &= e.second.from_weight;
          continue;
        }
        merged.push_back(std::move(e));
      }
      local = std::move(merged);
    }
    for (auto& [s, o] : local) emit(std::move(s), o);
  }
}

TranslationOutput translate_impl(const MatchInstance& inst, const Alpha& alpha) {
  TranslationOutput out;
  out.gcsp.symbols = inst.symbols();
  add_clauses(inst, alpha, out);
  add_blockings(inst, alpha, out);
  return out;
}

}  // namespace

TranslationOutput translate(const MatchInstance& inst) { return translate_impl(inst, Alpha::all()); }

TranslationOutput translate_restricted(const MatchInstance& inst, const Alpha& alpha) {
  return translate_impl(inst, alpha);
}

namespace {

bool domain_covers(const Clause& c, const Blocking& b) {
  for (const auto& a : b.assignments())
    if (!c.covers(a.var)) return false;
  return true;
}

bool substlet_implies(const Substlet& s, const Blocking& b) {
  for (const auto& a : b.assignments()) {
    auto v = s.value_of(a.var);
    if (!v || *v != a.value) return false;
  }
  return true;
}

}  // namespace

PreprocessResult preprocess(const Gcsp& input) {
  Gcsp g;
  g.symbols = input.symbols;
  for (const auto& c : input.positive) {
    if (c.domain().empty()) {
      if (c.empty()) return TriviallyUnsat{"empty propositional clause"};
      continue;
    }
    if (c.empty()) return TriviallyUnsat{"empty clause"};
    g.positive.push_back(c);
  }
  for (const auto& b : input.negative)
    if (b.empty()) return TriviallyUnsat{"propositional blocking"};
  g.negative = input.negative;

  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<Blocking> kept;
    for (const auto& b : g.negative) {
      bool unit = std::any_of(g.positive.begin(), g.positive.end(),
                              [&](const Clause& c) { return domain_covers(c, b); });
      if (!unit) {
        kept.push_back(b);
        continue;
      }
      for (auto& c : g.positive) {
        if (!domain_covers(c, b)) continue;
        std::vector<Substlet> rest;
        for (const auto& s : c.members())
          if (!substlet_implies(s, b)) rest.push_back(s);
        if (rest.size() == c.size()) continue;
        if (rest.empty()) return TriviallyUnsat{"unit blocking empties a clause"};
        c = Clause(std::vector<Var>(c.domain().begin(), c.domain().end()), std::move(rest));
      }
      changed = true;
    }
    g.negative = std::move(kept);
  }
  return g;
}

}  // namespace gmatch
