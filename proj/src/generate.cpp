#include "gmatch/generate.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <stdexcept>

namespace gmatch {

namespace {

std::size_t pick(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool coin(std::mt19937_64& rng, double p) { return std::bernoulli_distribution(p)(rng); }

std::vector<Var> sample_vars(std::mt19937_64& rng, std::span<const Var> from, std::size_t k) {
  std::vector<Var> out;
  std::sample(from.begin(), from.end(), std::back_inserter(out), k, rng);
  std::sort(out.begin(), out.end());
  return out;
}

Truth random_truth(std::mt19937_64& rng) { return static_cast<Truth>(pick(rng, 0, 2)); }

}  // namespace

Gcsp random_gcsp(std::mt19937_64& rng, const GcspParams& p) {
  Gcsp g;
  std::size_t nv = pick(rng, 1, p.max_vars);
  std::size_t nc = pick(rng, 1, p.max_consts);
  for (std::size_t i = 0; i < nv; ++i) g.symbols.intern_var("X" + std::to_string(i));
  for (std::size_t i = 0; i < nc; ++i) g.symbols.intern_const(std::to_string(i));
  std::vector<Var> all(nv);
  for (std::uint32_t i = 0; i < nv; ++i) all[i] = Var{i};

  std::size_t ncl = pick(rng, 1, p.max_clauses);
  std::vector<Var> used;
  for (std::size_t i = 0; i < ncl; ++i) {
    auto dom = sample_vars(rng, all, pick(rng, 1, std::min(p.max_arity, nv)));
    std::size_t nm = coin(rng, 0.02) ? 0 : pick(rng, 1, p.max_members);
    std::vector<Substlet> members;
    for (std::size_t m = 0; m < nm; ++m) {
      std::vector<Const> vals;
      for (std::size_t k = 0; k < dom.size(); ++k)
        vals.push_back(Const{static_cast<std::uint32_t>(pick(rng, 0, nc - 1))});
      members.emplace_back(dom, vals);
    }
    used.insert(used.end(), dom.begin(), dom.end());
    g.positive.emplace_back(std::move(dom), std::move(members));
  }
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());

  std::size_t nb = pick(rng, 0, p.max_blockings);
  for (std::size_t j = 0; j < nb; ++j) {
    auto dom = sample_vars(rng, used, pick(rng, 1, std::min<std::size_t>(2, used.size())));
    std::vector<Const> vals;
    for (std::size_t k = 0; k < dom.size(); ++k)
      vals.push_back(Const{static_cast<std::uint32_t>(pick(rng, 0, nc - 1))});
    g.negative.emplace_back(dom, vals);
  }
  return g;
}

MatchInstance random_match_instance(std::mt19937_64& rng, const MatchParams& p) {
  MatchInstance inst;
  auto& I = inst.interp;
  std::uint32_t P = I.intern_pred("P");
  std::uint32_t Q = I.intern_pred("Q");
  std::uint32_t R = I.intern_pred("R");
  std::size_t nc = pick(rng, 1, p.max_consts);
  std::vector<Const> cs;
  for (std::size_t i = 0; i < nc; ++i) cs.push_back(I.intern_const("c" + std::to_string(i)));

  auto weight = [&] {
    WeightSet w;
    for (std::uint32_t k = 1; k <= p.max_weight; ++k)
      if (coin(rng, 0.25)) w.push_back(k);
    return w;
  };
  std::vector<WeightSet> weights;
  auto add = [&](GroundAtom a) {
    std::size_t before = I.atoms().size();
    I.add(std::move(a));
    if (I.atoms().size() > before) weights.push_back(weight());
  };
  for (Const c : cs) add(GroundAtom{Interpretation::kDomain, Truth::T, {c}});
  for (std::uint32_t pred : {P, Q})
    for (Const a : cs)
      for (Const b : cs)
        if (coin(rng, p.atom_density)) add(GroundAtom{pred, random_truth(rng), {a, b}});
  for (Const a : cs)
    if (coin(rng, p.atom_density)) add(GroundAtom{R, random_truth(rng), {a}});
  inst.weights = std::move(weights);

  std::size_t nv = pick(rng, 1, p.max_vars);
  for (std::size_t i = 0; i < nv; ++i) inst.var_names.push_back("X" + std::to_string(i));
  auto var = [&] { return Var{static_cast<std::uint32_t>(pick(rng, 0, nv - 1))}; };

  auto atom_lit = [&](auto&& chooser) {
    if (coin(rng, 0.25)) return Literal::atom(R, random_truth(rng), {chooser()});
    return Literal::atom(coin(rng, 0.5) ? P : Q, random_truth(rng), {chooser(), chooser()});
  };
  std::size_t np = pick(rng, 1, p.max_premises);
  for (std::size_t i = 0; i < np; ++i) {
    if (nv >= 2 && coin(rng, 0.1)) {
      Var a = var(), b = var();
      if (a != b) {
        inst.formula.premises.push_back(Literal::equality(a, b));
        continue;
      }
    }
    if (coin(rng, 0.05)) {
      inst.formula.premises.push_back(Literal::atom(Interpretation::kDomain, Truth::F, {var()}));
      continue;
    }
    inst.formula.premises.push_back(atom_lit(var));
  }
  auto pv = inst.formula.premise_vars();
  auto pvar = [&] { return pv[pick(rng, 0, pv.size() - 1)]; };
  std::size_t nq = pick(rng, 0, p.max_conclusions);
  for (std::size_t i = 0; i < nq; ++i) {
    double r = std::uniform_real_distribution<double>(0, 1)(rng);
    if (r < 0.15 && pv.size() >= 2) {
      Var a = pvar(), b = pvar();
      if (a != b) inst.formula.conclusions.push_back(Literal::equality(a, b));
    } else if (r < 0.35) {
      Var y{static_cast<std::uint32_t>(inst.var_names.size())};
      inst.var_names.push_back("Y" + std::to_string(i));
      std::uint32_t pred = coin(rng, 0.5) ? P : Q;
      std::vector<Var> args{pvar(), y};
      if (coin(rng, 0.5)) std::swap(args[0], args[1]);
      inst.formula.conclusions.push_back(Literal::exists(y, pred, random_truth(rng), args));
    } else {
      inst.formula.conclusions.push_back(atom_lit(pvar));
    }
  }
  return inst;
}

Gcsp parity_chain(std::size_t n) {
  if (n < 2) throw std::invalid_argument("parity_chain needs n >= 2");
  Gcsp g;
  auto prefix = [](std::size_t i) -> std::string {
    if (i == 0) return "X";
    if (i == 1) return "Y";
    return "T" + std::to_string(i) + "_";
  };
  std::vector<std::array<Var, 3>> triples(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < 3; ++j) triples[i][j] = g.symbols.intern_var(prefix(i) + std::to_string(j + 1));
  Const zero = g.symbols.intern_const("0");
  Const one = g.symbols.intern_const("1");
  auto bit = [&](int b) { return b ? one : zero; };

  auto triple_clause = [&](std::size_t i, int parity) {
    std::vector<Var> dom(triples[i].begin(), triples[i].end());
    std::vector<Substlet> members;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c)
          if ((a + b + c) % 2 == parity) members.emplace_back(dom, std::vector<Const>{bit(a), bit(b), bit(c)});
    g.positive.emplace_back(dom, std::move(members));
  };
  for (std::size_t i = 0; i < n; ++i) {
    triple_clause(i, i + 1 == n ? 1 : 0);
    if (i + 1 == n) break;
    for (std::size_t j = 0; j < 3; ++j) {
      std::vector<Var> dom{triples[i][j], triples[i + 1][j]};
      std::vector<Substlet> members{Substlet(dom, std::vector<Const>{zero, zero}),
                                    Substlet(dom, std::vector<Const>{one, one})};
      g.positive.emplace_back(dom, std::move(members));
    }
  }
  return g;
}

}  // namespace gmatch
