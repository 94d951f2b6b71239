#include <doctest.h>

#include <random>
#include <set>

#include "../common.hpp"
#include "gmatch/filter.hpp"
#include "gmatch/generate.hpp"
#include "gmatch/oracle.hpp"
#include "gmatch/solver.hpp"
#include "gmatch/translate.hpp"

using namespace gmatch;
using namespace gmatch::testing;

namespace {

RefinementStack initial_stack(const Gcsp& g) {
  RefinementStack R(g.positive);
  for (std::uint32_t i = 0; i < g.positive.size(); ++i) R.add_initial(i);
  return R;
}

std::vector<std::vector<std::uint32_t>> active_sets(const RefinementStack& R) {
  std::vector<std::vector<std::uint32_t>> out;
  for (std::uint32_t i = 0; i < R.num_clauses(); ++i) {
    std::vector<std::uint32_t> a(R.active(i).begin(), R.active(i).end());
    std::sort(a.begin(), a.end());
    out.push_back(a);
  }
  return out;
}

}  // namespace

TEST_CASE("circles of the parity GCSP") {
  Gcsp g = parity_chain(2);
  auto adj = clause_adjacency(g.positive, g.negative);
  CHECK(adj[0] == std::vector<std::uint32_t>{1, 2, 3});
  CHECK(adj[4] == std::vector<std::uint32_t>{1, 2, 3});
  CHECK(adj[1] == std::vector<std::uint32_t>{0, 4});
  auto c4 = enumerate_circles(adj, 0, 4);
  CHECK(c4 == std::vector<std::vector<std::uint32_t>>{{0, 1, 4, 2}, {0, 1, 4, 3}, {0, 2, 4, 3}});
  CHECK(enumerate_circles(adj, 0, 5).empty());
  CHECK(enumerate_circles(adj, 0, 3).empty());
}

TEST_CASE("circles on a path and a triangle") {
  Adjacency path{{1}, {0, 2}, {1}};
  CHECK(enumerate_circles(path, 0, 3).empty());
  Adjacency tri{{1, 2}, {0, 2}, {0, 1}};
  CHECK(enumerate_circles(tri, 0, 3).size() == 1);
  CHECK(enumerate_circles(tri, 0, 2).size() == 2);
  CHECK_THROWS(enumerate_circles(tri, 0, 1));
}

TEST_CASE("blocking-connected clauses are related") {
  auto g = gcsp_text("clause (X): (0)\nclause (Y): (0) (1)\nblocking (X,Y): (0,0)\n");
  auto adj = clause_adjacency(g.positive, g.negative);
  CHECK(adj[0] == std::vector<std::uint32_t>{1});
}

TEST_CASE("refine_subset") {
  auto g = gcsp_text("clause (X,Y): (0,0) (0,1)\nclause (Y,Z): (1,1)\n");
  auto R = initial_stack(g);
  std::vector<std::uint32_t> both{0, 1};
  Substitution theta(g.num_vars());
  CHECK(refine_subset(R, both, theta, g.negative));
  REQUIRE(R.active(0).size() == 1);
  CHECK(g.positive[0][R.active(0)[0]] == sl(g.symbols, {{"X", "0"}, {"Y", "1"}}));

  auto d = gcsp_text("clause (X): (0) (1)\nclause (Y): (0) (1)\n");
  auto R2 = initial_stack(d);
  CHECK(refine_subset(R2, both, Substitution(2), d.negative));
  CHECK(R2.size() == 2);

  auto R3 = initial_stack(d);
  Substitution t3(2);
  t3.assign(*d.symbols.find_var("X"), *d.symbols.find_const("1"));
  std::vector<std::uint32_t> one{0};
  CHECK(refine_subset(R3, one, t3, d.negative));
  CHECK(R3.active(0).size() == 1);
}

TEST_CASE("local consistency: refutation and satisfiable instance") {
  auto bad = gcsp_text("clause (X,Y): (0,0) (1,1)\nclause (Y,Z): (2,0) (3,1)\n");
  CHECK(filter_gcsp(bad, 1).bottom);
  CHECK(enumerate_solutions(bad).empty());

  auto phi1 = std::get<Gcsp>(preprocess(translate(load_match("matching_phi1.txt")).gcsp));
  auto f = filter_gcsp(phi1, 1);
  CHECK_FALSE(f.bottom);
  CHECK(enumerate_solutions(f.gcsp).size() == 5);
}

TEST_CASE("parity GCSP survives S=4 but is unsatisfiable") {
  Gcsp g = parity_chain(2);
  for (int S = 1; S <= 4; ++S) {
    auto f = filter_gcsp(g, S);
    CHECK_FALSE(f.bottom);
    CHECK(f.stats.removed == 0);
  }
  CHECK(enumerate_solutions(g).empty());
  CHECK(solve_backtrack(g).status == SolveStatus::Unsat);
}

TEST_CASE("filtering under a mark restores exactly") {
  std::mt19937_64 rng(61);
  for (int i = 0; i < 200; ++i) {
    Gcsp g = random_gcsp(rng);
    bool empty = false;
    for (const auto& c : g.positive) empty = empty || c.empty();
    if (empty) continue;
    auto R = initial_stack(g);
    auto before = active_sets(R);
    auto size = R.size();
    auto m = R.mark();
    Substitution theta(g.num_vars());
    local_consistency(R, theta, 2, g.negative);
    R.restore(m);
    CHECK(R.size() == size);
    CHECK(active_sets(R) == before);
  }
}

TEST_CASE("property: filter removals are sound, bottom implies unsatisfiable") {
  std::mt19937_64 rng(62);
  for (int i = 0; i < 400; ++i) {
    Gcsp raw = random_gcsp(rng);
    auto pre = preprocess(raw);
    if (!std::holds_alternative<Gcsp>(pre)) continue;
    const Gcsp& g = std::get<Gcsp>(pre);
    auto sols = enumerate_solutions(g);
    for (int S = 1; S <= 3; ++S) {
      auto f = filter_gcsp(g, S);
      if (f.bottom) {
        CHECK(sols.empty());
        continue;
      }
      for (const auto& s : sols) CHECK(is_solution(f.gcsp, s));
    }
  }
}

namespace {

Gcsp shifted(const Gcsp& g, std::uint32_t offset) {
  Gcsp out;
  auto shift = [&](const Substlet& s) {
    std::vector<Assignment> a(s.assignments().begin(), s.assignments().end());
    for (auto& x : a) x.var.id += offset;
    return Substlet(a);
  };
  for (const auto& c : g.positive) {
    std::vector<Var> dom(c.domain().begin(), c.domain().end());
    for (auto& v : dom) v.id += offset;
    std::vector<Substlet> ms;
    for (const auto& m : c.members()) ms.push_back(shift(m));
    out.positive.emplace_back(dom, ms);
  }
  for (const auto& b : g.negative) out.negative.push_back(shift(b));
  return out;
}

}  // namespace

TEST_CASE("property: a disconnected split refines like its halves") {
  std::mt19937_64 rng(63);
  for (int i = 0; i < 300; ++i) {
    Gcsp a = random_gcsp(rng), b = shifted(random_gcsp(rng), 6);
    Gcsp both;
    both.positive = a.positive;
    both.positive.insert(both.positive.end(), b.positive.begin(), b.positive.end());
    both.negative = a.negative;
    both.negative.insert(both.negative.end(), b.negative.begin(), b.negative.end());
    bool empty = false;
    for (const auto& c : both.positive) empty = empty || c.empty();
    if (empty) continue;

    std::vector<std::uint32_t> all, first, second;
    for (std::uint32_t k = 0; k < both.positive.size(); ++k) {
      all.push_back(k);
      (k < a.positive.size() ? first : second).push_back(k);
    }
    auto joint = initial_stack(both);
    bool ok_joint = refine_subset(joint, all, Substitution(12), both.negative);
    auto split = initial_stack(both);
    bool ok1 = refine_subset(split, first, Substitution(12), both.negative);
    bool ok2 = refine_subset(split, second, Substitution(12), both.negative);
    CHECK(ok_joint == (ok1 && ok2));
    if (ok_joint) CHECK(active_sets(joint) == active_sets(split));
  }
}
