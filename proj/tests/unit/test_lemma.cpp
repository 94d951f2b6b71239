#include <doctest.h>

#include "../common.hpp"
#include "gmatch/lemma.hpp"

using namespace gmatch;
using namespace gmatch::testing;

namespace {

// Variables x, y, z are ids 0, 1, 2; constant n is id n.
FlatLemma lemma(std::initializer_list<std::pair<std::uint32_t, std::vector<std::uint32_t>>> items) {
  FlatLemma l;
  for (const auto& [v, vals] : items) {
    std::vector<Const> cs;
    for (auto c : vals) cs.push_back(Const{c});
    if (!cs.empty()) l.add(Var{v}, cs);
  }
  return l;
}

Clause clause(std::vector<std::uint32_t> dom, std::vector<std::vector<std::uint32_t>> rows) {
  std::vector<Var> d;
  for (auto v : dom) d.push_back(Var{v});
  std::vector<Substlet> ms;
  for (const auto& r : rows) {
    std::vector<Const> cs;
    for (auto c : r) cs.push_back(Const{c});
    ms.emplace_back(d, cs);
  }
  return Clause(d, ms);
}

const std::uint32_t x = 0, y = 1, z = 2;

}  // namespace

TEST_CASE("v-resolvent") {
  std::vector<FlatLemma> two{lemma({{x, {1, 2, 3}}, {y, {2, 3}}}),
                             lemma({{x, {3, 4}}, {y, {3, 4}}, {z, {2}}})};
  CHECK(v_resolvent(Var{x}, two) == lemma({{x, {3}}, {y, {2, 3, 4}}, {z, {2}}}));

  std::vector<FlatLemma> one{lemma({{x, {1}}, {y, {2}}})};
  CHECK(v_resolvent(Var{x}, one) == one[0]);

  std::vector<FlatLemma> disjoint{lemma({{x, {1}}, {y, {2}}}), lemma({{x, {2}}, {z, {0}}})};
  CHECK(v_resolvent(Var{x}, disjoint) == lemma({{y, {2}}, {z, {0}}}));

  CHECK_THROWS_AS(v_resolvent(Var{x}, std::span<const FlatLemma>{}), std::invalid_argument);
}

TEST_CASE("projection") {
  auto c1 = clause({x, y}, {{1, 2}, {1, 1}, {3, 3}});
  CHECK(is_projection(lemma({{x, {1, 3}}}), c1));
  CHECK(is_projection(lemma({{x, {3}}, {y, {1, 2}}}), c1));
  CHECK_FALSE(is_projection(lemma({{x, {1}}}), c1));
  auto unit = clause({x}, {{5}});
  auto p = projection(unit, [](const Substlet& s) { return s.assignments()[0]; });
  CHECK(p == lemma({{x, {5}}}));
}

TEST_CASE("sigma-resolvent") {
  auto c1 = clause({x, y}, {{1, 2}, {1, 1}, {3, 3}});
  auto c2 = clause({y, z}, {{1, 2}, {2, 1}});
  Blocking sigma(std::vector<Assignment>{{Var{x}, Const{1}}, {Var{z}, Const{2}}});
  std::vector<const Clause*> order{&c1, &c2};
  CHECK(sigma_resolvent(sigma, order) == lemma({{x, {3}}, {z, {1}}}));
  std::vector<Clause> pool{c1, c2};
  CHECK(sigma_resolvent(sigma, pool) == lemma({{x, {3}}, {z, {1}}}));

  auto only = clause({x}, {{1}});
  Blocking sx(std::vector<Assignment>{{Var{x}, Const{1}}});
  std::vector<const Clause*> o1{&only};
  CHECK(sigma_resolvent(sx, o1).empty());
  std::vector<const Clause*> o2{&c1};
  CHECK(sigma_resolvent(sx, o2) == lemma({{x, {3}}}));
}

TEST_CASE("truth and falsehood under substitutions and stacks") {
  auto l = lemma({{x, {1}}, {y, {2, 3}}});
  Substitution t(3);
  t.assign(Var{x}, Const{0});
  CHECK_FALSE(is_true(l, t));
  CHECK_FALSE(is_false(l, t));
  t.assign(Var{y}, Const{4});
  CHECK(is_false(l, t));
  Substitution u(3);
  u.assign(Var{y}, Const{3});
  CHECK(is_true(l, u));

  SubstitutionStack S(3, 5);
  std::vector<std::uint32_t> all{0, 1, 2, 3, 4};
  S.add_initial(Var{x}, all);
  S.add_initial(Var{y}, all);
  CHECK_FALSE(is_true(l, S));
  CHECK_FALSE(is_false(l, S));
  std::vector<std::uint32_t> y23{2, 3};
  S.domain_refine(Var{y}, y23);
  CHECK(is_true(l, S));
  std::vector<std::uint32_t> x0{0};
  std::vector<std::uint32_t> y4{4};
  SubstitutionStack F(3, 5);
  F.add_initial(Var{x}, x0);
  F.add_initial(Var{y}, y4);
  CHECK(is_false(l, F));
  CHECK(is_false(FlatLemma{}, F));
}
